// SPDX-License-Identifier: Apache-2.0

#ifndef KEP_LANCZOS_HPP
#define KEP_LANCZOS_HPP

#include <cstdint>
#include <optional>
#include <vector>
#include "kep/ldl.hpp"
#include "kep/sparse.hpp"
#include "kep/tridiag.hpp"

namespace kep
{

//
// Generalized Lanczos process for (A, B) in the B-inner product:
//   A V_j = B V_j T_j + B v_{j+1} beta_j e_j^T,
// with V_j B-orthonormal and T_j = tridiag(betas, alphas, betas).
//
struct LanczosState
{
  std::vector<std::vector<double>> basis;    // v_1 .. v_j
  std::vector<std::vector<double>> b_basis;  // B v_1 .. B v_j
  std::vector<double> alphas;
  std::vector<double> betas;  // betas[i] couples v_{i+1} and v_{i+2}; betas.back() is beta_j
  std::vector<double> next;   // v_{j+1}
  std::vector<double> b_next; // B v_{j+1}
  bool breakdown = false;

  Index Steps() const { return static_cast<Index>(alphas.size()); }
};

// Normalizes the start vector in the B-norm. Throws on a zero vector.
LanczosState StartLanczos(const SparseSymmetric &B, std::vector<double> v1);

// Appends one basis vector with full (twice-applied) B-orthogonal reorthogonalization. Sets
// state.breakdown when beta_j falls below 1e-14 times the B-norm of B^{-1} A v_j; the
// state then holds an invariant subspace and further steps are rejected.
void LanczosStep(LanczosState &state, const SparseSymmetric &A, const LdlFactorization &B_factor,
                 const SparseSymmetric &B);

// Ritz values and vectors of the current T_j.
RitzSpectrum RitzValues(const LanczosState &state, bool want_vectors = true);

// Half-open interval [lower, upper) with the pencil's eigenvalue counts below each end.
struct BracketInterval
{
  double lower = 0.0;
  double upper = 0.0;
  Index nu_lower = 0;
  Index nu_upper = 0;

  Index Count() const { return nu_upper - nu_lower; }
  bool Contains(Index k) const { return nu_lower < k && k <= nu_upper; }
  double Length() const { return upper - lower; }

  bool operator==(const BracketInterval &) const = default;
};

struct IntervalSearchOptions
{
  std::uint64_t seed = 0;
  Index max_iterations = 200;
  Index max_restarts = 3;
  // Estimated relative error at which the extreme Ritz value on the side of the target
  // counts as converged. From then on the Ritz sequence cannot approach lambda_k (always the
  // case for k = 1 and k = n) and the search steps past it instead.
  double extreme_convergence = 1e-8;
  bool record_ritz = false;
};

struct IntervalSearchStep
{
  Index j = 0;
  double sigma = 0.0;
  Index nu = 0;
  double theta_first = 0.0;
  double theta_last = 0.0;
  // True for points placed beyond a converged extreme Ritz value.
  bool extension = false;
  // True when the shift was nudged after an exact singularity.
  bool perturbed = false;

  bool operator==(const IntervalSearchStep &) const = default;
};

struct IntervalSearchResult
{
  BracketInterval interval;
  Index iterations = 0;  // Lanczos steps j of the successful run
  Index restarts = 0;
  bool extended = false;
  std::vector<IntervalSearchStep> trace;
  // Full Ritz spectra per step when IntervalSearchOptions::record_ritz is set.
  std::vector<std::vector<double>> ritz_history;
};

// Sets an interval containing the k-th smallest eigenvalue from Ritz values of a randomly
// started Lanczos run, validating each candidate end point by an inertia count.
IntervalSearchResult FindInitialInterval(ShiftedPencil &pencil, const LdlFactorization &B_factor,
                                         Index k, const IntervalSearchOptions &options);

// Inertia count with shift perturbation on exact singularity: the shift moves by growing
// multiples of the unit roundoff scaled to |sigma| and `scale`. Returns the shift used.
std::pair<double, Index> CountBelowPerturbed(ShiftedPencil &pencil, double sigma, double scale,
                                             bool *perturbed = nullptr);

}  // namespace kep

#endif  // KEP_LANCZOS_HPP
