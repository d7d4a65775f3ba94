// SPDX-License-Identifier: Apache-2.0

#ifndef KEP_SI_LANCZOS_HPP
#define KEP_SI_LANCZOS_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>
#include "kep/lanczos.hpp"
#include "kep/ldl.hpp"
#include "kep/tridiag.hpp"

namespace kep
{

//
// Shift-and-invert Lanczos in the B^{-1}-inner product:
//   (A - sigma B)^{-1} V~_j = B^{-1} V~_j T~_j + B^{-1} v~_{j+1} beta~_j e_j^T.
// Alongside each basis vector v~_i the state keeps its companion w_i = B^{-1} v~_i and the
// shifted solve z_i = (A - sigma B)^{-1} v~_i.
//
struct SiLanczosState
{
  double sigma = 0.0;
  std::vector<std::vector<double>> basis;
  std::vector<std::vector<double>> companions;
  std::vector<std::vector<double>> solves;
  std::vector<double> alphas;
  std::vector<double> betas;  // betas.back() is beta~_j
  std::vector<double> next;
  std::vector<double> next_companion;
  bool breakdown = false;

  Index Steps() const { return static_cast<Index>(alphas.size()); }
  double LastBeta() const { return betas.empty() ? 0.0 : betas.back(); }
};

// Normalizes the start vector in the B^{-1}-norm.
SiLanczosState StartSiLanczos(double sigma, std::vector<double> v1, const LdlFactorization &F_B);

void SiLanczosStep(SiLanczosState &state, const SparseSymmetric &B,
                   const LdlFactorization &F_shift, const LdlFactorization &F_B);

struct ApproxEigenpair
{
  Index ritz_index = 0;  // position of theta~ in the ascending Ritz spectrum
  double theta_tilde = 0.0;
  double lambda = 0.0;  // sigma + 1 / theta~
  double last_component = 0.0;  // e_j^T y~
  double s = 0.0;       // beta~_j e_j^T y~ / theta~, the B^{-1}-norm of the residual
  double eta = 0.0;     // error-bound half width
  double bound_lower = 0.0;
  double bound_upper = 0.0;
  double rel_res_2norm = 0.0;
  std::optional<double> rel_diff_2norm;
  std::vector<double> y;   // Ritz vector of T~_j
  std::vector<double> x2;  // (A - sigma B)^{-1} V~_j y~
};

// Eigenpairs of T~_j sorted by |theta~| descending (nearest to sigma first). x2, the residual
// norm and the bound are filled for the first `count` pairs; the rest carry only Ritz data.
std::vector<ApproxEigenpair> ExtractEigenpairs(const SiLanczosState &state,
                                               const SparseSymmetric &A,
                                               const SparseSymmetric &B, Index count);

// B^{-1} V~_j y~ for the pair.
std::vector<double> ComputeX1(const SiLanczosState &state, const ApproxEigenpair &pair);

struct PairOrthogonality
{
  double direct = 0.0;       // |x_l^T B x_m| / (||x_l||_B ||x_m||_B)
  double closed_form = 0.0;  // |s_l| / sqrt(1 + s_l^2) * |s_m| / sqrt(1 + s_m^2)
};

PairOrthogonality PairwiseBOrthogonality(const ApproxEigenpair &l, const ApproxEigenpair &m,
                                         const SparseSymmetric &B);

struct ConvergenceReport
{
  bool inclusion = false;
  bool disjointness = false;
  bool residual = false;
  bool difference = false;
  double max_rel_res = 0.0;
  std::optional<double> max_rel_diff;

  bool Converged() const { return inclusion && disjointness && residual && difference; }
};

// Checks the m nearest pairs against the interval and tolerances. `previous` holds the x2
// vectors of the previous iteration in the same order (empty when unavailable); the
// relative differences are written back into pairs.
ConvergenceReport ValidateAndTest(std::vector<ApproxEigenpair> &pairs,
                                  const BracketInterval &interval, Index m, double tau_res,
                                  double tau_diff,
                                  const std::vector<std::vector<double>> &previous);

struct SiLanczosOptions
{
  double tau_res = 1e-10;
  double tau_diff = 1e-10;
  Index max_iterations = 500;
  Index max_restarts = 3;
  std::uint64_t seed = 0;
  // Also record every pair's bound (from j = 1 on), the residual identity and all pairwise
  // orthogonality values per iteration.
  bool record_diagnostics = false;
};

struct SiPairRecord
{
  double lambda = 0.0;
  double eta = 0.0;
  double bound_lower = 0.0;
  double bound_upper = 0.0;
  double s = 0.0;
  double rel_res_2norm = 0.0;
  std::optional<double> rel_diff_2norm;
  // ||(A - lambda B) x2 + v~_{j+1} s||_2 / (||A x2||_2 + |lambda| ||B x2||_2), recorded with
  // record_diagnostics.
  std::optional<double> residual_identity_error;

  bool operator==(const SiPairRecord &) const = default;
};

struct SiOrthogonalityRecord
{
  Index l = 0;  // positions within the iteration's pairs (ascending lambda)
  Index m = 0;
  double direct = 0.0;
  double closed_form = 0.0;

  bool operator==(const SiOrthogonalityRecord &) const = default;
};

struct SiIterationRecord
{
  Index j = 0;
  bool inclusion = false;
  bool disjointness = false;
  bool residual = false;
  bool difference = false;
  // The m pairs nearest sigma, ascending by lambda.
  std::vector<SiPairRecord> pairs;
  // Target pair against the others, or all pairs with record_diagnostics.
  std::vector<SiOrthogonalityRecord> orthogonality;
  // [lower, upper] of every Ritz pair of T~_j, with record_diagnostics.
  std::vector<std::pair<double, double>> all_bounds;

  bool operator==(const SiIterationRecord &) const = default;
};

enum class SiStatus
{
  Converged,
  MaxIterations,
  Breakdown
};

struct KthEigenpairResult
{
  SiStatus status = SiStatus::MaxIterations;
  double sigma = 0.0;
  bool shift_perturbed = false;
  double lambda = 0.0;
  std::vector<double> x;
  double rel_res_2norm = 0.0;
  double eta = 0.0;
  Index iterations = 0;
  Index restarts = 0;
  // First iteration at which each criterion held for all m pairs (0 when never).
  Index first_bound = 0;
  Index first_residual = 0;
  Index first_difference = 0;
  std::vector<SiIterationRecord> trace;
  std::size_t factor_nonzeros = 0;
};

// Computes the k-th eigenpair from a validated interval holding m = nu_upper - nu_lower
// eigenvalues, using the interval midpoint as the shift.
KthEigenpairResult ComputeKthEigenpair(ShiftedPencil &pencil, const LdlFactorization &F_B,
                                       Index k, const BracketInterval &interval,
                                       const SiLanczosOptions &options);

}  // namespace kep

#endif  // KEP_SI_LANCZOS_HPP
