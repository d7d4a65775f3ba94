// SPDX-License-Identifier: Apache-2.0

#ifndef KEP_DRIVER_HPP
#define KEP_DRIVER_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>
#include "kep/bisection.hpp"
#include "kep/lanczos.hpp"
#include "kep/ldl.hpp"
#include "kep/si_lanczos.hpp"
#include "kep/sparse.hpp"
#include "kep/symbolic.hpp"

namespace kep
{

struct SolverConfig
{
  Index k = 1;
  Index m_max = 20;
  double tau_res = 1e-10;
  double tau_diff = 1e-10;
  // Absolute tolerance of the plain bisection reference mode.
  double tau_abs = 1e-6;
  std::uint64_t seed = 0;
  Index max_lanczos = 200;
  Index max_bisect = 128;
  Index max_si = 500;
  bool verify = false;
  // Per-iteration bounds of all Ritz pairs, identity errors and all pairwise cosines.
  bool record_diagnostics = false;
  // Wall-clock times are left out of the report unless requested so that reports of
  // identical runs compare byte for byte.
  bool timings = false;

  bool operator==(const SolverConfig &) const = default;
};

// Throws Error naming the first invalid field.
void ValidateConfig(const SolverConfig &config, Index n);

//
// Shared set-up of a pencil: one ordering and symbolic factorization of the union pattern
// (reused for B when B has exactly that pattern) and the factorization of B. B must be
// positive definite. Keeps references to A and B.
//
class PreparedPencil
{
public:
  PreparedPencil(const SparseSymmetric &A, const SparseSymmetric &B);
  PreparedPencil(const PreparedPencil &) = delete;
  PreparedPencil &operator=(const PreparedPencil &) = delete;

  ShiftedPencil &Pencil() { return pencil_; }
  const LdlFactorization &BFactor() const { return b_factor_; }
  const SymbolicFactorization &UnionSymbolic() const { return symbolic_; }
  bool SharesSymbolic() const { return !b_symbolic_.has_value(); }
  Index SymbolicFactorizations() const { return SharesSymbolic() ? 1 : 2; }
  double SymbolicSeconds() const { return symbolic_seconds_; }
  double BFactorSeconds() const { return b_factor_seconds_; }

private:
  double symbolic_seconds_ = 0.0;
  double b_factor_seconds_ = 0.0;
  SymbolicFactorization symbolic_;
  std::optional<SymbolicFactorization> b_symbolic_;
  LdlFactorization b_factor_;
  ShiftedPencil pencil_;
};

enum class SolveStatus
{
  Converged,
  ClusterSuspected,
  Error
};

struct StageOneRecord
{
  bool completed = false;
  Index iterations = 0;
  Index restarts = 0;
  bool extended = false;
  BracketInterval interval;
  double length = 0.0;
  Index factorizations = 0;
  std::vector<IntervalSearchStep> trace;
  // (lambda_n - lambda_1) / length, with verification.
  std::optional<double> spectrum_ratio;

  bool operator==(const StageOneRecord &) const = default;
};

struct StageTwoRecord
{
  bool completed = false;
  Index iterations = 0;
  BracketInterval interval;
  double length = 0.0;
  Index count = 0;
  bool cluster_suspected = false;
  Index factorizations = 0;
  std::vector<BisectionStep> trace;

  bool operator==(const StageTwoRecord &) const = default;
};

struct StageThreeRecord
{
  bool completed = false;
  double sigma = 0.0;
  bool shift_perturbed = false;
  Index iterations = 0;
  Index restarts = 0;
  Index first_bound = 0;
  Index first_residual = 0;
  Index first_difference = 0;
  std::string outcome;  // converged, max_iterations or breakdown
  Index factorizations = 0;
  std::vector<SiIterationRecord> trace;

  bool operator==(const StageThreeRecord &) const = default;
};

struct SolveResult
{
  double lambda = 0.0;
  double rel_res_2norm = 0.0;
  double eta = 0.0;
  std::vector<double> eigenvector;  // B-normalized

  bool operator==(const SolveResult &) const = default;
};

// Wall-clock seconds per task: (I) symbolic analysis, (II) factorization of B, (III) stage-1
// Lanczos and Ritz values, (IV) stage-1 factorizations, (V) bisection, (VI) stage-3
// factorization, (VII) shift-invert iteration.
using TaskSeconds = std::array<double, 7>;

struct Resources
{
  Index symbolic_factorizations = 0;
  Index factorizations = 0;  // completed numeric factorizations, B included
  Index failed_factorizations = 0;
  std::size_t nzf_estimate = 0;  // symbolic prediction for the shifted pencil
  std::size_t nzf_b = 0;
  std::size_t nzf_shift = 0;  // stage-3 factorization
  std::size_t nzf_total = 0;  // summed over every completed factorization
  std::optional<TaskSeconds> task_seconds;

  bool operator==(const Resources &) const = default;
};

struct Verification
{
  double oracle_lambda = 0.0;
  double rel_error = 0.0;
  double angle = 0.0;  // radians between B-normalized, sign-aligned eigenvectors
  bool index_ok = false;
  bool interval_ok = false;  // stage-1 interval holds lambda_k by the oracle count

  bool operator==(const Verification &) const = default;
};

struct ErrorInfo
{
  std::string stage;
  std::string message;

  bool operator==(const ErrorInfo &) const = default;
};

struct SolveReport
{
  std::string schema;
  SolverConfig config;
  Index n = 0;
  Index nnz_a = 0;
  Index nnz_b = 0;
  bool shared_symbolic = false;
  std::string kernels;
  SolveStatus status = SolveStatus::Error;
  StageOneRecord stage1;
  StageTwoRecord stage2;
  StageThreeRecord stage3;
  std::optional<SolveResult> result;  // present iff status == Converged
  Resources resources;
  std::optional<Verification> verification;
  std::optional<ErrorInfo> error;

  bool operator==(const SolveReport &) const = default;
};

// Runs interval search, bisection and shift-invert Lanczos. Failures are returned as
// status Error with the failing stage; exceptions escape only for invalid configuration.
SolveReport SolveKth(const SparseSymmetric &A, const SparseSymmetric &B,
                     const SolverConfig &config);

// Exit status for command-line use: 0 converged, 2 cluster suspected, 1 error.
int ExitCode(SolveStatus status);

}  // namespace kep

#endif  // KEP_DRIVER_HPP
