// SPDX-License-Identifier: Apache-2.0

#include "kep/driver.hpp"

#include <chrono>
#include <cmath>
#include <string>
#include "kep/errors.hpp"
#include "kep/kernels.hpp"
#include "kep/oracle.hpp"
#include "kep/report.hpp"

namespace kep
{

namespace
{

class Stopwatch
{
public:
  double Seconds() const
  {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

SymbolicFactorization Analyze(const SparseSymmetric &pattern, double &seconds)
{
  Stopwatch watch;
  auto symbolic = SymbolicFactorize(pattern, ComputeOrdering(pattern));
  seconds += watch.Seconds();
  return symbolic;
}

SymbolicFactorization AnalyzeUnion(const SparseSymmetric &A, const SparseSymmetric &B,
                                   double &seconds)
{
  if (A.Size() != B.Size())
  {
    throw DimensionMismatch("A is " + std::to_string(A.Size()) + " x " +
                            std::to_string(A.Size()) + " but B is " + std::to_string(B.Size()) +
                            " x " + std::to_string(B.Size()));
  }
  return Analyze(ShiftedCombine(A, B, 0.0), seconds);
}

std::optional<SymbolicFactorization> AnalyzeB(const SparseSymmetric &B,
                                              const SymbolicFactorization &shared,
                                              double &seconds)
{
  if (B.PatternId() == shared.pattern_id)
  {
    return std::nullopt;
  }
  return Analyze(B, seconds);
}

LdlFactorization FactorB(const SparseSymmetric &B, const SymbolicFactorization &symbolic,
                         double &seconds)
{
  Stopwatch watch;
  LdlOptions options;
  options.pivoting = false;
  LdlFactorization F;
  try
  {
    F = NumericFactorize(B, symbolic, options);
  }
  catch (const ExactSingularity &e)
  {
    throw NotPositiveDefinite(std::string("B is not positive definite: ") + e.what());
  }
  if (F.GetInertia().positive != B.Size())
  {
    throw NotPositiveDefinite("B is not positive definite: " +
                              std::to_string(F.GetInertia().negative) + " negative pivots");
  }
  seconds += watch.Seconds();
  return F;
}

const char *Outcome(SiStatus status)
{
  switch (status)
  {
    case SiStatus::Converged:
      return "converged";
    case SiStatus::MaxIterations:
      return "max_iterations";
    case SiStatus::Breakdown:
      return "breakdown";
  }
  return "unknown";
}

// 2 asin(||x - y||_B / 2) for B-unit x and y with the sign of y aligned to x.
double BAngle(const SparseSymmetric &B, std::vector<double> x, std::vector<double> y)
{
  const auto unit = [&B](std::vector<double> &v)
  { kernels::Scale(1.0 / std::sqrt(kernels::Dot(v, MatVec(B, v))), v); };
  unit(x);
  unit(y);
  if (kernels::Dot(x, MatVec(B, y)) < 0.0)
  {
    kernels::Scale(-1.0, y);
  }
  kernels::Axpy(-1.0, x, y);
  const double chord = std::sqrt(std::max(0.0, kernels::Dot(y, MatVec(B, y))));
  return 2.0 * std::asin(std::min(1.0, chord / 2.0));
}

}  // namespace

void ValidateConfig(const SolverConfig &config, Index n)
{
  if (config.k < 1 || config.k > n)
  {
    throw Error("k = " + std::to_string(config.k) + " is outside 1.." + std::to_string(n));
  }
  if (config.m_max < 1)
  {
    throw Error("m_max must be at least 1");
  }
  if (!(config.tau_res > 0.0) || !(config.tau_diff > 0.0) || !(config.tau_abs > 0.0))
  {
    throw Error("tolerances must be positive");
  }
  if (config.max_lanczos < 1 || config.max_bisect < 0 || config.max_si < 1)
  {
    throw Error("iteration caps must be positive");
  }
}

PreparedPencil::PreparedPencil(const SparseSymmetric &A, const SparseSymmetric &B)
  : symbolic_(AnalyzeUnion(A, B, symbolic_seconds_)),
    b_symbolic_(AnalyzeB(B, symbolic_, symbolic_seconds_)),
    b_factor_(FactorB(B, b_symbolic_ ? *b_symbolic_ : symbolic_, b_factor_seconds_)),
    pencil_(A, B, symbolic_)
{
}

int ExitCode(SolveStatus status)
{
  switch (status)
  {
    case SolveStatus::Converged:
      return 0;
    case SolveStatus::ClusterSuspected:
      return 2;
    case SolveStatus::Error:
      return 1;
  }
  return 1;
}

SolveReport SolveKth(const SparseSymmetric &A, const SparseSymmetric &B,
                     const SolverConfig &config)
{
  ValidateConfig(config, A.Size());
  SolveReport report;
  report.schema = std::string(kReportSchema);
  report.config = config;
  report.n = A.Size();
  report.nnz_a = A.NumNonzeros();
  report.nnz_b = B.NumNonzeros();
  report.kernels = std::string(kernels::BackendName(kernels::ActiveBackend()));
  report.status = SolveStatus::Error;
  TaskSeconds seconds{};

  std::string stage = "setup";
  try
  {
    PreparedPencil prepared(A, B);
    ShiftedPencil &pencil = prepared.Pencil();
    report.shared_symbolic = prepared.SharesSymbolic();
    report.resources.symbolic_factorizations = prepared.SymbolicFactorizations();
    report.resources.nzf_estimate = prepared.UnionSymbolic().nzf_estimate;
    report.resources.nzf_b = prepared.BFactor().NumFactorNonzeros();
    seconds[0] = prepared.SymbolicSeconds();
    seconds[1] = prepared.BFactorSeconds();

    const auto finish_resources = [&]
    {
      report.resources.factorizations = static_cast<Index>(pencil.Factorizations()) + 1;
      report.resources.failed_factorizations = static_cast<Index>(pencil.FailedFactorizations());
      report.resources.nzf_total = pencil.TotalFactorNonzeros() + report.resources.nzf_b;
    };

    stage = "interval";
    {
      Stopwatch watch;
      const std::size_t before = pencil.Factorizations();
      const double factor_before = pencil.FactorizationSeconds();
      IntervalSearchOptions options;
      options.seed = config.seed;
      options.max_iterations = config.max_lanczos;
      const auto found = FindInitialInterval(pencil, prepared.BFactor(), config.k, options);
      auto &rec = report.stage1;
      rec.completed = true;
      rec.iterations = found.iterations;
      rec.restarts = found.restarts;
      rec.extended = found.extended;
      rec.interval = found.interval;
      rec.length = found.interval.Length();
      rec.factorizations = static_cast<Index>(pencil.Factorizations() - before);
      rec.trace = found.trace;
      seconds[3] = pencil.FactorizationSeconds() - factor_before;
      seconds[2] = watch.Seconds() - seconds[3];
    }

    stage = "bisection";
    {
      Stopwatch watch;
      const std::size_t before = pencil.Factorizations();
      const auto narrowed = NarrowInterval(report.stage1.interval, pencil, config.k,
                                           config.m_max, config.max_bisect);
      auto &rec = report.stage2;
      rec.completed = true;
      rec.iterations = narrowed.iterations;
      rec.interval = narrowed.interval;
      rec.length = narrowed.interval.Length();
      rec.count = narrowed.interval.Count();
      rec.cluster_suspected = narrowed.cluster_suspected;
      rec.factorizations = static_cast<Index>(pencil.Factorizations() - before);
      rec.trace = narrowed.trace;
      seconds[4] = watch.Seconds();
    }

    if (report.stage2.cluster_suspected)
    {
      report.status = SolveStatus::ClusterSuspected;
      finish_resources();
    }
    else
    {
      stage = "shift_invert";
      Stopwatch watch;
      const std::size_t before = pencil.Factorizations();
      const double factor_before = pencil.FactorizationSeconds();
      SiLanczosOptions options;
      options.tau_res = config.tau_res;
      options.tau_diff = config.tau_diff;
      options.max_iterations = config.max_si;
      options.seed = config.seed;
      options.record_diagnostics = config.record_diagnostics;
      auto kth = ComputeKthEigenpair(pencil, prepared.BFactor(), config.k,
                                     report.stage2.interval, options);
      auto &rec = report.stage3;
      rec.completed = true;
      rec.sigma = kth.sigma;
      rec.shift_perturbed = kth.shift_perturbed;
      rec.iterations = kth.iterations;
      rec.restarts = kth.restarts;
      rec.first_bound = kth.first_bound;
      rec.first_residual = kth.first_residual;
      rec.first_difference = kth.first_difference;
      rec.outcome = Outcome(kth.status);
      rec.factorizations = static_cast<Index>(pencil.Factorizations() - before);
      rec.trace = std::move(kth.trace);
      report.resources.nzf_shift = kth.factor_nonzeros;
      seconds[5] = pencil.FactorizationSeconds() - factor_before;
      seconds[6] = watch.Seconds() - seconds[5];
      finish_resources();

      switch (kth.status)
      {
        case SiStatus::Converged:
          report.status = SolveStatus::Converged;
          report.result = SolveResult{kth.lambda, kth.rel_res_2norm, kth.eta, std::move(kth.x)};
          break;
        case SiStatus::MaxIterations:
          report.status = SolveStatus::ClusterSuspected;
          break;
        case SiStatus::Breakdown:
          report.status = SolveStatus::Error;
          report.error = ErrorInfo{stage, "shift-invert Lanczos broke down on every restart"};
          break;
      }
    }

    if (config.verify && A.Size() <= kDenseOracleCap)
    {
      stage = "verify";
      const DenseSpectrum oracle = DenseGeneralizedEigen(A, B);
      const double exact = oracle.eigenvalues[static_cast<std::size_t>(config.k - 1)];
      const auto &iv = report.stage1.interval;
      report.stage1.spectrum_ratio =
          (oracle.eigenvalues.back() - oracle.eigenvalues.front()) / iv.Length();
      Verification v;
      v.oracle_lambda = exact;
      v.interval_ok = CountBelow(oracle, iv.lower) == iv.nu_lower &&
                      CountBelow(oracle, iv.upper) == iv.nu_upper && iv.Contains(config.k);
      if (report.result)
      {
        const double lambda = report.result->lambda;
        v.rel_error = std::abs(lambda - exact) / std::max(std::abs(exact), 1e-300);
        v.angle = BAngle(B, report.result->eigenvector,
                         std::vector<double>(oracle.Vector(config.k - 1).begin(),
                                             oracle.Vector(config.k - 1).end()));
        // The nearest oracle eigenvalue must be the k-th one (up to ties).
        Index nearest = 0;
        for (Index i = 1; i < oracle.n; i++)
        {
          if (std::abs(oracle.eigenvalues[i] - lambda) <
              std::abs(oracle.eigenvalues[nearest] - lambda))
          {
            nearest = i;
          }
        }
        v.index_ok = std::abs(oracle.eigenvalues[nearest] - exact) <=
                     1e-12 * std::max(1.0, std::abs(exact));
      }
      report.verification = v;
    }
  }
  catch (const std::exception &e)
  {
    report.status = SolveStatus::Error;
    report.result.reset();
    report.error = ErrorInfo{stage, e.what()};
  }
  if (config.timings)
  {
    report.resources.task_seconds = seconds;
  }
  return report;
}

}  // namespace kep
