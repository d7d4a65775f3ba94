// SPDX-License-Identifier: Apache-2.0

#include "kep/si_lanczos.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <string>
#include "kep/errors.hpp"
#include "kep/kernels.hpp"
#include "kep/random.hpp"

namespace kep
{

SiLanczosState StartSiLanczos(double sigma, std::vector<double> v1, const LdlFactorization &F_B)
{
  if (static_cast<Index>(v1.size()) != F_B.Size())
  {
    throw DimensionMismatch("start vector length does not match the pencil");
  }
  auto w = F_B.Solve(v1);
  const double norm = std::sqrt(std::max(0.0, kernels::Dot(v1, w)));
  if (!(norm > 0.0))
  {
    throw Error("shift-invert Lanczos start vector has zero B^{-1}-norm");
  }
  kernels::Scale(1.0 / norm, v1);
  kernels::Scale(1.0 / norm, w);
  SiLanczosState state;
  state.sigma = sigma;
  state.next = std::move(v1);
  state.next_companion = std::move(w);
  return state;
}

void SiLanczosStep(SiLanczosState &state, const SparseSymmetric &B,
                   const LdlFactorization &F_shift, const LdlFactorization &F_B)
{
  if (state.breakdown)
  {
    throw Error("shift-invert Lanczos step requested after breakdown");
  }
  const Index j = state.Steps();
  state.basis.push_back(std::move(state.next));
  state.companions.push_back(std::move(state.next_companion));
  const auto &v = state.basis.back();

  auto z = F_shift.Solve(v);
  const double alpha = kernels::Dot(v, z);
  // r = B (A - sigma B)^{-1} v, whose B^{-1}-norm is sqrt(z^T B z)
  std::vector<double> r = MatVec(B, z);
  const double scale = std::sqrt(std::max(0.0, kernels::Dot(z, r)));
  state.solves.push_back(std::move(z));

  kernels::Axpy(-alpha, v, r);
  if (j > 0)
  {
    kernels::Axpy(-state.betas.back(), state.basis[j - 1], r);
  }
  for (int pass = 0; pass < 2; pass++)
  {
    for (std::size_t i = 0; i < state.basis.size(); i++)
    {
      const double c = kernels::Dot(state.companions[i], r);
      kernels::Axpy(-c, state.basis[i], r);
    }
  }
  auto q = F_B.Solve(r);
  const double beta = std::sqrt(std::max(0.0, kernels::Dot(r, q)));

  state.alphas.push_back(alpha);
  state.betas.push_back(beta);
  if (!(beta > 1e-14 * scale))
  {
    state.breakdown = true;
    state.betas.back() = 0.0;
    state.next.assign(v.size(), 0.0);
    state.next_companion.assign(v.size(), 0.0);
    return;
  }
  kernels::Scale(1.0 / beta, r);
  kernels::Scale(1.0 / beta, q);
  state.next = std::move(r);
  state.next_companion = std::move(q);
}

namespace
{

// Columns(coefficients): sum_i y_i * columns[i]
std::vector<double> Combine(const std::vector<std::vector<double>> &columns,
                            std::span<const double> y)
{
  std::vector<double> out(columns.front().size(), 0.0);
  for (std::size_t i = 0; i < columns.size(); i++)
  {
    kernels::Axpy(y[i], columns[i], out);
  }
  return out;
}

double Eta(double theta_tilde, double s)
{
  return std::abs(s) / std::sqrt(1.0 + s * s) / std::abs(theta_tilde);
}

double BNorm(const SparseSymmetric &B, std::span<const double> x)
{
  return std::sqrt(std::max(0.0, kernels::Dot(x, MatVec(B, x))));
}

}  // namespace

std::vector<ApproxEigenpair> ExtractEigenpairs(const SiLanczosState &state,
                                               const SparseSymmetric &A,
                                               const SparseSymmetric &B, Index count)
{
  const Index j = state.Steps();
  if (j < 1)
  {
    throw Error("eigenpair extraction needs at least one Lanczos step");
  }
  const RitzSpectrum ritz = TridiagEigen(state.alphas, state.betas);
  std::vector<Index> order(static_cast<std::size_t>(j));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b)
                   { return std::abs(ritz.theta[a]) > std::abs(ritz.theta[b]); });

  const double beta = state.LastBeta();
  std::vector<ApproxEigenpair> pairs;
  pairs.reserve(order.size());
  for (std::size_t p = 0; p < order.size(); p++)
  {
    const Index i = order[p];
    ApproxEigenpair pair;
    pair.ritz_index = i;
    pair.theta_tilde = ritz.theta[i];
    assert(pair.theta_tilde != 0.0);
    pair.lambda = state.sigma + 1.0 / pair.theta_tilde;
    pair.last_component = ritz.LastComponent(i);
    pair.s = beta * pair.last_component / pair.theta_tilde;
    pair.eta = Eta(pair.theta_tilde, pair.s);
    pair.bound_lower = pair.lambda - pair.eta;
    pair.bound_upper = pair.lambda + pair.eta;
    const auto y = ritz.Vector(i);
    pair.y.assign(y.begin(), y.end());
    if (static_cast<Index>(p) < count)
    {
      pair.x2 = Combine(state.solves, pair.y);
      auto residual = MatVec(A, pair.x2);
      kernels::Axpy(-pair.lambda, MatVec(B, pair.x2), residual);
      pair.rel_res_2norm = kernels::Norm2(residual) / kernels::Norm2(pair.x2);
    }
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

std::vector<double> ComputeX1(const SiLanczosState &state, const ApproxEigenpair &pair)
{
  if (static_cast<Index>(pair.y.size()) != state.Steps())
  {
    throw DimensionMismatch("Ritz vector does not belong to this Lanczos state");
  }
  return Combine(state.companions, pair.y);
}

PairOrthogonality PairwiseBOrthogonality(const ApproxEigenpair &l, const ApproxEigenpair &m,
                                         const SparseSymmetric &B)
{
  if (l.x2.empty() || m.x2.empty())
  {
    throw Error("orthogonality needs extracted eigenvectors");
  }
  const double nl = BNorm(B, l.x2);
  const double nm = BNorm(B, m.x2);
  assert(nl > 0.0 && nm > 0.0);
  PairOrthogonality out;
  out.direct = std::abs(kernels::Dot(l.x2, MatVec(B, m.x2))) / (nl * nm);
  out.closed_form = std::abs(l.s) / std::sqrt(1.0 + l.s * l.s) * std::abs(m.s) /
                    std::sqrt(1.0 + m.s * m.s);
  return out;
}

ConvergenceReport ValidateAndTest(std::vector<ApproxEigenpair> &pairs,
                                  const BracketInterval &interval, Index m, double tau_res,
                                  double tau_diff,
                                  const std::vector<std::vector<double>> &previous)
{
  if (m < 1 || static_cast<Index>(pairs.size()) < m)
  {
    throw Error("validation needs m >= 1 extracted pairs, got m = " + std::to_string(m) +
                " with " + std::to_string(pairs.size()) + " pairs");
  }
  ConvergenceReport report;
  const auto first = pairs.begin();
  const auto last = pairs.begin() + m;
  std::stable_sort(first, last, [](const ApproxEigenpair &a, const ApproxEigenpair &b)
                   { return a.lambda < b.lambda; });

  report.inclusion = std::all_of(first, last, [&](const ApproxEigenpair &p)
                                 { return interval.lower <= p.bound_lower &&
                                          p.bound_upper < interval.upper; });
  report.disjointness = true;
  for (auto it = first; it + 1 < last; ++it)
  {
    if (!(it->bound_upper < (it + 1)->bound_lower))
    {
      report.disjointness = false;
    }
  }
  for (auto it = first; it != last; ++it)
  {
    report.max_rel_res = std::max(report.max_rel_res, it->rel_res_2norm);
  }
  report.residual = report.max_rel_res < tau_res;

  report.difference = false;
  if (static_cast<Index>(previous.size()) == m)
  {
    double worst = 0.0;
    for (Index i = 0; i < m; i++)
    {
      ApproxEigenpair &p = pairs[i];
      const auto &prev = previous[i];
      const double norm = kernels::Norm2(p.x2);
      const double prev_norm = kernels::Norm2(prev);
      // Rescale the previous vector to the current norm and align its sign.
      const double sign = kernels::Dot(p.x2, prev) < 0.0 ? -1.0 : 1.0;
      std::vector<double> diff = p.x2;
      kernels::Axpy(-sign * norm / prev_norm, prev, diff);
      p.rel_diff_2norm = kernels::Norm2(diff) / norm;
      worst = std::max(worst, *p.rel_diff_2norm);
    }
    report.max_rel_diff = worst;
    report.difference = worst < tau_diff;
  }
  return report;
}

namespace
{

// Factorizes at the interval midpoint, moving by +d, -d, +2d, -2d, ... (d = length * 1e-6,
// up to a quarter of the length) when the midpoint is numerically an eigenvalue.
std::pair<double, LdlFactorization> MidpointFactorization(ShiftedPencil &pencil,
                                                          const BracketInterval &b,
                                                          bool &perturbed)
{
  const double length = b.upper - b.lower;
  const double mid = b.lower + length / 2.0;
  double step = length * 1e-6;
  double sigma = mid;
  for (int attempt = 0;; attempt++)
  {
    if (sigma > b.lower && sigma < b.upper)
    {
      try
      {
        perturbed = attempt > 0;
        return {sigma, pencil.Factorize(sigma)};
      }
      catch (const ExactSingularity &)
      {
      }
    }
    if (attempt > 0 && attempt % 2 == 0)
    {
      step *= 2.0;
    }
    if (step > length / 4.0)
    {
      throw Error("no nonsingular shift found near midpoint " + std::to_string(mid));
    }
    sigma = mid + ((attempt % 2 == 0) ? step : -step);
  }
}

SiPairRecord Record(const ApproxEigenpair &p)
{
  SiPairRecord r;
  r.lambda = p.lambda;
  r.eta = p.eta;
  r.bound_lower = p.bound_lower;
  r.bound_upper = p.bound_upper;
  r.s = p.s;
  r.rel_res_2norm = p.rel_res_2norm;
  r.rel_diff_2norm = p.rel_diff_2norm;
  return r;
}

double ResidualIdentityError(const ApproxEigenpair &p, const SiLanczosState &state,
                             const SparseSymmetric &A, const SparseSymmetric &B)
{
  const auto ax = MatVec(A, p.x2);
  const auto bx = MatVec(B, p.x2);
  std::vector<double> r = ax;
  kernels::Axpy(-p.lambda, bx, r);
  kernels::Axpy(p.s, state.next, r);
  return kernels::Norm2(r) / (kernels::Norm2(ax) + std::abs(p.lambda) * kernels::Norm2(bx));
}

}  // namespace

KthEigenpairResult ComputeKthEigenpair(ShiftedPencil &pencil, const LdlFactorization &F_B,
                                       Index k, const BracketInterval &interval,
                                       const SiLanczosOptions &options)
{
  const SparseSymmetric &A = pencil.MatrixA();
  const SparseSymmetric &B = pencil.MatrixB();
  const Index n = A.Size();
  const Index m = interval.Count();
  if (!(interval.lower < interval.upper) || !interval.Contains(k) || m < 1)
  {
    throw Error("shift-invert stage needs a validated interval containing index " +
                std::to_string(k));
  }
  const Index target = k - interval.nu_lower - 1;  // position among the m pairs

  KthEigenpairResult result;
  auto [sigma, F_shift] = MidpointFactorization(pencil, interval, result.shift_perturbed);
  result.sigma = sigma;
  result.factor_nonzeros = F_shift.NumFactorNonzeros();

  for (Index restart = 0; restart <= options.max_restarts; restart++)
  {
    result.restarts = restart;
    result.trace.clear();
    result.first_bound = result.first_residual = result.first_difference = 0;
    UniformSource rng(StreamSeed(options.seed, 200 + static_cast<std::uint64_t>(restart)));
    SiLanczosState state = StartSiLanczos(sigma, rng.Vector(n), F_B);
    std::vector<std::vector<double>> previous;

    for (Index j = 1; j <= options.max_iterations; j++)
    {
      SiLanczosStep(state, B, F_shift, F_B);
      result.iterations = j;
      if (j < m && !options.record_diagnostics)
      {
        if (state.breakdown)
        {
          break;
        }
        continue;
      }

      SiIterationRecord record;
      record.j = j;
      const Index count = std::min(m, j);
      auto pairs = ExtractEigenpairs(state, A, B, count);
      if (options.record_diagnostics)
      {
        for (const auto &p : pairs)
        {
          record.all_bounds.emplace_back(p.bound_lower, p.bound_upper);
        }
      }
      if (j < m)
      {
        result.trace.push_back(std::move(record));
        if (state.breakdown)
        {
          break;
        }
        continue;
      }

      const ConvergenceReport report =
          ValidateAndTest(pairs, interval, m, options.tau_res, options.tau_diff, previous);
      record.inclusion = report.inclusion;
      record.disjointness = report.disjointness;
      record.residual = report.residual;
      record.difference = report.difference;
      for (Index i = 0; i < m; i++)
      {
        SiPairRecord r = Record(pairs[i]);
        if (options.record_diagnostics)
        {
          r.residual_identity_error = ResidualIdentityError(pairs[i], state, A, B);
        }
        record.pairs.push_back(r);
      }
      for (Index a = 0; a < m; a++)
      {
        for (Index b = a + 1; b < m; b++)
        {
          if (!options.record_diagnostics && a != target && b != target)
          {
            continue;
          }
          const PairOrthogonality o = PairwiseBOrthogonality(pairs[a], pairs[b], B);
          record.orthogonality.push_back({a, b, o.direct, o.closed_form});
        }
      }
      result.trace.push_back(std::move(record));

      const bool bound = report.inclusion && report.disjointness;
      if (bound && result.first_bound == 0)
      {
        result.first_bound = j;
      }
      if (report.residual && result.first_residual == 0)
      {
        result.first_residual = j;
      }
      if (report.difference && result.first_difference == 0)
      {
        result.first_difference = j;
      }

      // An invariant subspace makes the difference test vacuous: the Ritz vectors are exact.
      const bool accepted = report.Converged() || (state.breakdown && bound && report.residual);
      if (accepted)
      {
        const ApproxEigenpair &p = pairs[target];
        result.status = SiStatus::Converged;
        result.lambda = p.lambda;
        result.x = p.x2;
        kernels::Scale(1.0 / BNorm(B, result.x), result.x);
        result.rel_res_2norm = p.rel_res_2norm;
        result.eta = p.eta;
        return result;
      }
      if (state.breakdown)
      {
        break;
      }
      previous.clear();
      for (Index i = 0; i < m; i++)
      {
        previous.push_back(std::move(pairs[i].x2));
      }
    }
    if (!state.breakdown)
    {
      result.status = SiStatus::MaxIterations;
      return result;
    }
  }
  result.status = SiStatus::Breakdown;
  return result;
}

}  // namespace kep
