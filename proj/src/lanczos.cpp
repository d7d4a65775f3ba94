// SPDX-License-Identifier: Apache-2.0

#include "kep/lanczos.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include "kep/errors.hpp"
#include "kep/kernels.hpp"
#include "kep/random.hpp"

namespace kep
{

LanczosState StartLanczos(const SparseSymmetric &B, std::vector<double> v1)
{
  if (static_cast<Index>(v1.size()) != B.Size())
  {
    throw DimensionMismatch("start vector length does not match the pencil");
  }
  auto bv = MatVec(B, v1);
  const double norm = std::sqrt(kernels::Dot(v1, bv));
  if (!(norm > 0.0))
  {
    throw Error("Lanczos start vector has zero B-norm");
  }
  kernels::Scale(1.0 / norm, v1);
  kernels::Scale(1.0 / norm, bv);
  LanczosState state;
  state.next = std::move(v1);
  state.b_next = std::move(bv);
  return state;
}

void LanczosStep(LanczosState &state, const SparseSymmetric &A, const LdlFactorization &B_factor,
                 const SparseSymmetric &B)
{
  if (state.breakdown)
  {
    throw Error("Lanczos step requested after breakdown");
  }
  const Index j = state.Steps();
  state.basis.push_back(std::move(state.next));
  state.b_basis.push_back(std::move(state.b_next));
  const auto &v = state.basis.back();

  const auto av = MatVec(A, v);
  const double alpha = kernels::Dot(v, av);
  std::vector<double> w = B_factor.Solve(av);
  const double scale = std::sqrt(std::max(0.0, kernels::Dot(av, w)));

  kernels::Axpy(-alpha, v, w);
  if (j > 0)
  {
    kernels::Axpy(-state.betas.back(), state.basis[j - 1], w);
  }
  for (int pass = 0; pass < 2; pass++)
  {
    for (std::size_t i = 0; i < state.basis.size(); i++)
    {
      const double c = kernels::Dot(state.b_basis[i], w);
      kernels::Axpy(-c, state.basis[i], w);
    }
  }
  auto bw = MatVec(B, w);
  const double beta = std::sqrt(std::max(0.0, kernels::Dot(w, bw)));

  state.alphas.push_back(alpha);
  state.betas.push_back(beta);
  if (!(beta > 1e-14 * scale))
  {
    state.breakdown = true;
    state.next.assign(v.size(), 0.0);
    state.b_next.assign(v.size(), 0.0);
    return;
  }
  kernels::Scale(1.0 / beta, w);
  kernels::Scale(1.0 / beta, bw);
  state.next = std::move(w);
  state.b_next = std::move(bw);
}

RitzSpectrum RitzValues(const LanczosState &state, bool want_vectors)
{
  return TridiagEigen(state.alphas, state.betas, want_vectors);
}

std::pair<double, Index> CountBelowPerturbed(ShiftedPencil &pencil, double sigma, double scale,
                                             bool *perturbed)
{
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double unit = eps * std::max({std::abs(sigma), scale, std::numeric_limits<double>::min()});
  double shift = sigma;
  for (int attempt = 0; attempt < 24; attempt++)
  {
    try
    {
      const Index nu = pencil.CountBelow(shift);
      if (perturbed)
      {
        *perturbed = attempt > 0;
      }
      return {shift, nu};
    }
    catch (const ExactSingularity &)
    {
      // +1, -2, +4, -8, ... units around the requested shift
      const double step = std::ldexp(unit, attempt);
      shift = sigma + ((attempt % 2 == 0) ? step : -step);
    }
  }
  throw Error("shift " + std::to_string(sigma) +
              " stays numerically singular under perturbation");
}

namespace
{

bool Straddles(Index nu_prev, Index nu, Index k)
{
  return (nu < k && k <= nu_prev) || (nu_prev < k && k <= nu);
}

BracketInterval Ordered(double s1, Index n1, double s2, Index n2)
{
  BracketInterval b;
  b.lower = std::min(s1, s2);
  b.upper = std::max(s1, s2);
  b.nu_lower = std::min(n1, n2);
  b.nu_upper = std::max(n1, n2);
  return b;
}

}  // namespace

IntervalSearchResult FindInitialInterval(ShiftedPencil &pencil, const LdlFactorization &B_factor,
                                         Index k, const IntervalSearchOptions &options)
{
  const SparseSymmetric &A = pencil.MatrixA();
  const SparseSymmetric &B = pencil.MatrixB();
  const Index n = A.Size();
  if (k < 1 || k > n)
  {
    throw Error("target index " + std::to_string(k) + " outside 1.." + std::to_string(n));
  }

  IntervalSearchResult result;
  for (Index restart = 0; restart <= options.max_restarts; restart++)
  {
    result.restarts = restart;
    result.trace.clear();
    result.ritz_history.clear();
    UniformSource rng(StreamSeed(options.seed, 100 + static_cast<std::uint64_t>(restart)));
    LanczosState state = StartLanczos(B, rng.Vector(n));

    double sigma_prev = 0.0;
    Index nu_prev = 0;
    for (Index j = 1; j <= options.max_iterations; j++)
    {
      LanczosStep(state, A, B_factor, B);
      const RitzSpectrum ritz = RitzValues(state);
      if (options.record_ritz)
      {
        result.ritz_history.push_back(ritz.theta);
      }
      const double theta_first = ritz.theta.front();
      const double theta_last = ritz.theta.back();
      const double scale = std::max({std::abs(theta_first), std::abs(theta_last),
                                     theta_last - theta_first});

      IntervalSearchStep step;
      step.j = j;
      step.theta_first = theta_first;
      step.theta_last = theta_last;
      const double target = (k <= nu_prev) ? theta_first : theta_last;
      std::tie(step.sigma, step.nu) = CountBelowPerturbed(pencil, target, scale, &step.perturbed);
      result.trace.push_back(step);

      if (j != 1 && Straddles(nu_prev, step.nu, k))
      {
        result.interval = Ordered(sigma_prev, nu_prev, step.sigma, step.nu);
        result.iterations = j;
        return result;
      }
      sigma_prev = step.sigma;
      nu_prev = step.nu;

      // The next Ritz point moves toward lambda_k only while the relevant extreme Ritz value
      // is still converging. Once it has converged (or the Krylov space is invariant), place
      // one point half a Ritz gap inward, which keeps its count on the same side of k, and
      // step outward by doubling offsets until the count brackets k.
      const bool downward = k <= step.nu;
      const Index extreme = downward ? 0 : ritz.j - 1;
      const double residual = state.betas.back() * std::abs(ritz.LastComponent(extreme));
      const double gap = ritz.j < 2 ? 0.0
                         : downward ? ritz.theta[1] - theta_first
                                    : theta_last - ritz.theta[ritz.j - 2];
      // Ritz value error is bounded by the residual and, with a gap, by residual^2 / gap.
      const double error = gap > 0.0 ? std::min(residual, residual * residual / gap) : residual;
      const bool converged = error <= options.extreme_convergence * scale;
      if (j >= 2 && (converged || state.breakdown))
      {
        const double offset = std::max({0.5 * gap, 2.0 * residual,
                                         options.extreme_convergence * scale});
        const double direction = downward ? -1.0 : 1.0;
        const auto extend = [&](double candidate)
        {
          IntervalSearchStep ext;
          ext.j = j;
          ext.theta_first = theta_first;
          ext.theta_last = theta_last;
          ext.extension = true;
          std::tie(ext.sigma, ext.nu) = CountBelowPerturbed(pencil, candidate, scale, &ext.perturbed);
          result.trace.push_back(ext);
          return ext;
        };
        const IntervalSearchStep inner = extend(step.sigma - direction * offset);
        double anchor_sigma = inner.sigma;
        Index anchor_nu = inner.nu;
        double reach = offset;
        for (int t = 0; t < 200; t++, reach *= 2.0)
        {
          const IntervalSearchStep outer = extend(step.sigma + direction * reach);
          if (Straddles(anchor_nu, outer.nu, k))
          {
            result.interval = Ordered(anchor_sigma, anchor_nu, outer.sigma, outer.nu);
            result.iterations = j;
            result.extended = true;
            return result;
          }
          anchor_sigma = outer.sigma;
          anchor_nu = outer.nu;
        }
        throw Error("interval search could not move past the converged extreme Ritz value");
      }
      if (state.breakdown)
      {
        break;
      }
    }
    if (!state.breakdown)
    {
      throw Error("interval search did not bracket index " + std::to_string(k) + " within " +
                  std::to_string(options.max_iterations) + " Lanczos steps");
    }
  }
  throw Error("interval search broke down after " + std::to_string(options.max_restarts) +
              " restarts");
}

}  // namespace kep
