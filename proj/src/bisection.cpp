// SPDX-License-Identifier: Apache-2.0

#include "kep/bisection.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include "kep/errors.hpp"

namespace kep
{

namespace
{

void RequireValidated(const BracketInterval &interval, Index k)
{
  if (!(interval.lower < interval.upper) || !interval.Contains(k))
  {
    throw Error("interval [" + std::to_string(interval.lower) + ", " +
                std::to_string(interval.upper) + ") with counts (" +
                std::to_string(interval.nu_lower) + ", " + std::to_string(interval.nu_upper) +
                ") does not contain index " + std::to_string(k));
  }
}

// Inertia at the midpoint; a singular midpoint moves by +d, -d, +2d, -2d, ... with
// d = length * 1e-6 until the offset reaches a quarter of the length. Empty when every
// candidate is singular: the interval then lies inside the breakdown band of an eigenvalue.
std::optional<std::pair<double, Index>> MidpointCount(ShiftedPencil &pencil,
                                                      const BracketInterval &b, bool &perturbed)
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
        return std::pair{sigma, pencil.CountBelow(sigma)};
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
      return std::nullopt;
    }
    sigma = mid + ((attempt % 2 == 0) ? step : -step);
  }
}

BisectionResult Bisect(const BracketInterval &interval, ShiftedPencil &pencil, Index k,
                       Index max_iterations, const std::function<bool(const BracketInterval &)> &done)
{
  RequireValidated(interval, k);
  BisectionResult result;
  result.interval = interval;
  BracketInterval &b = result.interval;
  while (!done(b))
  {
    if (result.iterations >= max_iterations)
    {
      result.cluster_suspected = true;
      break;
    }
    BisectionStep step;
    const auto count = MidpointCount(pencil, b, step.perturbed);
    if (!count)
    {
      result.resolution_limited = true;
      break;
    }
    std::tie(step.sigma, step.nu) = *count;
    if (step.nu < b.nu_lower || step.nu > b.nu_upper)
    {
      throw Error("inconsistent inertia: count " + std::to_string(step.nu) + " at " +
                  std::to_string(step.sigma) + " outside [" + std::to_string(b.nu_lower) +
                  ", " + std::to_string(b.nu_upper) + "]");
    }
    if (k <= step.nu)
    {
      b.upper = step.sigma;
      b.nu_upper = step.nu;
    }
    else
    {
      b.lower = step.sigma;
      b.nu_lower = step.nu;
    }
    step.length = b.Length();
    step.count = b.Count();
    result.trace.push_back(step);
    result.iterations++;
  }
  return result;
}

}  // namespace

BisectionResult NarrowInterval(const BracketInterval &interval, ShiftedPencil &pencil, Index k,
                               Index m_max, Index max_iterations)
{
  if (m_max < 1)
  {
    throw Error("m_max must be at least 1");
  }
  auto result = Bisect(interval, pencil, k, max_iterations,
                       [m_max](const BracketInterval &b) { return b.Count() <= m_max; });
  // More than m_max eigenvalues closer together than inertia can resolve.
  if (result.resolution_limited && result.interval.Count() > m_max)
  {
    result.cluster_suspected = true;
  }
  return result;
}

EigenvalueBisectionResult BisectToEigenvalue(const BracketInterval &interval,
                                             ShiftedPencil &pencil, Index k,
                                             const BisectionTolerance &tolerance,
                                             Index max_iterations)
{
  if (!(tolerance.tau > 0.0))
  {
    throw Error("bisection tolerance must be positive");
  }
  const double tau = tolerance.tau;
  std::function<bool(const BracketInterval &)> done;
  if (tolerance.mode == BisectionTolerance::Mode::Absolute)
  {
    done = [tau](const BracketInterval &b) { return b.upper - b.lower < tau; };
  }
  else
  {
    done = [tau](const BracketInterval &b)
    {
      const double mag = std::max(std::abs(b.lower), std::abs(b.upper));
      return mag > 0.0 && (b.upper - b.lower) / mag < tau;
    };
  }
  EigenvalueBisectionResult out;
  out.bisection = Bisect(interval, pencil, k, max_iterations, done);
  const auto &b = out.bisection.interval;
  out.eigenvalue = b.lower + (b.upper - b.lower) / 2.0;
  return out;
}

}  // namespace kep
