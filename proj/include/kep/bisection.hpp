// SPDX-License-Identifier: Apache-2.0

#ifndef KEP_BISECTION_HPP
#define KEP_BISECTION_HPP

#include <vector>
#include "kep/lanczos.hpp"
#include "kep/ldl.hpp"

namespace kep
{

struct BisectionStep
{
  double sigma = 0.0;
  Index nu = 0;
  double length = 0.0;  // after the step
  Index count = 0;      // eigenvalues left in the interval after the step
  bool perturbed = false;

  bool operator==(const BisectionStep &) const = default;
};

struct BisectionResult
{
  BracketInterval interval;
  Index iterations = 0;
  std::vector<BisectionStep> trace;
  // Iteration cap reached, or the interval became too narrow to resolve, before the
  // stopping rule held.
  bool cluster_suspected = false;
  // Stopped because no nonsingular shift exists inside the interval: it lies within the
  // pivot breakdown band of an eigenvalue, so the end points are as tight as inertia allows.
  bool resolution_limited = false;
};

// Halves a validated interval, keeping the half that contains lambda_k, until it holds at
// most m_max eigenvalues. Every inertia count reuses the pencil's symbolic factorization.
BisectionResult NarrowInterval(const BracketInterval &interval, ShiftedPencil &pencil, Index k,
                               Index m_max, Index max_iterations = 128);

struct BisectionTolerance
{
  enum class Mode
  {
    Absolute,  // stop when upper - lower < tau
    Relative   // stop when (upper - lower) / max(|lower|, |upper|) < tau
  };
  Mode mode = Mode::Absolute;
  double tau = 1e-6;
};

struct EigenvalueBisectionResult
{
  double eigenvalue = 0.0;  // midpoint of the final interval
  BisectionResult bisection;
};

// Plain bisection to an eigenvalue estimate with |estimate - lambda_k| < tau / 2 in the
// absolute mode.
EigenvalueBisectionResult BisectToEigenvalue(const BracketInterval &interval,
                                             ShiftedPencil &pencil, Index k,
                                             const BisectionTolerance &tolerance,
                                             Index max_iterations = 128);

}  // namespace kep

#endif  // KEP_BISECTION_HPP
