// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <vector>
#include "doctest.h"
#include "kep/bisection.hpp"
#include "kep/oracle.hpp"
#include "support/pencils.hpp"

using namespace kep;

namespace
{

struct Setup
{
  testing::TestPencil p;
  SparseSymmetric pattern = ShiftedCombine(p.A, p.B, 0.0);
  SymbolicFactorization symbolic = SymbolicFactorize(pattern, ComputeOrdering(pattern));
  ShiftedPencil pencil{p.A, p.B, symbolic};

  BracketInterval Interval(double lo, double hi)
  {
    return {lo, hi, pencil.CountBelow(lo), pencil.CountBelow(hi)};
  }
};

Setup LadderSetup(Index n) { return Setup{{testing::Ladder(n), testing::Identity(n)}}; }

}  // namespace

TEST_CASE("interval already narrow enough is returned unchanged")
{
  auto s = LadderSetup(10);
  const auto iv = s.Interval(2.5, 5.5);
  const auto r = NarrowInterval(iv, s.pencil, 4, 3);
  CHECK(r.iterations == 0);
  CHECK(r.interval == iv);
  CHECK(r.trace.empty());
}

TEST_CASE("diag(1..64), k = 32, m_max = 4")
{
  auto s = LadderSetup(64);
  const auto iv = s.Interval(0.5, 64.5);
  const auto calls = SymbolicFactorizeCalls();
  const auto r = NarrowInterval(iv, s.pencil, 32, 4);
  CHECK(SymbolicFactorizeCalls() == calls);
  CHECK(r.interval.Contains(32));
  CHECK(r.interval.lower < 32.0);
  CHECK(32.0 < r.interval.upper);
  CHECK(r.interval.Count() <= 4);
  CHECK_FALSE(r.cluster_suspected);
  double length = iv.Length();
  for (const auto &step : r.trace)
  {
    CHECK(step.length == length / 2);
    CHECK_FALSE(step.perturbed);
    length = step.length;
  }
  CHECK(r.iterations == static_cast<Index>(r.trace.size()));
  // 64 -> 32 -> 16 -> 8 -> 4 eigenvalues.
  CHECK(r.iterations == 4);
}

TEST_CASE("containment and count consistency on random pencils")
{
  for (std::uint64_t seed = 1; seed <= 5; seed++)
  {
    CAPTURE(seed);
    Setup s{testing::SweepPencil(120, seed + 70)};
    const auto spectrum = DenseGeneralizedEigen(s.p.A, s.p.B, false);
    const double lo = spectrum.eigenvalues.front() - 1.0;
    const double hi = spectrum.eigenvalues.back() + 1.0;
    for (Index k : {Index{1}, Index{40}, Index{77}, Index{120}})
    {
      CAPTURE(k);
      const auto iv = s.Interval(lo, hi);
      const auto r = NarrowInterval(iv, s.pencil, k, 5);
      BracketInterval cur = iv;
      for (const auto &step : r.trace)
      {
        // The new end point must split the previous count consistently.
        CHECK(cur.nu_lower <= step.nu);
        CHECK(step.nu <= cur.nu_upper);
        if (k <= step.nu)
        {
          cur.upper = step.sigma;
          cur.nu_upper = step.nu;
        }
        else
        {
          cur.lower = step.sigma;
          cur.nu_lower = step.nu;
        }
        CHECK(cur.Contains(k));
        CHECK(step.count == cur.Count());
        CHECK(step.nu == CountBelow(spectrum, step.sigma));
      }
      CHECK(cur == r.interval);
      CHECK(r.interval.Count() <= 5);
      CHECK(r.interval.lower <= spectrum.eigenvalues[k - 1]);
      CHECK(spectrum.eigenvalues[k - 1] < r.interval.upper);
    }
  }
}

TEST_CASE("bisection to an eigenvalue")
{
  auto s = LadderSetup(10);
  const auto iv = s.Interval(0.5, 10.5);
  const auto r = BisectToEigenvalue(iv, s.pencil, 3, BisectionTolerance{});
  CHECK(std::abs(r.eigenvalue - 3.0) < 5e-7);
  CHECK(r.bisection.iterations == static_cast<Index>(std::ceil(std::log2(10.0 / 1e-6))));
  CHECK(r.bisection.iterations == 24);

  SUBCASE("interval already below tolerance")
  {
    const auto small = s.Interval(2.9999999, 3.0000001);
    const auto q = BisectToEigenvalue(small, s.pencil, 3, BisectionTolerance{});
    CHECK(q.bisection.iterations == 0);
    CHECK(q.eigenvalue == small.lower + (small.upper - small.lower) / 2);
  }

  SUBCASE("relative criterion")
  {
    const auto q = BisectToEigenvalue(iv, s.pencil, 7,
                                      BisectionTolerance{BisectionTolerance::Mode::Relative, 1e-14});
    CHECK(std::abs(q.eigenvalue - 7.0) <= 1e-13 * 7.0);
    CHECK(q.bisection.iterations >= 40);
  }
}

TEST_CASE("iteration cap flags a suspected cluster")
{
  // Two eigenvalues 1e-13 apart cannot be separated within a few halvings.
  Setup s{{testing::Diagonal({1.0, 2.0, 2.0 + 1e-13, 3.0}), testing::Identity(4)}};
  const auto iv = s.Interval(1.5, 2.5);
  const auto r = NarrowInterval(iv, s.pencil, 2, 1, 10);
  CHECK(r.cluster_suspected);
  CHECK(r.iterations == 10);
  CHECK(r.interval.Contains(2));
}

TEST_CASE("singular midpoint is perturbed, never guessed")
{
  auto s = LadderSetup(8);
  // The first midpoint is exactly the eigenvalue 4.
  const auto r = NarrowInterval(s.Interval(2.25, 5.75), s.pencil, 4, 1);
  CHECK(r.trace.front().perturbed);
  CHECK(r.trace.front().sigma != 4.0);
  CHECK(r.interval.Contains(4));
  CHECK(r.interval.Count() <= 1);
}
