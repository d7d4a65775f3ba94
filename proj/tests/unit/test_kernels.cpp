// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <vector>
#include "doctest.h"
#include "kep/errors.hpp"
#include "kep/kernels.hpp"
#include "support/pencils.hpp"

using namespace kep;
using kernels::Backend;

namespace
{

std::vector<double> Random(std::size_t n, std::uint64_t seed)
{
  testing::Rng rng(seed);
  std::vector<double> v(n);
  for (auto &x : v)
  {
    x = rng.Uniform(-1.0, 1.0);
  }
  return v;
}

std::vector<Backend> SimdBackends()
{
  std::vector<Backend> out;
  for (Backend b : {Backend::Avx2, Backend::Neon})
  {
    if (kernels::Table(b) && kernels::DetectBackend() == b)
    {
      out.push_back(b);
    }
  }
  return out;
}

// Restores the process-wide backend on scope exit.
struct BackendGuard
{
  Backend saved = kernels::ActiveBackend();
  ~BackendGuard() { kernels::SetActiveBackend(saved); }
};

}  // namespace

TEST_CASE("scalar table is always available")
{
  CHECK(kernels::Table(Backend::Scalar) != nullptr);
  CHECK(kernels::BackendName(Backend::Scalar) == "scalar");
}

TEST_CASE("simd kernels agree with the scalar reference")
{
  const auto *ref = kernels::Table(Backend::Scalar);
  const auto backends = SimdBackends();
  if (backends.empty())
  {
    MESSAGE("no SIMD backend on this machine; equivalence test is vacuous");
  }
  for (Backend b : backends)
  {
    const auto *simd = kernels::Table(b);
    CAPTURE(kernels::BackendName(b));
    // Lengths around every vector-width and unroll boundary.
    for (std::size_t n = 0; n <= 70; n++)
    {
      CAPTURE(n);
      const auto x = Random(n, 11 + n);
      const auto y = Random(n, 97 + n);

      double magnitude = 0.0;
      for (std::size_t i = 0; i < n; i++)
      {
        magnitude += std::abs(x[i] * y[i]);
      }
      const double d_ref = ref->dot(x.data(), y.data(), n);
      const double d_simd = simd->dot(x.data(), y.data(), n);
      CHECK(std::abs(d_ref - d_simd) <= 4.0 * n * 1.2e-16 * magnitude);

      auto y_ref = y;
      auto y_simd = y;
      ref->axpy(0.37, x.data(), y_ref.data(), n);
      simd->axpy(0.37, x.data(), y_simd.data(), n);
      for (std::size_t i = 0; i < n; i++)
      {
        CHECK(std::abs(y_ref[i] - y_simd[i]) <= 2.3e-16 * (0.37 * std::abs(x[i]) + std::abs(y[i])));
      }

      auto s_ref = x;
      auto s_simd = x;
      ref->scale(-1.75, s_ref.data(), n);
      simd->scale(-1.75, s_simd.data(), n);
      CHECK(s_ref == s_simd);

      auto b_ref = y;
      auto b_simd = y;
      ref->axpby(0.5, x.data(), -2.0, b_ref.data(), n);
      simd->axpby(0.5, x.data(), -2.0, b_simd.data(), n);
      for (std::size_t i = 0; i < n; i++)
      {
        CHECK(std::abs(b_ref[i] - b_simd[i]) <=
              2.3e-16 * (0.5 * std::abs(x[i]) + 2.0 * std::abs(y[i])));
      }
    }
  }
}

TEST_CASE("dispatch honours the selected backend")
{
  BackendGuard guard;
  kernels::SetActiveBackend(Backend::Scalar);
  CHECK(kernels::ActiveBackend() == Backend::Scalar);
  const std::vector<double> x{1.0, 2.0, 3.0};
  const std::vector<double> y{4.0, -5.0, 6.0};
  CHECK(kernels::Dot(x, y) == 12.0);
  CHECK(kernels::Norm2(std::vector<double>{3.0, 4.0}) == 5.0);
  for (Backend b : SimdBackends())
  {
    kernels::SetActiveBackend(b);
    CHECK(kernels::ActiveBackend() == b);
    CHECK(kernels::Dot(x, y) == 12.0);
  }
}

TEST_CASE("unavailable backends are rejected")
{
  BackendGuard guard;
  for (Backend b : {Backend::Avx2, Backend::Neon})
  {
    if (!kernels::Table(b))
    {
      CHECK_THROWS_AS(kernels::SetActiveBackend(b), Error);
    }
  }
}

TEST_CASE("span wrappers check lengths")
{
  std::vector<double> a(3, 1.0);
  std::vector<double> b(4, 1.0);
  CHECK_THROWS_AS(kernels::Dot(a, b), DimensionMismatch);
  CHECK_THROWS_AS(kernels::Axpy(1.0, a, b), DimensionMismatch);
  CHECK_THROWS_AS(kernels::Axpby(1.0, a, 1.0, b), DimensionMismatch);
}
