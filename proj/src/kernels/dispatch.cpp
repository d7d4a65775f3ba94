// SPDX-License-Identifier: Apache-2.0

#include <atomic>
#include <cassert>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include "kep/errors.hpp"
#include "tables.hpp"

namespace kep::kernels
{

namespace
{

Backend InitialBackend()
{
  if (const char *env = std::getenv("KEP_KERNELS"); env && std::strcmp(env, "scalar") == 0)
  {
    return Backend::Scalar;
  }
  return DetectBackend();
}

std::atomic<const KernelTable *> &ActiveTable()
{
  static std::atomic<const KernelTable *> table{Table(InitialBackend())};
  return table;
}

inline const KernelTable &Current()
{
  return *ActiveTable().load(std::memory_order_relaxed);
}

void CheckSizes(std::size_t a, std::size_t b)
{
  if (a != b)
  {
    throw DimensionMismatch("vector kernel operands have lengths " + std::to_string(a) +
                            " and " + std::to_string(b));
  }
}

}  // namespace

const KernelTable *Table(Backend backend)
{
  switch (backend)
  {
    case Backend::Scalar:
      return &detail::scalar_table;
    case Backend::Avx2:
#if defined(KEP_HAVE_AVX2)
      return &detail::avx2_table;
#else
      return nullptr;
#endif
    case Backend::Neon:
#if defined(KEP_HAVE_NEON)
      return &detail::neon_table;
#else
      return nullptr;
#endif
  }
  return nullptr;
}

Backend DetectBackend()
{
#if defined(KEP_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
  {
    return Backend::Avx2;
  }
#endif
#if defined(KEP_HAVE_NEON)
  return Backend::Neon;
#endif
  return Backend::Scalar;
}

Backend ActiveBackend()
{
  const KernelTable *t = ActiveTable().load();
  if (t == Table(Backend::Avx2))
  {
    return Backend::Avx2;
  }
  if (t == Table(Backend::Neon))
  {
    return Backend::Neon;
  }
  return Backend::Scalar;
}

void SetActiveBackend(Backend backend)
{
  const KernelTable *t = Table(backend);
  if (!t)
  {
    throw Error("kernel backend " + std::string(BackendName(backend)) +
                " is not available in this build");
  }
  ActiveTable().store(t);
}

std::string_view BackendName(Backend backend)
{
  switch (backend)
  {
    case Backend::Scalar:
      return "scalar";
    case Backend::Avx2:
      return "avx2";
    case Backend::Neon:
      return "neon";
  }
  return "unknown";
}

double Dot(std::span<const double> x, std::span<const double> y)
{
  CheckSizes(x.size(), y.size());
  return Current().dot(x.data(), y.data(), x.size());
}

void Axpy(double a, std::span<const double> x, std::span<double> y)
{
  CheckSizes(x.size(), y.size());
  Current().axpy(a, x.data(), y.data(), x.size());
}

void Scale(double a, std::span<double> x)
{
  Current().scale(a, x.data(), x.size());
}

void Axpby(double a, std::span<const double> x, double b, std::span<double> y)
{
  CheckSizes(x.size(), y.size());
  Current().axpby(a, x.data(), b, y.data(), x.size());
}

double Norm2(std::span<const double> x)
{
  return std::sqrt(Current().dot(x.data(), x.data(), x.size()));
}

}  // namespace kep::kernels
