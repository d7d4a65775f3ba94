// SPDX-License-Identifier: Apache-2.0

#ifndef KEP_KERNELS_HPP
#define KEP_KERNELS_HPP

#include <span>
#include <string_view>

namespace kep::kernels
{


// Dense vector kernels used by the Lanczos recurrences. Every routine has a scalar
// reference implementation and, where the target supports it, an AVX2/FMA or NEON variant
// selected once at runtime. The environment variable KEP_KERNELS=scalar forces the
// reference path.


enum class Backend
{
  Scalar,
  Avx2,
  Neon
};

struct KernelTable
{
  double (*dot)(const double *x, const double *y, std::size_t n);
  void (*axpy)(double a, const double *x, double *y, std::size_t n);
  void (*scale)(double a, double *x, std::size_t n);
  // y := a * x + b * y
  void (*axpby)(double a, const double *x, double b, double *y, std::size_t n);
};

// Tables for each compiled-in backend. Returns nullptr for backends that were not built.
const KernelTable *Table(Backend backend);

// Best backend supported by both the build and the running CPU.
Backend DetectBackend();

Backend ActiveBackend();
void SetActiveBackend(Backend backend);
std::string_view BackendName(Backend backend);

double Dot(std::span<const double> x, std::span<const double> y);
void Axpy(double a, std::span<const double> x, std::span<double> y);
void Scale(double a, std::span<double> x);
void Axpby(double a, std::span<const double> x, double b, std::span<double> y);
double Norm2(std::span<const double> x);

}  // namespace kep::kernels

#endif  // KEP_KERNELS_HPP
