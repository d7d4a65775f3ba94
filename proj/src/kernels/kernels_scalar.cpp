// SPDX-License-Identifier: Apache-2.0

#include "tables.hpp"

namespace kep::kernels::detail
{

namespace
{

double DotScalar(const double *x, const double *y, std::size_t n)
{
  double sum = 0.0;
  for (std::size_t i = 0; i < n; i++)
  {
    sum += x[i] * y[i];
  }
  return sum;
}

void AxpyScalar(double a, const double *x, double *y, std::size_t n)
{
  for (std::size_t i = 0; i < n; i++)
  {
    y[i] += a * x[i];
  }
}

void ScaleScalar(double a, double *x, std::size_t n)
{
  for (std::size_t i = 0; i < n; i++)
  {
    x[i] *= a;
  }
}

void AxpbyScalar(double a, const double *x, double b, double *y, std::size_t n)
{
  for (std::size_t i = 0; i < n; i++)
  {
    y[i] = a * x[i] + b * y[i];
  }
}

}  // namespace

const KernelTable scalar_table = {DotScalar, AxpyScalar, ScaleScalar, AxpbyScalar};

}  // namespace kep::kernels::detail
