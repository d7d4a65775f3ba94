// SPDX-License-Identifier: Apache-2.0

#include <arm_neon.h>
#include "tables.hpp"

namespace kep::kernels::detail
{

namespace
{

double DotNeon(const double *x, const double *y, std::size_t n)
{
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
  {
    acc0 = vfmaq_f64(acc0, vld1q_f64(x + i), vld1q_f64(y + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(x + i + 2), vld1q_f64(y + i + 2));
  }
  double sum = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; i++)
  {
    sum += x[i] * y[i];
  }
  return sum;
}

void AxpyNeon(double a, const double *x, double *y, std::size_t n)
{
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
  {
    vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  }
  for (; i < n; i++)
  {
    y[i] += a * x[i];
  }
}

void ScaleNeon(double a, double *x, std::size_t n)
{
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
  {
    vst1q_f64(x + i, vmulq_f64(va, vld1q_f64(x + i)));
  }
  for (; i < n; i++)
  {
    x[i] *= a;
  }
}

void AxpbyNeon(double a, const double *x, double b, double *y, std::size_t n)
{
  const float64x2_t va = vdupq_n_f64(a);
  const float64x2_t vb = vdupq_n_f64(b);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
  {
    vst1q_f64(y + i, vfmaq_f64(vmulq_f64(vb, vld1q_f64(y + i)), va, vld1q_f64(x + i)));
  }
  for (; i < n; i++)
  {
    y[i] = a * x[i] + b * y[i];
  }
}

}  // namespace

const KernelTable neon_table = {DotNeon, AxpyNeon, ScaleNeon, AxpbyNeon};

}  // namespace kep::kernels::detail
