// SPDX-License-Identifier: Apache-2.0

#include "kep/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include "kep/errors.hpp"

namespace kep
{

RitzSpectrum TridiagEigen(std::span<const double> alphas, std::span<const double> betas,
                          bool want_vectors)
{
  const auto n = static_cast<Index>(alphas.size());
  if (n > 0 && static_cast<Index>(betas.size()) < n - 1)
  {
    throw DimensionMismatch("tridiagonal matrix needs j - 1 off-diagonal entries");
  }
  RitzSpectrum out;
  out.j = n;
  if (n == 0)
  {
    return out;
  }
  std::vector<double> d(alphas.begin(), alphas.end());
  std::vector<double> e(n, 0.0);
  for (Index i = 0; i + 1 < n; i++)
  {
    e[i] = betas[i];
  }
  std::vector<double> V;
  if (want_vectors)
  {
    V.assign(static_cast<std::size_t>(n * n), 0.0);
    for (Index i = 0; i < n; i++)
    {
      V[i * n + i] = 1.0;
    }
  }

  constexpr double eps = std::numeric_limits<double>::epsilon();
  double f = 0.0, tst1 = 0.0;
  for (Index l = 0; l < n; l++)
  {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    Index m = l;
    while (m < n - 1 && std::abs(e[m]) > eps * tst1)
    {
      m++;
    }
    if (m > l)
    {
      int iter = 0;
      do
      {
        if (++iter > 60)
        {
          throw Error("tridiagonal QL iteration failed to converge");
        }
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0)
        {
          r = -r;
        }
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (Index i = l + 2; i < n; i++)
        {
          d[i] -= h;
        }
        f += h;

        p = d[m];
        double c = 1.0, c2 = 1.0, c3 = 1.0;
        const double el1 = e[l + 1];
        double s = 0.0, s2 = 0.0;
        for (Index i = m - 1; i >= l; i--)
        {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[i];
          h = c * p;
          r = std::hypot(p, e[i]);
          e[i + 1] = s * r;
          s = e[i] / r;
          c = p / r;
          p = c * d[i] - s * g;
          d[i + 1] = h + s * (c * g + s * d[i]);
          if (want_vectors)
          {
            double *vi = &V[i * n];
            double *vi1 = &V[(i + 1) * n];
            for (Index k = 0; k < n; k++)
            {
              h = vi1[k];
              vi1[k] = s * vi[k] + c * h;
              vi[k] = c * vi[k] - s * h;
            }
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }

  std::vector<Index> idx(n);
  std::iota(idx.begin(), idx.end(), Index{0});
  std::stable_sort(idx.begin(), idx.end(), [&](Index a, Index b) { return d[a] < d[b]; });
  out.theta.resize(n);
  if (want_vectors)
  {
    out.vectors.resize(static_cast<std::size_t>(n * n));
  }
  for (Index i = 0; i < n; i++)
  {
    out.theta[i] = d[idx[i]];
    if (want_vectors)
    {
      std::copy_n(&V[idx[i] * n], n, &out.vectors[i * n]);
    }
  }
  return out;
}

}  // namespace kep
