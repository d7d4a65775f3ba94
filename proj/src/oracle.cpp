// SPDX-License-Identifier: Apache-2.0

#include "kep/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include "kep/errors.hpp"

namespace kep
{

namespace
{

// Row-major square matrix with plain loops; deliberately free of the vector kernels.
class Dense
{
public:
  explicit Dense(Index n) : n_(n), data_(static_cast<std::size_t>(n * n), 0.0) {}
  Dense(Index n, std::span<const double> values) : n_(n), data_(values.begin(), values.end()) {}

  double &operator()(Index i, Index j) { return data_[static_cast<std::size_t>(i * n_ + j)]; }
  double operator()(Index i, Index j) const
  {
    return data_[static_cast<std::size_t>(i * n_ + j)];
  }
  Index Size() const { return n_; }

private:
  Index n_;
  std::vector<double> data_;
};

// Lower-triangular L with B = L L^T.
Dense Cholesky(const Dense &B)
{
  const Index n = B.Size();
  Dense L(n);
  for (Index j = 0; j < n; j++)
  {
    double d = B(j, j);
    for (Index p = 0; p < j; p++)
    {
      d -= L(j, p) * L(j, p);
    }
    if (!(d > 0.0))
    {
      throw NotPositiveDefinite("Cholesky factorization of B failed at column " +
                                std::to_string(j));
    }
    L(j, j) = std::sqrt(d);
    for (Index i = j + 1; i < n; i++)
    {
      double v = B(i, j);
      for (Index p = 0; p < j; p++)
      {
        v -= L(i, p) * L(j, p);
      }
      L(i, j) = v / L(j, j);
    }
  }
  return L;
}

// Overwrites each column of X with L^{-1} X.
void ForwardSolveColumns(const Dense &L, Dense &X)
{
  const Index n = L.Size();
  for (Index c = 0; c < n; c++)
  {
    for (Index i = 0; i < n; i++)
    {
      double v = X(i, c);
      for (Index p = 0; p < i; p++)
      {
        v -= L(i, p) * X(p, c);
      }
      X(i, c) = v / L(i, i);
    }
  }
}

// Overwrites each column of X with L^{-T} X.
void BackwardSolveColumns(const Dense &L, Dense &X)
{
  const Index n = L.Size();
  for (Index c = 0; c < n; c++)
  {
    for (Index i = n - 1; i >= 0; i--)
    {
      double v = X(i, c);
      for (Index p = i + 1; p < n; p++)
      {
        v -= L(p, i) * X(p, c);
      }
      X(i, c) = v / L(i, i);
    }
  }
}

Dense Transposed(const Dense &X)
{
  Dense T(X.Size());
  for (Index i = 0; i < X.Size(); i++)
  {
    for (Index j = 0; j < X.Size(); j++)
    {
      T(j, i) = X(i, j);
    }
  }
  return T;
}

// Reduces symmetric C to tridiagonal form Q^T C Q in place; Q accumulates the reflections.
void Tridiagonalize(Dense &C, Dense &Q, std::vector<double> &diag, std::vector<double> &off,
                    bool want_vectors)
{
  const Index n = C.Size();
  std::vector<double> v(static_cast<std::size_t>(n));
  std::vector<double> p(static_cast<std::size_t>(n));
  for (Index k = 0; k + 2 < n; k++)
  {
    double alpha = 0.0;
    for (Index i = k + 1; i < n; i++)
    {
      alpha += C(i, k) * C(i, k);
    }
    alpha = std::sqrt(alpha);
    if (alpha == 0.0)
    {
      continue;
    }
    if (C(k + 1, k) > 0.0)
    {
      alpha = -alpha;
    }
    // v = x - alpha e_1, H = I - 2 v v^T / (v^T v)
    double vtv = 0.0;
    for (Index i = k + 1; i < n; i++)
    {
      v[i] = C(i, k);
    }
    v[k + 1] -= alpha;
    for (Index i = k + 1; i < n; i++)
    {
      vtv += v[i] * v[i];
    }
    const double tau = 2.0 / vtv;

    // C := H C H on the trailing block, via p = tau C v, w = p - (tau/2)(p^T v) v.
    double ptv = 0.0;
    for (Index i = k + 1; i < n; i++)
    {
      double s = 0.0;
      for (Index j = k + 1; j < n; j++)
      {
        s += C(i, j) * v[j];
      }
      p[i] = tau * s;
      ptv += p[i] * v[i];
    }
    for (Index i = k + 1; i < n; i++)
    {
      p[i] -= 0.5 * tau * ptv * v[i];
    }
    for (Index i = k + 1; i < n; i++)
    {
      for (Index j = k + 1; j < n; j++)
      {
        C(i, j) -= v[i] * p[j] + p[i] * v[j];
      }
    }
    C(k + 1, k) = C(k, k + 1) = alpha;
    for (Index i = k + 2; i < n; i++)
    {
      C(i, k) = C(k, i) = 0.0;
    }
    if (want_vectors)
    {
      for (Index r = 0; r < n; r++)
      {
        double s = 0.0;
        for (Index j = k + 1; j < n; j++)
        {
          s += Q(r, j) * v[j];
        }
        s *= tau;
        for (Index j = k + 1; j < n; j++)
        {
          Q(r, j) -= s * v[j];
        }
      }
    }
  }
  diag.assign(static_cast<std::size_t>(n), 0.0);
  off.assign(static_cast<std::size_t>(std::max<Index>(n - 1, 0)), 0.0);
  for (Index i = 0; i < n; i++)
  {
    diag[i] = C(i, i);
    if (i + 1 < n)
    {
      off[i] = C(i + 1, i);
    }
  }
}

// Implicit symmetric QR with Wilkinson shifts on the tridiagonal (diag, off); rotations are
// applied to the columns of Q.
void TridiagonalQr(std::vector<double> &d, std::vector<double> &e, Dense &Q, bool want_vectors)
{
  const Index n = static_cast<Index>(d.size());
  constexpr double eps = std::numeric_limits<double>::epsilon();
  Index sweeps = 0;
  Index hi = n - 1;
  while (hi > 0)
  {
    for (Index i = 0; i < hi; i++)
    {
      if (std::abs(e[i]) <= eps * (std::abs(d[i]) + std::abs(d[i + 1])))
      {
        e[i] = 0.0;
      }
    }
    while (hi > 0 && e[hi - 1] == 0.0)
    {
      hi--;
    }
    if (hi == 0)
    {
      break;
    }
    Index lo = hi - 1;
    while (lo > 0 && e[lo - 1] != 0.0)
    {
      lo--;
    }
    if (++sweeps > 60 * n)
    {
      throw Error("dense oracle: QR iteration did not converge");
    }

    const double half = (d[hi - 1] - d[hi]) / 2.0;
    const double e2 = e[hi - 1] * e[hi - 1];
    const double sgn = half >= 0.0 ? 1.0 : -1.0;
    const double mu = d[hi] - e2 / (half + sgn * std::hypot(half, e[hi - 1]));

    double x = d[lo] - mu;
    double z = e[lo];
    double bulge = 0.0;
    for (Index k = lo; k < hi; k++)
    {
      const double r = std::hypot(x, z);
      const double c = r == 0.0 ? 1.0 : x / r;
      const double s = r == 0.0 ? 0.0 : -z / r;
      if (k > lo)
      {
        e[k - 1] = r;
      }
      const double a = d[k];
      const double b = d[k + 1];
      const double f = e[k];
      d[k] = c * c * a - 2.0 * c * s * f + s * s * b;
      d[k + 1] = s * s * a + 2.0 * c * s * f + c * c * b;
      e[k] = c * s * (a - b) + (c * c - s * s) * f;
      if (k + 1 < hi)
      {
        bulge = -s * e[k + 1];
        e[k + 1] *= c;
      }
      if (want_vectors)
      {
        for (Index r_ = 0; r_ < Q.Size(); r_++)
        {
          const double qk = Q(r_, k);
          const double qk1 = Q(r_, k + 1);
          Q(r_, k) = c * qk - s * qk1;
          Q(r_, k + 1) = s * qk + c * qk1;
        }
      }
      x = e[k];
      z = bulge;
    }
  }
}

}  // namespace

DenseSpectrum DenseGeneralizedEigen(std::span<const double> A, std::span<const double> B, Index n,
                                    bool want_vectors, Index cap)
{
  if (n > cap)
  {
    throw Error("dense oracle limited to n <= " + std::to_string(cap) + ", got " +
                std::to_string(n));
  }
  if (static_cast<Index>(A.size()) != n * n || static_cast<Index>(B.size()) != n * n)
  {
    throw DimensionMismatch("dense oracle expects two n x n matrices");
  }
  DenseSpectrum out;
  out.n = n;
  if (n == 0)
  {
    return out;
  }
  const Dense L = Cholesky(Dense(n, B));

  // C = L^{-1} (L^{-1} A)^T = L^{-1} A L^{-T}
  Dense Y(n, A);
  ForwardSolveColumns(L, Y);
  Dense C = Transposed(Y);
  ForwardSolveColumns(L, C);
  for (Index i = 0; i < n; i++)
  {
    for (Index j = 0; j < i; j++)
    {
      const double avg = 0.5 * (C(i, j) + C(j, i));
      C(i, j) = C(j, i) = avg;
    }
  }

  Dense Q(want_vectors ? n : 1);
  if (want_vectors)
  {
    for (Index i = 0; i < n; i++)
    {
      Q(i, i) = 1.0;
    }
  }
  std::vector<double> d;
  std::vector<double> e;
  Tridiagonalize(C, Q, d, e, want_vectors);
  TridiagonalQr(d, e, Q, want_vectors);

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return d[a] < d[b]; });
  out.eigenvalues.resize(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; i++)
  {
    out.eigenvalues[i] = d[order[i]];
  }
  if (want_vectors)
  {
    // X = L^{-T} Q, columns reordered by eigenvalue.
    BackwardSolveColumns(L, Q);
    out.vectors.resize(static_cast<std::size_t>(n * n));
    for (Index c = 0; c < n; c++)
    {
      for (Index r = 0; r < n; r++)
      {
        out.vectors[static_cast<std::size_t>(c * n + r)] = Q(r, order[c]);
      }
    }
  }
  return out;
}

DenseSpectrum DenseGeneralizedEigen(const SparseSymmetric &A, const SparseSymmetric &B,
                                    bool want_vectors, Index cap)
{
  if (A.Size() != B.Size())
  {
    throw DimensionMismatch("pencil matrices differ in size");
  }
  if (A.Size() > cap)
  {
    throw Error("dense oracle limited to n <= " + std::to_string(cap) + ", got " +
                std::to_string(A.Size()));
  }
  return DenseGeneralizedEigen(A.ToDense(), B.ToDense(), A.Size(), want_vectors, cap);
}

Index CountBelow(const DenseSpectrum &spectrum, double sigma)
{
  return static_cast<Index>(std::lower_bound(spectrum.eigenvalues.begin(),
                                             spectrum.eigenvalues.end(), sigma) -
                            spectrum.eigenvalues.begin());
}

Index DenseInertia(const SparseSymmetric &A, const SparseSymmetric &B, double sigma)
{
  return CountBelow(DenseGeneralizedEigen(A, B, false), sigma);
}

}  // namespace kep
