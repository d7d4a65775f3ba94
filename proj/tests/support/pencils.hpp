// SPDX-License-Identifier: Apache-2.0
//
// Test problem generators and small dense helpers shared by the unit and acceptance tests.

#ifndef KEP_TESTS_PENCILS_HPP
#define KEP_TESTS_PENCILS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>
#include "kep/sparse.hpp"

namespace kep::testing
{

// splitmix64; deterministic on every platform.
class Rng
{
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t Bits()
  {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  // [0, 1)
  double Unit() { return static_cast<double>(Bits() >> 11) * 0x1.0p-53; }
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Unit(); }
  Index Below(Index n) { return static_cast<Index>(Bits() % static_cast<std::uint64_t>(n)); }

private:
  std::uint64_t state_;
};

inline SparseSymmetric Diagonal(const std::vector<double> &d)
{
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < d.size(); i++)
  {
    t.push_back({static_cast<Index>(i), static_cast<Index>(i), d[i]});
  }
  return SparseSymmetric::FromTriplets(static_cast<Index>(d.size()), t);
}

// diag(1, 2, ..., n)
inline SparseSymmetric Ladder(Index n)
{
  std::vector<double> d;
  for (Index i = 1; i <= n; i++)
  {
    d.push_back(static_cast<double>(i));
  }
  return Diagonal(d);
}

inline SparseSymmetric Identity(Index n) { return Diagonal(std::vector<double>(n, 1.0)); }

// Symmetric matrix with about `per_row` random off-diagonal entries per row, entries
// uniform in (-1, 1), plus `shift` on the diagonal.
inline SparseSymmetric RandomSymmetric(Index n, std::uint64_t seed, Index per_row = 4,
                                       double shift = 0.0)
{
  Rng rng(seed);
  std::map<std::pair<Index, Index>, double> entries;
  for (Index i = 0; i < n; i++)
  {
    entries[{i, i}] = rng.Uniform(-1.0, 1.0) + shift;
    for (Index t = 0; t < per_row / 2; t++)
    {
      const Index j = rng.Below(n);
      if (j != i)
      {
        entries[{std::max(i, j), std::min(i, j)}] = rng.Uniform(-1.0, 1.0);
      }
    }
  }
  std::vector<Triplet> t;
  for (const auto &[key, value] : entries)
  {
    t.push_back({key.first, key.second, value});
  }
  return SparseSymmetric::FromTriplets(n, t);
}

// B = M^T M + n I with M sparse (about `per_column` entries per column, uniform (-1, 1)).
inline SparseSymmetric RandomSpd(Index n, std::uint64_t seed, Index per_column = 3)
{
  Rng rng(seed);
  std::vector<std::vector<std::pair<Index, double>>> columns(static_cast<std::size_t>(n));
  for (Index c = 0; c < n; c++)
  {
    std::map<Index, double> col;
    for (Index t = 0; t < per_column; t++)
    {
      col[rng.Below(n)] = rng.Uniform(-1.0, 1.0);
    }
    columns[c].assign(col.begin(), col.end());
  }
  // (M^T M)_{ij} = column_i . column_j; only pairs sharing a row contribute.
  std::vector<std::vector<std::pair<Index, double>>> rows(static_cast<std::size_t>(n));
  for (Index c = 0; c < n; c++)
  {
    for (const auto &[r, v] : columns[c])
    {
      rows[r].push_back({c, v});
    }
  }
  std::map<std::pair<Index, Index>, double> entries;
  for (Index i = 0; i < n; i++)
  {
    entries[{i, i}] += static_cast<double>(n);
  }
  for (const auto &row : rows)
  {
    for (const auto &[ci, vi] : row)
    {
      for (const auto &[cj, vj] : row)
      {
        if (ci >= cj)
        {
          entries[{ci, cj}] += vi * vj;
        }
      }
    }
  }
  std::vector<Triplet> t;
  for (const auto &[key, value] : entries)
  {
    t.push_back({key.first, key.second, value});
  }
  return SparseSymmetric::FromTriplets(n, t);
}

struct TestPencil
{
  SparseSymmetric A;
  SparseSymmetric B;
};

// Largest absolute row sum of the full symmetric matrix.
inline double GershgorinRadius(const SparseSymmetric &S)
{
  std::vector<double> sums(static_cast<std::size_t>(S.Size()), 0.0);
  for (const auto &t : S.Triplets())
  {
    sums[t.row] += std::abs(t.value);
    if (t.row != t.col)
    {
      sums[t.col] += std::abs(t.value);
    }
  }
  double r = 0.0;
  for (double v : sums)
  {
    r = std::max(r, v);
  }
  return r;
}

// Oracle-sweep pencil: A random sparse symmetric shifted by its Gershgorin radius plus one,
// so every eigenvalue of A lies in [1, 2 r + 1] and no pencil eigenvalue sits near zero;
// B = M^T M + n I.
inline TestPencil SweepPencil(Index n, std::uint64_t seed)
{
  const SparseSymmetric R = RandomSymmetric(n, seed * 2 + 1, 6);
  return {RandomSymmetric(n, seed * 2 + 1, 6, GershgorinRadius(R) + 1.0),
          RandomSpd(n, seed * 2 + 2)};
}

// Row-major dense product.
inline std::vector<double> DenseMatVec(const std::vector<double> &M, const std::vector<double> &x)
{
  const std::size_t n = x.size();
  std::vector<double> y(n, 0.0);
  for (std::size_t i = 0; i < n; i++)
  {
    for (std::size_t j = 0; j < n; j++)
    {
      y[i] += M[i * n + j] * x[j];
    }
  }
  return y;
}

inline double Norm(const std::vector<double> &x)
{
  double s = 0.0;
  for (double v : x)
  {
    s += v * v;
  }
  return std::sqrt(s);
}

// Eigenvalues of a row-major dense symmetric matrix by cyclic Jacobi rotations, ascending.
// Slow and simple, kept independent of the library's own dense solver.
inline std::vector<double> JacobiEigenvalues(std::vector<double> M, std::size_t n)
{
  for (int sweep = 0; sweep < 100; sweep++)
  {
    double off = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < n; i++)
    {
      for (std::size_t j = 0; j < n; j++)
      {
        total += M[i * n + j] * M[i * n + j];
        if (i != j)
        {
          off += M[i * n + j] * M[i * n + j];
        }
      }
    }
    if (off <= 1e-30 * total)
    {
      break;
    }
    for (std::size_t p = 0; p < n; p++)
    {
      for (std::size_t q = p + 1; q < n; q++)
      {
        const double apq = M[p * n + q];
        if (apq == 0.0)
        {
          continue;
        }
        const double theta = (M[q * n + q] - M[p * n + p]) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; k++)
        {
          const double mkp = M[k * n + p];
          const double mkq = M[k * n + q];
          M[k * n + p] = c * mkp - s * mkq;
          M[k * n + q] = s * mkp + c * mkq;
        }
        for (std::size_t k = 0; k < n; k++)
        {
          const double mpk = M[p * n + k];
          const double mqk = M[q * n + k];
          M[p * n + k] = c * mpk - s * mqk;
          M[q * n + k] = s * mpk + c * mqk;
        }
      }
    }
  }
  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; i++)
  {
    eig[i] = M[i * n + i];
  }
  std::sort(eig.begin(), eig.end());
  return eig;
}

}  // namespace kep::testing

#endif  // KEP_TESTS_PENCILS_HPP
