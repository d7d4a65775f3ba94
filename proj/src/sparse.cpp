// SPDX-License-Identifier: Apache-2.0

#include "kep/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include "kep/errors.hpp"

namespace kep
{

namespace
{

// FNV-1a over the raw bytes of the structural arrays.
class Fnv1a
{
public:
  void Add(std::int64_t v)
  {
    for (int b = 0; b < 8; b++)
    {
      hash_ ^= static_cast<std::uint64_t>((v >> (8 * b)) & 0xff);
      hash_ *= 0x100000001b3ULL;
    }
  }
  std::uint64_t Value() const { return hash_; }

private:
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

}  // namespace

SparseSymmetric SparseSymmetric::FromTriplets(Index n, std::span<const Triplet> entries)
{
  if (n < 0)
  {
    throw DimensionMismatch("negative matrix dimension");
  }
  std::vector<Triplet> lower;
  lower.reserve(entries.size());
  for (const auto &t : entries)
  {
    if (t.row < 0 || t.col < 0 || t.row >= n || t.col >= n)
    {
      throw DimensionMismatch("entry (" + std::to_string(t.row) + ", " + std::to_string(t.col) +
                              ") outside a " + std::to_string(n) + "x" + std::to_string(n) +
                              " matrix");
    }
    if (t.row >= t.col)
    {
      lower.push_back(t);
    }
    else
    {
      lower.push_back({t.col, t.row, t.value});
    }
  }
  std::stable_sort(lower.begin(), lower.end(), [](const Triplet &a, const Triplet &b)
                   { return a.col != b.col ? a.col < b.col : a.row < b.row; });

  SparseSymmetric S;
  S.n_ = n;
  S.col_ptr_.assign(n + 1, 0);
  for (std::size_t k = 0; k < lower.size(); k++)
  {
    if (k > 0 && lower[k].row == lower[k - 1].row && lower[k].col == lower[k - 1].col)
    {
      S.values_.back() += lower[k].value;
      continue;
    }
    S.row_idx_.push_back(lower[k].row);
    S.values_.push_back(lower[k].value);
    S.col_ptr_[lower[k].col + 1]++;
  }
  for (Index j = 0; j < n; j++)
  {
    S.col_ptr_[j + 1] += S.col_ptr_[j];
  }
  S.ComputePatternId();
  return S;
}

SparseSymmetric SparseSymmetric::FromCompressed(Index n, std::vector<Index> col_ptr,
                                                std::vector<Index> row_idx,
                                                std::vector<double> values)
{
  if (n < 0 || static_cast<Index>(col_ptr.size()) != n + 1 || row_idx.size() != values.size() ||
      col_ptr.front() != 0 || col_ptr.back() != static_cast<Index>(row_idx.size()))
  {
    throw DimensionMismatch("inconsistent compressed-column arrays");
  }
  for (Index j = 0; j < n; j++)
  {
    if (col_ptr[j + 1] < col_ptr[j])
    {
      throw DimensionMismatch("column pointers are not monotone");
    }
    for (Index p = col_ptr[j]; p < col_ptr[j + 1]; p++)
    {
      if (row_idx[p] < j || row_idx[p] >= n || (p > col_ptr[j] && row_idx[p] <= row_idx[p - 1]))
      {
        throw DimensionMismatch("row indices must be sorted, unique and in the lower triangle");
      }
    }
  }
  SparseSymmetric S;
  S.n_ = n;
  S.col_ptr_ = std::move(col_ptr);
  S.row_idx_ = std::move(row_idx);
  S.values_ = std::move(values);
  S.ComputePatternId();
  return S;
}

void SparseSymmetric::ComputePatternId()
{
  Fnv1a h;
  h.Add(n_);
  for (Index p : col_ptr_)
  {
    h.Add(p);
  }
  for (Index i : row_idx_)
  {
    h.Add(i);
  }
  pattern_id_ = h.Value();
}

std::vector<Triplet> SparseSymmetric::Triplets() const
{
  std::vector<Triplet> out;
  out.reserve(row_idx_.size());
  for (Index j = 0; j < n_; j++)
  {
    for (Index p = col_ptr_[j]; p < col_ptr_[j + 1]; p++)
    {
      out.push_back({row_idx_[p], j, values_[p]});
    }
  }
  return out;
}

double SparseSymmetric::MaxAbs() const
{
  double m = 0.0;
  for (double v : values_)
  {
    m = std::max(m, std::abs(v));
  }
  return m;
}

std::vector<double> SparseSymmetric::ToDense() const
{
  const auto n = static_cast<std::size_t>(n_);
  std::vector<double> dense(n * n, 0.0);
  for (Index j = 0; j < n_; j++)
  {
    for (Index p = col_ptr_[j]; p < col_ptr_[j + 1]; p++)
    {
      const auto i = static_cast<std::size_t>(row_idx_[p]);
      const auto c = static_cast<std::size_t>(j);
      dense[i * n + c] = values_[p];
      dense[c * n + i] = values_[p];
    }
  }
  return dense;
}

bool SparseSymmetric::SamePattern(const SparseSymmetric &other) const
{
  return n_ == other.n_ && col_ptr_ == other.col_ptr_ && row_idx_ == other.row_idx_;
}

SparseSymmetric ShiftedCombine(const SparseSymmetric &A, const SparseSymmetric &B,
                               double sigma)
{
  if (A.Size() != B.Size())
  {
    throw DimensionMismatch("pencil matrices have dimensions " + std::to_string(A.Size()) +
                            " and " + std::to_string(B.Size()));
  }
  const Index n = A.Size();
  const auto ap = A.ColPtr(), bp = B.ColPtr();
  const auto ai = A.RowIdx(), bi = B.RowIdx();
  const auto av = A.Values(), bv = B.Values();

  std::vector<Index> col_ptr(n + 1, 0);
  std::vector<Index> row_idx;
  std::vector<double> values;
  row_idx.reserve(std::max(A.NumNonzeros(), B.NumNonzeros()));
  values.reserve(row_idx.capacity());
  for (Index j = 0; j < n; j++)
  {
    Index pa = ap[j], pb = bp[j];
    while (pa < ap[j + 1] || pb < bp[j + 1])
    {
      if (pb >= bp[j + 1] || (pa < ap[j + 1] && ai[pa] < bi[pb]))
      {
        row_idx.push_back(ai[pa]);
        values.push_back(av[pa]);
        pa++;
      }
      else if (pa >= ap[j + 1] || bi[pb] < ai[pa])
      {
        row_idx.push_back(bi[pb]);
        values.push_back(-sigma * bv[pb]);
        pb++;
      }
      else
      {
        row_idx.push_back(ai[pa]);
        values.push_back(av[pa] - sigma * bv[pb]);
        pa++;
        pb++;
      }
    }
    col_ptr[j + 1] = static_cast<Index>(row_idx.size());
  }
  return SparseSymmetric::FromCompressed(n, std::move(col_ptr), std::move(row_idx),
                                         std::move(values));
}

void MatVec(const SparseSymmetric &S, std::span<const double> x, std::span<double> y)
{
  const Index n = S.Size();
  if (static_cast<Index>(x.size()) != n || static_cast<Index>(y.size()) != n)
  {
    throw DimensionMismatch("matrix-vector product with a length-" + std::to_string(x.size()) +
                            " vector on a matrix of size " + std::to_string(n));
  }
  const auto cp = S.ColPtr();
  const auto ri = S.RowIdx();
  const auto v = S.Values();
  std::fill(y.begin(), y.end(), 0.0);
  for (Index j = 0; j < n; j++)
  {
    const double xj = x[j];
    double acc = 0.0;
    for (Index p = cp[j]; p < cp[j + 1]; p++)
    {
      const Index i = ri[p];
      if (i == j)
      {
        acc += v[p] * xj;
      }
      else
      {
        y[i] += v[p] * xj;
        acc += v[p] * x[i];
      }
    }
    y[j] += acc;
  }
}

std::vector<double> MatVec(const SparseSymmetric &S, std::span<const double> x)
{
  std::vector<double> y(x.size());
  MatVec(S, x, y);
  return y;
}

}  // namespace kep
