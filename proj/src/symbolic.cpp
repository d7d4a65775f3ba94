// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <atomic>
#include <numeric>
#include <string>
#include "kep/errors.hpp"
#include "kep/symbolic.hpp"

namespace kep
{

Permutation::Permutation(std::vector<Index> forward, Role role)
  : forward_(std::move(forward)), inverse_(forward_.size(), -1), role_(role)
{
  const auto n = static_cast<Index>(forward_.size());
  for (Index i = 0; i < n; i++)
  {
    const Index k = forward_[i];
    if (k < 0 || k >= n || inverse_[k] != -1)
    {
      throw Error("permutation is not a bijection on {0.." + std::to_string(n - 1) + "}");
    }
    inverse_[k] = i;
  }
}

Permutation Permutation::Identity(Index n, Role role)
{
  std::vector<Index> f(n);
  std::iota(f.begin(), f.end(), Index{0});
  return Permutation(std::move(f), role);
}

Permutation Permutation::Inverted() const
{
  return Permutation(inverse_, role_);
}

Permutation Permutation::Compose(const Permutation &other) const
{
  if (other.Size() != Size())
  {
    throw DimensionMismatch("composing permutations of different sizes");
  }
  std::vector<Index> f(forward_.size());
  for (std::size_t i = 0; i < f.size(); i++)
  {
    f[i] = forward_[other.forward_[i]];
  }
  return Permutation(std::move(f), role_);
}

namespace
{

std::atomic<std::uint64_t> symbolic_calls{0};

}  // namespace

std::uint64_t SymbolicFactorizeCalls() { return symbolic_calls.load(); }

SymbolicFactorization SymbolicFactorize(const SparseSymmetric &pattern, const Permutation &Q)
{
  symbolic_calls++;
  const Index n = pattern.Size();
  if (Q.Size() != n)
  {
    throw DimensionMismatch("ordering of size " + std::to_string(Q.Size()) +
                            " for a matrix of size " + std::to_string(n));
  }
  const auto pinv = Q.Inverse();
  const auto cp = pattern.ColPtr();
  const auto ri = pattern.RowIdx();

  // For each permuted row k, the permuted columns i < k with a nonzero in row k.
  std::vector<Index> row_ptr(n + 1, 0);
  for (Index j = 0; j < n; j++)
  {
    for (Index p = cp[j]; p < cp[j + 1]; p++)
    {
      const Index a = pinv[ri[p]], b = pinv[j];
      if (a != b)
      {
        row_ptr[std::max(a, b) + 1]++;
      }
    }
  }
  std::partial_sum(row_ptr.begin(), row_ptr.end(), row_ptr.begin());
  std::vector<Index> cols(row_ptr[n]);
  {
    std::vector<Index> next(row_ptr.begin(), row_ptr.end() - 1);
    for (Index j = 0; j < n; j++)
    {
      for (Index p = cp[j]; p < cp[j + 1]; p++)
      {
        const Index a = pinv[ri[p]], b = pinv[j];
        if (a != b)
        {
          cols[next[std::max(a, b)]++] = std::min(a, b);
        }
      }
    }
  }

  SymbolicFactorization sym;
  sym.n = n;
  sym.pattern_id = pattern.PatternId();
  sym.ordering = Q;
  sym.parent.assign(n, -1);
  sym.column_counts.assign(n, 0);

  // Elimination tree with path compression.
  std::vector<Index> ancestor(n, -1);
  for (Index k = 0; k < n; k++)
  {
    for (Index p = row_ptr[k]; p < row_ptr[k + 1]; p++)
    {
      Index i = cols[p];
      while (i != -1 && i < k)
      {
        const Index next = ancestor[i];
        ancestor[i] = k;
        if (next == -1)
        {
          sym.parent[i] = k;
        }
        i = next;
      }
    }
  }

  // Row subtrees: the nonzeros of row k of L are the etree paths from each i < k in row k
  // of the permuted matrix up to k.
  std::vector<Index> mark(n, -1);
  for (Index k = 0; k < n; k++)
  {
    mark[k] = k;
    for (Index p = row_ptr[k]; p < row_ptr[k + 1]; p++)
    {
      for (Index i = cols[p]; mark[i] != k; i = sym.parent[i])
      {
        sym.column_counts[i]++;
        mark[i] = k;
      }
    }
  }

  sym.nzf_estimate = static_cast<std::size_t>(n);
  for (Index c : sym.column_counts)
  {
    sym.nzf_estimate += static_cast<std::size_t>(c);
  }
  return sym;
}

}  // namespace kep
