// SPDX-License-Identifier: Apache-2.0

#ifndef KEP_SYMBOLIC_HPP
#define KEP_SYMBOLIC_HPP

#include <cstdint>
#include <span>
#include <vector>
#include "kep/sparse.hpp"

namespace kep
{

//
// A bijection on {0, ..., n-1}. forward[i] is the original index placed at position i,
// inverse[old] is its new position. The role tag records whether the permutation came from
// pivoting (stability) or from the fill-reducing ordering.
//
class Permutation
{
public:
  enum class Role
  {
    Stability,
    FillReducing
  };

  Permutation() = default;
  Permutation(std::vector<Index> forward, Role role);

  static Permutation Identity(Index n, Role role);

  Index Size() const { return static_cast<Index>(forward_.size()); }
  Role GetRole() const { return role_; }
  std::span<const Index> Forward() const { return forward_; }
  std::span<const Index> Inverse() const { return inverse_; }
  Index operator[](Index i) const { return forward_[i]; }

  Permutation Inverted() const;
  // (this ∘ other)[i] = this[other[i]]
  Permutation Compose(const Permutation &other) const;

  bool operator==(const Permutation &o) const { return forward_ == o.forward_; }

private:
  std::vector<Index> forward_;
  std::vector<Index> inverse_;
  Role role_ = Role::FillReducing;
};

struct SymbolicFactorization
{
  Index n = 0;
  std::uint64_t pattern_id = 0;
  Permutation ordering;
  // Elimination tree over permuted columns, -1 marks a root.
  std::vector<Index> parent;
  // Strictly-lower nonzeros per permuted column of L.
  std::vector<Index> column_counts;
  // Predicted nonzeros in L (strict lower part) plus the n diagonal entries of D.
  std::size_t nzf_estimate = 0;
};

// Deterministic minimum-degree ordering of the symmetric pattern. Ties prefer the vertex
// with the smaller original degree, then the smaller index.
Permutation ComputeOrdering(const SparseSymmetric &pattern);

// Elimination tree and column counts of the pattern permuted by Q.
SymbolicFactorization SymbolicFactorize(const SparseSymmetric &pattern, const Permutation &Q);

// Number of SymbolicFactorize calls made by this process, for reuse accounting.
std::uint64_t SymbolicFactorizeCalls();

// Symmetric adjacency lists of the pattern (diagonal excluded), sorted.
std::vector<std::vector<Index>> Adjacency(const SparseSymmetric &pattern);

}  // namespace kep

#endif  // KEP_SYMBOLIC_HPP
