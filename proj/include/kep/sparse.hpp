// SPDX-License-Identifier: Apache-2.0

#ifndef KEP_SPARSE_HPP
#define KEP_SPARSE_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace kep
{

using Index = std::int64_t;

struct Triplet
{
  Index row;
  Index col;
  double value;

  bool operator==(const Triplet &) const = default;
};

//
// Real symmetric sparse matrix stored as its lower triangle (row >= col) in compressed
// column form. Row indices are sorted within each column and unique. The pattern id is a
// hash of (n, column pointers, row indices) and therefore depends only on the structure.
//
class SparseSymmetric
{
public:
  SparseSymmetric() = default;

  // Assembles from coordinates. Entries above the diagonal are mirrored into the lower
  // triangle and duplicate coordinates are summed. Indices are 0-based.
  static SparseSymmetric FromTriplets(Index n, std::span<const Triplet> entries);

  // Builds directly from compressed-column arrays. Validates sortedness and bounds.
  static SparseSymmetric FromCompressed(Index n, std::vector<Index> col_ptr,
                                        std::vector<Index> row_idx, std::vector<double> values);

  Index Size() const { return n_; }
  std::size_t NumNonzeros() const { return row_idx_.size(); }
  std::uint64_t PatternId() const { return pattern_id_; }

  std::span<const Index> ColPtr() const { return col_ptr_; }
  std::span<const Index> RowIdx() const { return row_idx_; }
  std::span<const double> Values() const { return values_; }

  // Lower-triangular entries in column-major order.
  std::vector<Triplet> Triplets() const;

  // Largest magnitude of any stored entry.
  double MaxAbs() const;

  // Row-major dense copy of the full symmetric matrix.
  std::vector<double> ToDense() const;

  bool SamePattern(const SparseSymmetric &other) const;

private:
  Index n_ = 0;
  std::vector<Index> col_ptr_{0};
  std::vector<Index> row_idx_;
  std::vector<double> values_;
  std::uint64_t pattern_id_ = 0;

  void ComputePatternId();
};

// A - sigma * B on the union of both patterns. The result's pattern id does not depend on
// sigma.
SparseSymmetric ShiftedCombine(const SparseSymmetric &A, const SparseSymmetric &B,
                               double sigma);

// y = S x using both triangles.
void MatVec(const SparseSymmetric &S, std::span<const double> x, std::span<double> y);
std::vector<double> MatVec(const SparseSymmetric &S, std::span<const double> x);

}  // namespace kep

#endif  // KEP_SPARSE_HPP
