// SPDX-License-Identifier: Apache-2.0

#ifndef KEP_LDL_HPP
#define KEP_LDL_HPP

#include <span>
#include <vector>
#include "kep/sparse.hpp"
#include "kep/symbolic.hpp"

namespace kep
{

struct Inertia
{
  Index negative = 0;
  Index zero = 0;
  Index positive = 0;

  bool operator==(const Inertia &) const = default;
};

struct LdlOptions
{
  // Bunch-Kaufman 1x1/2x2 pivoting. When disabled every pivot is the diagonal entry in
  // fill-reducing order and the factor structure equals the symbolic prediction.
  bool pivoting = true;
  // Pivots with magnitude at or below breakdown_factor * max|S_ij| raise ExactSingularity.
  double breakdown_factor = 1e-14;
};

//
// P Q S Q^T P^T = L D L^T with L unit lower triangular and D block diagonal with 1x1 and
// 2x2 blocks. Positions below refer to the final elimination order: position t holds
// original index Order()[t].
//
class LdlFactorization
{
public:
  Index Size() const { return n_; }
  const Inertia &GetInertia() const { return inertia_; }

  // Fill-reducing ordering Q (original indices) and the pivoting permutation P (positions
  // in Q order), so that Order()[t] == Q[P[t]].
  const Permutation &FillOrdering() const { return fill_; }
  const Permutation &PivotPermutation() const { return pivot_; }
  std::span<const Index> Order() const { return order_; }

  // Strictly-lower entries of L by column (final positions, sorted rows).
  std::span<const Index> LColPtr() const { return l_col_ptr_; }
  std::span<const Index> LRowIdx() const { return l_row_idx_; }
  std::span<const double> LValues() const { return l_values_; }

  // block_size[t] is 1 or 2 at the first position of a block and 0 at the second position
  // of a 2x2 block. d_diag[t] is D(t, t); d_offdiag[t] is D(t + 1, t) for 2x2 blocks.
  std::span<const int> BlockSize() const { return block_size_; }
  std::span<const double> DDiag() const { return d_diag_; }
  std::span<const double> DOffDiag() const { return d_offdiag_; }
  Index NumTwoByTwo() const { return num_two_by_two_; }

  // Nonzeros stored in L (strict lower part) and D (lower part of each block).
  std::size_t NumFactorNonzeros() const;

  // Solves S x = rhs.
  std::vector<double> Solve(std::span<const double> rhs) const;
  void Solve(std::span<const double> rhs, std::span<double> x) const;

private:
  friend LdlFactorization NumericFactorize(const SparseSymmetric &, const SymbolicFactorization &,
                                           const LdlOptions &);

  Index n_ = 0;
  Inertia inertia_;
  Permutation fill_;
  Permutation pivot_;
  std::vector<Index> order_;
  std::vector<Index> l_col_ptr_;
  std::vector<Index> l_row_idx_;
  std::vector<double> l_values_;
  std::vector<int> block_size_;
  std::vector<double> d_diag_;
  std::vector<double> d_offdiag_;
  Index num_two_by_two_ = 0;
};

// Factorizes a matrix whose pattern matches the symbolic factorization. Throws
// PatternMismatch on a foreign pattern and ExactSingularity on a pivot breakdown.
LdlFactorization NumericFactorize(const SparseSymmetric &shifted,
                                  const SymbolicFactorization &symbolic,
                                  const LdlOptions &options = {});

// Number of eigenvalues of the pencil (A, B) strictly below sigma, read off the negative
// pivots of A - sigma B. The symbolic factorization must belong to the union pattern.
Index InertiaBelow(const SparseSymmetric &A, const SparseSymmetric &B, double sigma,
                   const SymbolicFactorization &symbolic);

// Factorizes A - sigma B for varying sigma while recycling one symbolic factorization.
// Keeps references to its arguments, which must outlive it.
class ShiftedPencil
{
public:
  ShiftedPencil(const SparseSymmetric &A, const SparseSymmetric &B,
                const SymbolicFactorization &symbolic, LdlOptions options = {});

  LdlFactorization Factorize(double sigma);
  Index CountBelow(double sigma) { return Factorize(sigma).GetInertia().negative; }

  const SparseSymmetric &MatrixA() const { return A_; }
  const SparseSymmetric &MatrixB() const { return B_; }
  const SymbolicFactorization &Symbolic() const { return symbolic_; }

  // Completed numeric factorizations (failed ones are not counted).
  std::size_t Factorizations() const { return factorizations_; }
  std::size_t FailedFactorizations() const { return failures_; }
  std::size_t TotalFactorNonzeros() const { return total_nzf_; }
  // Wall time spent in Factorize, failed attempts included.
  double FactorizationSeconds() const { return seconds_; }

private:
  const SparseSymmetric &A_;
  const SparseSymmetric &B_;
  const SymbolicFactorization &symbolic_;
  LdlOptions options_;
  std::size_t factorizations_ = 0;
  std::size_t failures_ = 0;
  std::size_t total_nzf_ = 0;
  double seconds_ = 0.0;
};

}  // namespace kep

#endif  // KEP_LDL_HPP
