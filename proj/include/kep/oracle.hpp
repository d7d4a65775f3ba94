// SPDX-License-Identifier: Apache-2.0

#ifndef KEP_ORACLE_HPP
#define KEP_ORACLE_HPP

#include <span>
#include <vector>
#include "kep/sparse.hpp"

namespace kep
{

//
// Dense reference solver for A x = lambda B x. Shares no code with the sparse path: Cholesky
// reduction to L^{-1} A L^{-T}, Householder tridiagonalization, implicit QR with Wilkinson
// shifts, back-transformation.
//
struct DenseSpectrum
{
  Index n = 0;
  std::vector<double> eigenvalues;  // ascending
  // Column-major n x n, B-orthonormal columns.
  std::vector<double> vectors;

  std::span<const double> Vector(Index i) const
  {
    return std::span<const double>(vectors).subspan(static_cast<std::size_t>(i * n),
                                                     static_cast<std::size_t>(n));
  }
};

inline constexpr Index kDenseOracleCap = 2048;

// A and B are dense row-major n x n (only symmetric input is meaningful). Throws
// NotPositiveDefinite when the Cholesky factorization of B fails.
DenseSpectrum DenseGeneralizedEigen(std::span<const double> A, std::span<const double> B, Index n,
                                    bool want_vectors = true, Index cap = kDenseOracleCap);
DenseSpectrum DenseGeneralizedEigen(const SparseSymmetric &A, const SparseSymmetric &B,
                                    bool want_vectors = true, Index cap = kDenseOracleCap);

// Eigenvalues of the pencil strictly below sigma.
Index DenseInertia(const SparseSymmetric &A, const SparseSymmetric &B, double sigma);
Index CountBelow(const DenseSpectrum &spectrum, double sigma);

}  // namespace kep

#endif  // KEP_ORACLE_HPP
