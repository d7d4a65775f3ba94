// SPDX-License-Identifier: Apache-2.0

#ifndef KEP_TRIDIAG_HPP
#define KEP_TRIDIAG_HPP

#include <span>
#include <vector>
#include "kep/sparse.hpp"

namespace kep
{

// Eigen-decomposition of a symmetric tridiagonal matrix, eigenvalues ascending.
struct RitzSpectrum
{
  Index j = 0;
  std::vector<double> theta;
  // Column-major j x j; column i is the unit 2-norm eigenvector of theta[i].
  std::vector<double> vectors;

  std::span<const double> Vector(Index i) const
  {
    return std::span<const double>(vectors).subspan(static_cast<std::size_t>(i * j),
                                                     static_cast<std::size_t>(j));
  }
  // e_j^T y_i, the last component of eigenvector i.
  double LastComponent(Index i) const { return vectors[static_cast<std::size_t>(i * j + j - 1)]; }
};

// Implicit QL with Wilkinson-type shifts. alphas has length j, betas at least j - 1 (extra
// entries are ignored).
RitzSpectrum TridiagEigen(std::span<const double> alphas, std::span<const double> betas,
                          bool want_vectors = true);

}  // namespace kep

#endif  // KEP_TRIDIAG_HPP
