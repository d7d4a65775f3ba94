// SPDX-License-Identifier: Apache-2.0

#ifndef KEP_MATRIX_MARKET_HPP
#define KEP_MATRIX_MARKET_HPP

#include <filesystem>
#include <istream>
#include <ostream>
#include "kep/sparse.hpp"

namespace kep
{

// Reads a Matrix Market "coordinate" file with a real or integer field and symmetric or
// general symmetry. General files must describe a symmetric entry set. Duplicate
// coordinates are summed. Throws ParseError with a kind per failure class.
SparseSymmetric ReadMatrixMarket(std::istream &in);
SparseSymmetric ReadMatrixMarket(const std::filesystem::path &path);

// Writes the lower triangle as "coordinate real symmetric" with round-trip precision.
void WriteMatrixMarket(std::ostream &out, const SparseSymmetric &S);

}  // namespace kep

#endif  // KEP_MATRIX_MARKET_HPP
