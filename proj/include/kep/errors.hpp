// SPDX-License-Identifier: Apache-2.0

#ifndef KEP_ERRORS_HPP
#define KEP_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kep
{

// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error
{
public:
  using Error::Error;
};

// Matrix Market ingestion failures. The kind distinguishes the diagnostics.
class ParseError : public Error
{
public:
  enum class Kind
  {
    MalformedHeader,
    UnsupportedField,
    NonSquare,
    IndexOutOfRange,
    MalformedEntry,
    NotSymmetric
  };

  ParseError(Kind kind, const std::string &what) : Error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

private:
  Kind kind_;
};

// A pivot fell below the breakdown threshold: the shift numerically coincides with an
// eigenvalue of the pencil. Callers perturb the shift and refactorize.
class ExactSingularity : public Error
{
public:
  ExactSingularity(std::size_t column, double pivot)
    : Error("pivot " + std::to_string(pivot) + " at elimination step " +
            std::to_string(column) + " is below the breakdown threshold"),
      column_(column), pivot_(pivot)
  {
  }
  std::size_t column() const noexcept { return column_; }
  double pivot() const noexcept { return pivot_; }

private:
  std::size_t column_;
  double pivot_;
};

class SingularFactor : public Error
{
public:
  using Error::Error;
};

class NotPositiveDefinite : public Error
{
public:
  using Error::Error;
};

// Raised when a symbolic factorization is reused on a matrix with a different pattern.
class PatternMismatch : public Error
{
public:
  using Error::Error;
};

}  // namespace kep

#endif  // KEP_ERRORS_HPP
