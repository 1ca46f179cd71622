#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qbdesign {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  enum class Kind { NonBinaryEntry, RaggedRows, Empty, BadToken };

  ParseError(Kind kind, std::size_t row, std::size_t col, const std::string& what)
      : Error(what), kind_(kind), row_(row), col_(col) {}

  Kind kind() const { return kind_; }
  // 1-based data row and column; 0 when not applicable.
  std::size_t row() const { return row_; }
  std::size_t col() const { return col_; }

 private:
  Kind kind_;
  std::size_t row_;
  std::size_t col_;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class BadSubset : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class TooLarge : public Error {
 public:
  using Error::Error;
};

/// N is not congruent to 2 modulo 4.
class BadCongruence : public Error {
 public:
  using Error::Error;
};

class UnknownFixture : public Error {
 public:
  using Error::Error;
};

/// An information-matrix listing whose redundant entries disagree.
class InconsistentInfo : public Error {
 public:
  using Error::Error;
};

}  // namespace qbdesign
