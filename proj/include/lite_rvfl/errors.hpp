#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lite_rvfl {

// Bad shapes, out-of-range parameters, malformed requests.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A factorization or rank-1 update produced something that cannot be an SPD
// system. `rows` is the number of samples absorbed when it happened.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, std::size_t rows)
      : std::runtime_error(what), rows_(rows) {}
  std::size_t rows() const noexcept { return rows_; }

 private:
  std::size_t rows_;
};

// Direct-mode exponential weights left double range. Switch to rescaled mode.
class OverflowError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t row)
      : std::runtime_error(what), row_(row) {}
  // 1-based line number in the source file, 0 when not tied to a line.
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

}  // namespace lite_rvfl
