#pragma once

#include <stdexcept>
#include <string>

namespace bcnorm {

/// Input outside the mathematical domain of an operation (e.g. x - delta <= 0).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Data that carries no spread: constant samples, zero variance after transform.
class DegenerateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sample size outside the range an algorithm supports.
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Malformed files, unparsable numbers, missing columns.
class InputError : public std::runtime_error {
 public:
  InputError(const std::string& what, std::size_t row = 0)
      : std::runtime_error(what), row_(row) {}

  /// 1-based row of the offending line, 0 when not tied to a row.
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

}  // namespace bcnorm
