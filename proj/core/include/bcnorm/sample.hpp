#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bcnorm/error.hpp"

namespace bcnorm {

/// An ordered batch of finite observations, n >= 3.
class Sample {
 public:
  static constexpr std::size_t kMinSize = 3;

  explicit Sample(std::vector<double> values) : values_(std::move(values)) {
    if (values_.size() < kMinSize) {
      throw SizeError("sample needs at least 3 values, got " +
                      std::to_string(values_.size()));
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (!std::isfinite(values_[i])) {
        throw DomainError("non-finite value at index " + std::to_string(i));
      }
    }
  }

  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }

  auto begin() const noexcept { return values_.begin(); }
  auto end() const noexcept { return values_.end(); }

  double min() const noexcept;
  double max() const noexcept;
  double range() const noexcept { return max() - min(); }

  /// Moves the storage out; the sample is left empty.
  std::vector<double> release() && { return std::move(values_); }

 private:
  std::vector<double> values_;
};

inline double Sample::min() const noexcept {
  double m = values_.front();
  for (double v : values_) m = v < m ? v : m;
  return m;
}

inline double Sample::max() const noexcept {
  double m = values_.front();
  for (double v : values_) m = v > m ? v : m;
  return m;
}

}  // namespace bcnorm
