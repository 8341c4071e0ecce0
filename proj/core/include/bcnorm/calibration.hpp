#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bcnorm/boxcox.hpp"
#include "bcnorm/normality.hpp"

namespace bcnorm {

/// Linear-in-log(n) models of the resubstitution Z-score mean (A + B log n)
/// and standard deviation (C + D log n) for one (test, model) cell.
struct CalibrationCoefficients {
  NormalityTest test = NormalityTest::SW;
  BoxCoxModel model = BoxCoxModel::OneParam;
  double A = 0.0;
  double B = 0.0;
  double C = 1.0;
  double D = 0.0;
  int n_min = 30;
  int n_max = 2000;

  bool covers(std::size_t n) const noexcept {
    return static_cast<long long>(n) >= n_min && static_cast<long long>(n) <= n_max;
  }
};

/// A = B = D = 0, C = 1, valid for every n: calibrate_p is then the identity.
CalibrationCoefficients identity_coefficients(NormalityTest test, BoxCoxModel model);

/// Published regression coefficients, valid for 30 <= n <= 2000.
CalibrationCoefficients builtin_coefficients(NormalityTest test, BoxCoxModel model);

/// One coefficient set per (test, model) cell.
class CoefficientSet {
 public:
  static CoefficientSet builtin();
  static CoefficientSet identity();

  const CalibrationCoefficients& get(NormalityTest test, BoxCoxModel model) const;
  void set(const CalibrationCoefficients& coeffs);

  /// Plain-text key = value blocks, one per cell.
  void write(std::ostream& out) const;
  /// Throws InputError with a 1-based line number on malformed input or a
  /// missing cell.
  static CoefficientSet read(std::istream& in);
  static CoefficientSet load(const std::string& path);

 private:
  static std::size_t index(NormalityTest test, BoxCoxModel model) noexcept;
  std::array<CalibrationCoefficients, 4> cells_{};
};

struct MeanSd {
  double mean = 0.0;
  double sd = 1.0;
};

/// (A + B ln n, C + D ln n). Throws std::invalid_argument for n < 3 and
/// DomainError when the modelled sd is not positive.
MeanSd predicted_mean_sd(const CalibrationCoefficients& coeffs, std::size_t n);

/// Q = Phi((Phi^-1(P) - mean(n)) / sd(n)), P clamped as in p_to_z.
double calibrate_p(double p_raw, std::size_t n, const CalibrationCoefficients& coeffs);

struct CalibrationRow {
  std::size_t n = 0;
  double mean_z = 0.0;
  double sd_z = 1.0;
};

/// Rows of Z-score mean and sd for one (test, model) cell, n strictly increasing.
struct CalibrationTable {
  NormalityTest test = NormalityTest::SW;
  BoxCoxModel model = BoxCoxModel::OneParam;
  std::vector<CalibrationRow> rows;
};

/// Ordinary least squares of y on log(n).
struct RegressionFit {
  double intercept = 0.0;
  double slope = 0.0;
  double intercept_se = 0.0;
  double slope_se = 0.0;
  double intercept_t = 0.0;
  double slope_t = 0.0;
  double intercept_p = 0.0;  ///< two-sided, t with rows - 2 df
  double slope_p = 0.0;
  double r_squared = 0.0;
  double residual_sd = 0.0;  ///< sqrt(RSS / (rows - 2))
  std::size_t rows = 0;
};

/// Throws InputError when fewer than two distinct n are supplied.
RegressionFit regress_on_log_n(const std::vector<std::size_t>& n, const std::vector<double>& y);

struct CalibrationFit {
  CalibrationCoefficients coeffs;
  RegressionFit mean_fit;
  RegressionFit sd_fit;
};

/// Refits (A, B) and (C, D) from a table of at least three rows; the
/// validity range is the table's n range.
CalibrationFit fit_calibration(const CalibrationTable& table);

/// One regression block: a title line, the Term / coeff / std_err / t_value /
/// P_value table for the intercept and log(ns), then R_sqd and Res_sd.
void print_regression_block(std::ostream& out, const std::string& title,
                            const RegressionFit& fit);

/// "Regression fit <TEST> <model> mean" and "... sd" blocks for one cell.
void print_regression_report(std::ostream& out, const CalibrationFit& fit);

}  // namespace bcnorm
