#include "bcnorm/calibration.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include "bcnorm/error.hpp"
#include "bcnorm/normal.hpp"

namespace bcnorm {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double two_sided_t_pvalue(double t, std::size_t df) {
  if (df == 0 || !std::isfinite(t)) return kNaN;
  const boost::math::students_t dist(static_cast<double>(df));
  return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
}

}  // namespace

CalibrationCoefficients identity_coefficients(NormalityTest test, BoxCoxModel model) {
  CalibrationCoefficients c;
  c.test = test;
  c.model = model;
  c.A = 0.0;
  c.B = 0.0;
  c.C = 1.0;
  c.D = 0.0;
  c.n_min = 3;
  c.n_max = std::numeric_limits<int>::max();
  return c;
}

CalibrationCoefficients builtin_coefficients(NormalityTest test, BoxCoxModel model) {
  CalibrationCoefficients c;
  c.test = test;
  c.model = model;
  c.n_min = 30;
  c.n_max = 2000;
  const bool one = model == BoxCoxModel::OneParam;
  if (test == NormalityTest::SW) {
    if (one) {
      c.A = 0.7722, c.B = -0.04456, c.C = 0.9538, c.D = -0.006915;
    } else {
      c.A = 0.7993, c.B = 0.009221, c.C = 0.9671, c.D = -0.01396;
    }
  } else {
    if (one) {
      c.A = 0.559, c.B = -0.027, c.C = 0.9612, c.D = -4.271e-06;
    } else {
      c.A = 0.3666, c.B = 0.03092, c.C = 0.9069, c.D = 0.004663;
    }
  }
  return c;
}

std::size_t CoefficientSet::index(NormalityTest test, BoxCoxModel model) noexcept {
  return (test == NormalityTest::SW ? 0 : 2) + (model == BoxCoxModel::OneParam ? 0 : 1);
}

CoefficientSet CoefficientSet::builtin() {
  CoefficientSet set;
  for (auto t : {NormalityTest::SW, NormalityTest::AD}) {
    for (auto m : {BoxCoxModel::OneParam, BoxCoxModel::TwoParam}) {
      set.set(builtin_coefficients(t, m));
    }
  }
  return set;
}

CoefficientSet CoefficientSet::identity() {
  CoefficientSet set;
  for (auto t : {NormalityTest::SW, NormalityTest::AD}) {
    for (auto m : {BoxCoxModel::OneParam, BoxCoxModel::TwoParam}) {
      set.set(identity_coefficients(t, m));
    }
  }
  return set;
}

const CalibrationCoefficients& CoefficientSet::get(NormalityTest test, BoxCoxModel model) const {
  return cells_[index(test, model)];
}

void CoefficientSet::set(const CalibrationCoefficients& coeffs) {
  cells_[index(coeffs.test, coeffs.model)] = coeffs;
}

MeanSd predicted_mean_sd(const CalibrationCoefficients& coeffs, std::size_t n) {
  if (n < 3) throw std::invalid_argument("predicted_mean_sd: n must be at least 3");
  const double ln = std::log(static_cast<double>(n));
  MeanSd out{coeffs.A + coeffs.B * ln, coeffs.C + coeffs.D * ln};
  if (!(out.sd > 0.0) || !std::isfinite(out.mean)) {
    throw DomainError("calibration coefficients give non-positive sd at n = " +
                      std::to_string(n));
  }
  return out;
}

double calibrate_p(double p_raw, std::size_t n, const CalibrationCoefficients& coeffs) {
  const MeanSd model = predicted_mean_sd(coeffs, n);
  return normal_cdf((p_to_z(p_raw) - model.mean) / model.sd);
}

RegressionFit regress_on_log_n(const std::vector<std::size_t>& n, const std::vector<double>& y) {
  if (n.size() != y.size()) throw std::invalid_argument("regress_on_log_n: size mismatch");
  const std::size_t rows = n.size();
  if (rows < 2) throw InputError("regression needs at least two rows");

  std::vector<double> x(rows);
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    x[i] = std::log(static_cast<double>(n[i]));
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(rows);
  my /= static_cast<double>(rows);
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw InputError("regression is singular: all n are equal");

  RegressionFit fit;
  fit.rows = rows;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    const double r = y[i] - fit.intercept - fit.slope * x[i];
    rss += r * r;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - rss / syy : 1.0;
  const std::size_t df = rows - 2;
  if (df > 0) {
    const double s2 = rss / static_cast<double>(df);
    fit.residual_sd = std::sqrt(s2);
    fit.slope_se = std::sqrt(s2 / sxx);
    double sum_x2 = 0.0;
    for (double xi : x) sum_x2 += xi * xi;
    fit.intercept_se = std::sqrt(s2 * sum_x2 / (static_cast<double>(rows) * sxx));
    fit.slope_t = fit.slope / fit.slope_se;
    fit.intercept_t = fit.intercept / fit.intercept_se;
    fit.slope_p = two_sided_t_pvalue(fit.slope_t, df);
    fit.intercept_p = two_sided_t_pvalue(fit.intercept_t, df);
  } else {
    fit.residual_sd = fit.slope_se = fit.intercept_se = kNaN;
    fit.slope_t = fit.intercept_t = fit.slope_p = fit.intercept_p = kNaN;
  }
  return fit;
}

CalibrationFit fit_calibration(const CalibrationTable& table) {
  if (table.rows.size() < 3) throw InputError("fit_calibration needs at least three rows");
  std::vector<std::size_t> n;
  std::vector<double> mean;
  std::vector<double> sd;
  for (const CalibrationRow& row : table.rows) {
    n.push_back(row.n);
    mean.push_back(row.mean_z);
    sd.push_back(row.sd_z);
  }
  CalibrationFit out;
  out.mean_fit = regress_on_log_n(n, mean);
  out.sd_fit = regress_on_log_n(n, sd);
  out.coeffs.test = table.test;
  out.coeffs.model = table.model;
  out.coeffs.A = out.mean_fit.intercept;
  out.coeffs.B = out.mean_fit.slope;
  out.coeffs.C = out.sd_fit.intercept;
  out.coeffs.D = out.sd_fit.slope;
  auto [lo, hi] = std::minmax_element(n.begin(), n.end());
  out.coeffs.n_min = static_cast<int>(*lo);
  out.coeffs.n_max = static_cast<int>(*hi);
  return out;
}

void print_regression_block(std::ostream& out, const std::string& title,
                            const RegressionFit& fit) {
  char line[160];
  out << "Regression fit " << title << '\n';
  out << "Term\tcoeff\tstd_err\tt_value\tP_value\n";
  std::snprintf(line, sizeof line, "(Intercept)\t%.4g\t%.4g\t%.3f\t%.4g\n", fit.intercept,
                fit.intercept_se, fit.intercept_t, fit.intercept_p);
  out << line;
  std::snprintf(line, sizeof line, "log(ns)\t%.4g\t%.4g\t%.3f\t%.4g\n", fit.slope,
                fit.slope_se, fit.slope_t, fit.slope_p);
  out << line;
  std::snprintf(line, sizeof line, "R_sqd\t%.4f\tRes_sd\t%.4f\n", fit.r_squared,
                fit.residual_sd);
  out << line;
}

void print_regression_report(std::ostream& out, const CalibrationFit& fit) {
  const std::string cell =
      std::string(to_string(fit.coeffs.test)) + " " + std::string(to_string(fit.coeffs.model));
  print_regression_block(out, cell + " mean", fit.mean_fit);
  print_regression_block(out, cell + " sd", fit.sd_fit);
}

}  // namespace bcnorm
