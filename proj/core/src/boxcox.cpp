#include "bcnorm/boxcox.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "bcnorm/golden.hpp"

namespace bcnorm {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool is_log_branch(double lambda) { return std::abs(lambda) < kLambdaZeroTol; }

void require_valid_shift(std::span<const double> x, double delta) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] - delta > 0.0)) {
      throw DomainError("x[" + std::to_string(i) + "] - delta = " +
                        std::to_string(x[i] - delta) + " is not positive");
    }
  }
}

void require_nonconstant(const Sample& x) {
  if (x.min() == x.max()) throw DegenerateError("sample is constant");
}

BoxCoxFit fit_lambda(std::span<const double> x, double delta) {
  const detail::ProfileLikelihood loglik(x, delta);
  const GoldenResult best = golden_section_search(loglik, kLambdaLo, kLambdaHi, kLambdaTol);
  BoxCoxFit fit;
  fit.model = BoxCoxModel::OneParam;
  fit.lambda = best.x;
  fit.delta = delta;
  fit.loglik = best.value;
  fit.lambda_at_bound =
      best.x - kLambdaLo <= kLambdaTol || kLambdaHi - best.x <= kLambdaTol;
  return fit;
}

}  // namespace

std::string_view to_string(BoxCoxModel model) noexcept {
  return model == BoxCoxModel::OneParam ? "1p" : "2p";
}

Sample boxcox_transform(const Sample& x, double lambda, double delta) {
  require_valid_shift(x.values(), delta);
  std::vector<double> y(x.size());
  if (is_log_branch(lambda)) {
    std::transform(x.begin(), x.end(), y.begin(),
                   [delta](double v) { return std::log(v - delta); });
  } else {
    std::transform(x.begin(), x.end(), y.begin(), [lambda, delta](double v) {
      return std::expm1(lambda * std::log(v - delta)) / lambda;
    });
  }
  return Sample(std::move(y));
}

Sample inverse_boxcox(const Sample& y, double lambda, double delta) {
  std::vector<double> x(y.size());
  if (is_log_branch(lambda)) {
    std::transform(y.begin(), y.end(), x.begin(),
                   [delta](double v) { return std::exp(v) + delta; });
    return Sample(std::move(x));
  }
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double base = lambda * y[i] + 1.0;
    if (!(base > 0.0)) {
      throw DomainError("lambda * y[" + std::to_string(i) + "] + 1 is not positive");
    }
    x[i] = std::exp(std::log1p(lambda * y[i]) / lambda) + delta;
  }
  return Sample(std::move(x));
}

double profile_loglik(const Sample& x, double lambda, double delta) {
  require_valid_shift(x.values(), delta);
  const double value = detail::ProfileLikelihood(x.values(), delta)(lambda);
  if (value == kNegInf) {
    throw DegenerateError("transformed values have zero variance");
  }
  return value;
}

BoxCoxFit fit_1p(const Sample& x) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0)) {
      throw DomainError("one-parameter Box-Cox needs positive data; x[" +
                        std::to_string(i) + "] = " + std::to_string(x[i]));
    }
  }
  require_nonconstant(x);
  return fit_lambda(x.values(), 0.0);
}

std::pair<double, double> shift_interval(const Sample& x, const TwoParamOptions& options) {
  require_nonconstant(x);
  if (!(options.span_lo > kDeltaSpanHi)) {
    throw std::invalid_argument("span_lo must exceed the minimum gap");
  }
  const double range = x.range();
  double gap = kDeltaSpanHi * range;
  if (options.guard_first_spacing) {
    double first = x.max();
    double second = x.max();
    for (double v : x) {
      if (v < first) {
        second = first;
        first = v;
      } else if (v < second && v != first) {
        second = v;
      }
    }
    gap = std::max(gap, second - first);
    // far from the bulk the guard would swallow the whole interval
    gap = std::min(gap, 0.5 * options.span_lo * range);
  }
  return {x.min() - options.span_lo * range, x.min() - gap};
}

BoxCoxFit fit_2p(const Sample& x, const TwoParamOptions& options) {
  const auto [lo, hi] = shift_interval(x, options);
  const double tol = kDeltaRelTol * x.range();

  auto profile = [&x](double delta) { return fit_lambda(x.values(), delta).loglik; };

  double a = lo;
  double b = hi;
  GoldenResult best{lo, kNegInf, 0};
  if (options.scan_points >= 2) {
    const int last = options.scan_points - 1;
    auto at = [&](int i) { return i == last ? hi : lo + (hi - lo) * i / last; };
    int k = 0;
    for (int i = 0; i <= last; ++i) {
      const double v = profile(at(i));
      if (v > best.value) {
        best = {at(i), v, 0};
        k = i;
      }
    }
    a = at(std::max(k - 1, 0));
    b = at(std::min(k + 1, last));
  }
  const GoldenResult refined = golden_section_search(profile, a, b, tol);
  const double delta = refined.value >= best.value ? refined.x : best.x;

  BoxCoxFit fit = fit_lambda(x.values(), delta);
  fit.delta_at_bound = delta - lo <= tol || hi - delta <= tol;
  // The unshifted fit belongs to the family; keep it if the search missed it.
  if (lo <= 0.0 && 0.0 <= hi) {
    BoxCoxFit unshifted = fit_lambda(x.values(), 0.0);
    if (unshifted.loglik > fit.loglik) {
      fit = unshifted;
      fit.delta_at_bound = false;
    }
  }
  fit.model = BoxCoxModel::TwoParam;
  return fit;
}

namespace detail {

ProfileLikelihood::ProfileLikelihood(std::span<const double> x, double delta)
    : centred_logs_(x.size()) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    centred_logs_[i] = std::log(x[i] - delta);
    sum_logs_ += centred_logs_[i];
  }
  const double mean = sum_logs_ / static_cast<double>(x.size());
  for (double& w : centred_logs_) w -= mean;
}

double ProfileLikelihood::operator()(double lambda) const {
  // On centred logs w, y = g^lambda * expm1(lambda * w) / lambda + const with
  // g the geometric mean, which turns the Jacobian term into -sum(log(x - delta)).
  // z stays near w, so the plain moment sums do not cancel badly.
  double sum = 0.0;
  double sum_sq = 0.0;
  if (is_log_branch(lambda)) {
    for (double w : centred_logs_) sum_sq += w * w;
  } else {
    const double inv = 1.0 / lambda;
    for (double w : centred_logs_) {
      const double z = std::expm1(lambda * w) * inv;
      sum += z;
      sum_sq += z * z;
    }
  }
  const double n = static_cast<double>(centred_logs_.size());
  const double mean = sum / n;
  const double variance = sum_sq / n - mean * mean;
  if (!(variance > 0.0) || !std::isfinite(variance)) return kNegInf;
  return -0.5 * n * std::log(variance) - sum_logs_;
}

}  // namespace detail
}  // namespace bcnorm
