#pragma once

#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "bcnorm/sample.hpp"

namespace bcnorm {

enum class BoxCoxModel { OneParam, TwoParam };

std::string_view to_string(BoxCoxModel model) noexcept;  // "1p" / "2p"

struct BoxCoxFit {
  BoxCoxModel model = BoxCoxModel::OneParam;
  double lambda = 1.0;
  double delta = 0.0;   ///< always 0 for OneParam
  double loglik = 0.0;  ///< profile log-likelihood at (lambda, delta)
  bool lambda_at_bound = false;
  bool delta_at_bound = false;  ///< TwoParam only
};

/// Powers with |lambda| below this are evaluated on the log branch.
inline constexpr double kLambdaZeroTol = 1e-10;

inline constexpr double kLambdaLo = -5.0;
inline constexpr double kLambdaHi = 5.0;
inline constexpr double kLambdaTol = 1e-5;

/// Shift search interval, as multiples of the sample range below min(x).
inline constexpr double kDeltaSpanLo = 3.0;
inline constexpr double kDeltaSpanHi = 1e-6;
inline constexpr double kDeltaRelTol = 1e-5;

/// y = ((x - delta)^lambda - 1) / lambda, or log(x - delta) at lambda = 0.
/// Throws DomainError when some x - delta <= 0.
Sample boxcox_transform(const Sample& x, double lambda, double delta);

/// Exact inverse of boxcox_transform. Throws DomainError when
/// lambda * y + 1 <= 0 for some y.
Sample inverse_boxcox(const Sample& y, double lambda, double delta);

/// Profile log-likelihood of (lambda, delta) with the normal mean and
/// variance at their ML values:
///   -(n/2) log(sigma2) + (lambda - 1) * sum(log(x - delta)),
/// sigma2 being the divide-by-n variance of the transformed values.
/// Throws DomainError for an invalid shift and DegenerateError when the
/// transformed values have zero variance.
double profile_loglik(const Sample& x, double lambda, double delta);

/// Maximum likelihood one-parameter fit, lambda in [-5, 5].
/// Throws DomainError if any x <= 0, DegenerateError for constant x.
BoxCoxFit fit_1p(const Sample& x);

/// Shift search interval for fit_2p. The profile likelihood is unbounded as
/// delta approaches min(x), so by default the upper end stops one first
/// spacing short of it: hi = x(1) - max(x(2) - x(1), kDeltaSpanHi * range).
/// With guard_first_spacing off, hi = x(1) - kDeltaSpanHi * range.
///
/// The profile over delta is often not unimodal (it tends to climb again
/// near hi), so the shift is first scanned at scan_points equally spaced
/// values and golden section then refines between the neighbours of the
/// best one. scan_points < 2 runs golden section over [lo, hi] directly.
struct TwoParamOptions {
  double span_lo = kDeltaSpanLo;  ///< lo = x(1) - span_lo * range
  bool guard_first_spacing = true;
  int scan_points = 50;
};

/// Two-parameter fit: golden section over the shift, inner fit_1p on x - delta.
/// Throws DegenerateError for constant x.
BoxCoxFit fit_2p(const Sample& x, const TwoParamOptions& options = {});

/// [lo, hi] searched by fit_2p.
std::pair<double, double> shift_interval(const Sample& x, const TwoParamOptions& options = {});

namespace detail {

/// Profile likelihood evaluator for one fixed shift. Caches centred
/// log(x - delta) so each lambda costs one expm1 per observation and never
/// overflows for |lambda * (log(x - delta) - mean)| < 709. Returns -inf where
/// the transformed variance is zero or not finite.
class ProfileLikelihood {
 public:
  ProfileLikelihood(std::span<const double> x, double delta);

  double operator()(double lambda) const;

 private:
  std::vector<double> centred_logs_;  // log(x - delta) - mean
  double sum_logs_ = 0.0;
};

}  // namespace detail
}  // namespace bcnorm
