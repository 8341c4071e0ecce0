#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace bcnorm {

struct GoldenResult {
  double x = 0.0;      ///< best evaluated abscissa
  double value = 0.0;  ///< f(x)
  int evaluations = 0;
};

/// Golden-section search for the maximum of a unimodal f on [lo, hi].
///
/// Terminates once the bracket is no wider than tol and returns the best
/// interior point evaluated, so |x - argmax| <= tol for unimodal f. Uses at
/// most ceil(log((hi - lo) / tol) / log(1 / 0.618)) + 2 evaluations. NaN
/// values of f are ranked below every finite value.
template <typename F>
GoldenResult golden_section_search(F&& f, double lo, double hi, double tol) {
  if (!(lo < hi) || !(tol > 0.0) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw std::invalid_argument("golden_section_search: need finite lo < hi and tol > 0");
  }
  constexpr double kInvPhi = 0.61803398874989484820;  // (sqrt(5) - 1) / 2
  auto eval = [&f](double x) {
    double v = f(x);
    return std::isnan(v) ? -std::numeric_limits<double>::infinity() : v;
  };

  double a = lo;
  double b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = eval(c);
  double fd = eval(d);
  int evals = 2;

  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = eval(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = eval(d);
    }
    ++evals;
  }
  return fc >= fd ? GoldenResult{c, fc, evals} : GoldenResult{d, fd, evals};
}

/// Returns only the maximizer; see golden_section_search.
template <typename F>
double golden_section_maximize(F&& f, double lo, double hi, double tol) {
  return golden_section_search(f, lo, hi, tol).x;
}

}  // namespace bcnorm
