#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "bcnorm/bcnorm.hpp"

namespace testing {

inline bcnorm::Sample lognormal_sample(std::uint64_t seed, std::size_t n, double log_sd = 0.3,
                                       double offset = 0.0) {
  bcnorm::ReplicateStream stream(seed, n, 0);
  std::vector<double> x(n);
  for (double& v : x) v = offset + std::exp(log_sd * stream.normal());
  return bcnorm::Sample(std::move(x));
}

inline bcnorm::Sample normal_sample(std::uint64_t seed, std::size_t n, std::uint64_t rep = 0) {
  bcnorm::ReplicateStream stream(seed, n, rep);
  std::vector<double> x(n);
  for (double& v : x) v = stream.normal();
  return bcnorm::Sample(std::move(x));
}

// Box-Cox profile log-likelihood straight from the definition: pow, a
// two-pass variance and the explicit Jacobian term. The -1/lambda offset is
// dropped since it cannot change the variance and cancels badly when
// u^lambda is tiny.
inline double oracle_loglik(const bcnorm::Sample& x, double lambda, double delta) {
  const std::size_t n = x.size();
  std::vector<long double> y(n);
  long double jac = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    const long double u = static_cast<long double>(x[i]) - delta;
    jac += std::log(u);
    y[i] = lambda == 0.0 ? std::log(u) : std::pow(u, static_cast<long double>(lambda)) / lambda;
  }
  long double mean = 0.0L;
  for (long double v : y) mean += v;
  mean /= n;
  long double ss = 0.0L;
  for (long double v : y) ss += (v - mean) * (v - mean);
  const long double var = ss / n;
  return static_cast<double>(-0.5L * n * std::log(var) + (lambda - 1.0L) * jac);
}

struct GridMax {
  double lambda = 0.0;
  double delta = 0.0;
  double loglik = -INFINITY;
};

// Same formula in double with the logs cached, for dense lambda grids.
inline GridMax lambda_grid(const bcnorm::Sample& x, double delta, double step = 1e-4) {
  const std::size_t n = x.size();
  std::vector<double> logs(n);
  double jac = 0.0;
  for (std::size_t i = 0; i < n; ++i) jac += logs[i] = std::log(x[i] - delta);
  std::vector<double> y(n);
  GridMax best;
  const int steps = static_cast<int>(std::lround(10.0 / step));
  for (int k = 0; k <= steps; ++k) {
    const double lambda = -5.0 + k * step;
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = lambda == 0.0 ? logs[i] : std::exp(lambda * logs[i]) / lambda;
      mean += y[i];
    }
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : y) ss += (v - mean) * (v - mean);
    const double value = -0.5 * n * std::log(ss / n) + (lambda - 1.0) * jac;
    if (value > best.loglik) best = {lambda, delta, value};
  }
  return best;
}

// 50 x 50 grid over lambda in [-5, 5] and the fit_2p shift interval
inline GridMax grid_2d(const bcnorm::Sample& x, int points = 50) {
  const auto [lo, hi] = bcnorm::shift_interval(x);
  GridMax best;
  for (int i = 0; i < points; ++i) {
    const double delta = lo + (hi - lo) * i / (points - 1);
    for (int j = 0; j < points; ++j) {
      const double lambda = -5.0 + 10.0 * j / (points - 1);
      const double v = oracle_loglik(x, lambda, delta);
      if (v > best.loglik) best = {lambda, delta, v};
    }
  }
  return best;
}

// Kolmogorov-Smirnov distance of values from U(0, 1)
inline double ks_uniform(std::vector<double> p) {
  std::sort(p.begin(), p.end());
  const double n = static_cast<double>(p.size());
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    d = std::max(d, (i + 1) / n - p[i]);
    d = std::max(d, p[i] - i / n);
  }
  return d;
}

// asymptotic KS critical value, level 0.01
inline double ks_critical_01(std::size_t n) { return 1.628 / std::sqrt(static_cast<double>(n)); }

}  // namespace testing
