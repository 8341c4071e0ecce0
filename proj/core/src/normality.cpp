#include "bcnorm/normality.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <string>

#include "bcnorm/normal.hpp"
#include "ad_distribution.hpp"

namespace bcnorm {
namespace {

double poly(std::span<const double> c, double x) {
  double result = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) result = result * x + *it;
  return result;
}

TestResult make_result(NormalityTest test, double statistic, double p) {
  TestResult r;
  r.test = test;
  r.statistic = statistic;
  r.p_raw = std::clamp(p, kPFloor, 1.0 - kPFloor);
  r.z = normal_quantile(r.p_raw);
  return r;
}

std::vector<double> sorted_copy(const Sample& x) {
  std::vector<double> v(x.begin(), x.end());
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

std::string_view to_string(NormalityTest test) noexcept {
  return test == NormalityTest::SW ? "SW" : "AD";
}

ShapiroWilkWeights ShapiroWilkWeights::compute(std::size_t n) {
  if (n < kShapiroWilkMinN || n > kShapiroWilkMaxN) {
    throw SizeError("Shapiro-Wilk needs 3 <= n <= 5000, got " + std::to_string(n));
  }
  static constexpr double c1[] = {0.0, 0.221157, -0.147981, -2.07119, 4.434685, -2.706056};
  static constexpr double c2[] = {0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};

  const std::size_t half = n / 2;
  std::vector<double> a(half);  // a[0] pairs with the largest order statistic
  const double an = static_cast<double>(n);
  if (n == 3) {
    a[0] = std::sqrt(0.5);
  } else {
    // AS R94 uses m_i = Phi^-1((i - 3/8) / (n + 1/4)); store the upper half.
    double summ2 = 0.0;
    for (std::size_t i = 0; i < half; ++i) {
      a[i] = -normal_quantile((static_cast<double>(i + 1) - 0.375) / (an + 0.25));
      summ2 += a[i] * a[i];
    }
    summ2 *= 2.0;
    const double ssumm2 = std::sqrt(summ2);
    const double rsn = 1.0 / std::sqrt(an);
    const double a1 = poly(c1, rsn) + a[0] / ssumm2;
    std::size_t first_scaled;
    double fac;
    if (n > 5) {
      const double a2 = poly(c2, rsn) + a[1] / ssumm2;
      fac = std::sqrt((summ2 - 2.0 * a[0] * a[0] - 2.0 * a[1] * a[1]) /
                      (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
      a[1] = a2;
      first_scaled = 2;
    } else {
      fac = std::sqrt((summ2 - 2.0 * a[0] * a[0]) / (1.0 - 2.0 * a1 * a1));
      first_scaled = 1;
    }
    a[0] = a1;
    for (std::size_t i = first_scaled; i < half; ++i) a[i] /= fac;
  }

  ShapiroWilkWeights w;
  w.n = n;
  w.coeffs.assign(n, 0.0);
  for (std::size_t i = 0; i < half; ++i) {
    w.coeffs[n - 1 - i] = a[i];
    w.coeffs[i] = -a[i];
  }
  for (double c : w.coeffs) w.sum_sq += c * c;
  return w;
}

std::shared_ptr<const ShapiroWilkWeights> shapiro_wilk_weights(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, std::shared_ptr<const ShapiroWilkWeights>> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(n); it != cache.end()) return it->second;
  }
  auto weights = std::make_shared<const ShapiroWilkWeights>(ShapiroWilkWeights::compute(n));
  std::lock_guard lock(mutex);
  return cache.emplace(n, std::move(weights)).first->second;
}

double shapiro_wilk_pvalue(double w, std::size_t n) {
  static constexpr double g[] = {-2.273, 0.459};
  static constexpr double c3[] = {0.544, -0.39978, 0.025054, -6.714e-4};
  static constexpr double c4[] = {1.3822, -0.77857, 0.062767, -0.0020322};
  static constexpr double c5[] = {-1.5861, -0.31082, -0.083751, 0.0038915};
  static constexpr double c6[] = {-0.4803, -0.082676, 0.0030302};

  if (n == 3) {
    constexpr double pi6 = 1.90985931710274;   // 6 / pi
    constexpr double stqr = 1.04719755119660;  // pi / 3
    return std::clamp(pi6 * (std::asin(std::sqrt(std::min(w, 1.0))) - stqr), 0.0, 1.0);
  }
  const double w1 = 1.0 - w;
  if (!(w1 > 0.0)) return 1.0;
  double y = std::log(w1);
  const double an = static_cast<double>(n);
  double m;
  double s;
  if (n <= 11) {
    const double gamma = poly(g, an);
    if (y >= gamma) return 0.0;
    y = -std::log(gamma - y);
    m = poly(c3, an);
    s = std::exp(poly(c4, an));
  } else {
    const double ln = std::log(an);
    m = poly(c5, ln);
    s = std::exp(poly(c6, ln));
  }
  return normal_sf((y - m) / s);
}

TestResult shapiro_wilk(const Sample& x) {
  const std::size_t n = x.size();
  if (n < kShapiroWilkMinN || n > kShapiroWilkMaxN) {
    throw SizeError("Shapiro-Wilk needs 3 <= n <= 5000, got " + std::to_string(n));
  }
  const std::vector<double> v = sorted_copy(x);
  const double range = v.back() - v.front();
  if (!(range > 0.0)) throw DegenerateError("Shapiro-Wilk: sample is constant");

  const auto weights = shapiro_wilk_weights(n);
  double mean = 0.0;
  for (double value : v) mean += value / range;
  mean /= static_cast<double>(n);
  double ssx = 0.0;
  double sax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = v[i] / range - mean;
    ssx += d * d;
    sax += weights->coeffs[i] * d;
  }
  // 1 - W as a difference of squares keeps precision when W is close to 1.
  const double ssa = weights->sum_sq;
  const double root = std::sqrt(ssa * ssx);
  const double w1 = (root - sax) * (root + sax) / (ssa * ssx);
  const double w = 1.0 - w1;
  return make_result(NormalityTest::SW, w, shapiro_wilk_pvalue(w, n));
}

double anderson_darling_pvalue(double a2, AdPValueMethod method) {
  if (method == AdPValueMethod::Asymptotic) return detail::ad_limit_sf_interpolated(a2);
  if (a2 < 0.2) return 1.0 - std::exp(-13.436 + 101.14 * a2 - 223.73 * a2 * a2);
  if (a2 < 0.34) return 1.0 - std::exp(-8.318 + 42.796 * a2 - 59.938 * a2 * a2);
  if (a2 < 0.6) return std::exp(0.9177 - 4.279 * a2 - 1.38 * a2 * a2);
  if (a2 < 10.0) return std::exp(1.2937 - 5.709 * a2 + 0.0186 * a2 * a2);
  return 3.7e-24;
}

TestResult anderson_darling(const Sample& x, AdPValueMethod method) {
  const std::size_t n = x.size();
  if (n < kAndersonDarlingMinN) {
    throw SizeError("Anderson-Darling needs n >= 8, got " + std::to_string(n));
  }
  const std::vector<double> v = sorted_copy(x);
  if (v.front() == v.back()) throw DegenerateError("Anderson-Darling: sample is constant");

  const double nd = static_cast<double>(n);
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / nd;
  double ss = 0.0;
  for (double value : v) ss += (value - mean) * (value - mean);
  const double sd = std::sqrt(ss / (nd - 1.0));
  if (!(sd > 0.0)) throw DegenerateError("Anderson-Darling: zero standard deviation");

  std::vector<double> log_cdf(n);
  std::vector<double> log_sf(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double z = (v[i] - mean) / sd;
    log_cdf[i] = std::log(std::clamp(normal_cdf(z), kPFloor, 1.0 - kPFloor));
    log_sf[i] = std::log(std::clamp(normal_sf(z), kPFloor, 1.0 - kPFloor));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sum += static_cast<double>(2 * i + 1) * (log_cdf[i] + log_sf[n - 1 - i]);
  }
  const double a2 = -nd - sum / nd;
  const double adjusted = a2 * (1.0 + 0.75 / nd + 2.25 / (nd * nd));
  return make_result(NormalityTest::AD, a2, anderson_darling_pvalue(adjusted, method));
}

std::vector<double> blom_positions(std::size_t m) {
  std::vector<double> q(m);
  const double denom = static_cast<double>(m) + 0.25;
  for (std::size_t i = 0; i < m; ++i) {
    q[i] = normal_quantile((static_cast<double>(i + 1) - 0.375) / denom);
  }
  return q;
}

double qq_correlation(std::span<const double> z) {
  const std::size_t m = z.size();
  if (m < 3) throw SizeError("qq_correlation needs at least 3 values");
  std::vector<double> sorted(z.begin(), z.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() == sorted.back()) throw DegenerateError("qq_correlation: values are constant");

  const std::vector<double> q = blom_positions(m);
  const double md = static_cast<double>(m);
  const double mz = std::accumulate(sorted.begin(), sorted.end(), 0.0) / md;
  const double mq = std::accumulate(q.begin(), q.end(), 0.0) / md;
  double szz = 0.0;
  double sqq = 0.0;
  double szq = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double dz = sorted[i] - mz;
    const double dq = q[i] - mq;
    szz += dz * dz;
    sqq += dq * dq;
    szq += dz * dq;
  }
  return std::clamp(szq / std::sqrt(szz * sqq), -1.0, 1.0);
}

}  // namespace bcnorm
