#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "support.hpp"

using namespace bcnorm;

namespace {

// Maclaurin series of erf in long double; good to ~1e-16 for |x| <= 3.
double erf_series(double x) {
  long double term = x;
  long double sum = x;
  const long double x2 = static_cast<long double>(x) * x;
  for (int k = 1; k < 200; ++k) {
    term *= -x2 / k;
    const long double add = term / (2 * k + 1);
    sum += add;
    if (std::abs(add) < 1e-22L) break;
  }
  return static_cast<double>(sum * 2.0L / std::sqrt(std::numbers::pi_v<long double>));
}

double cdf_oracle(double z) { return 0.5 * (1.0 + erf_series(z / std::numbers::sqrt2)); }

Sample affine(const Sample& x, double b, double c) {
  std::vector<double> y(x.begin(), x.end());
  for (double& v : y) v = b * v + c;
  return Sample(y);
}

Sample shuffled(const Sample& x, unsigned seed) {
  std::vector<double> y(x.begin(), x.end());
  std::mt19937 g(seed);
  std::shuffle(y.begin(), y.end(), g);
  return Sample(y);
}

// A^2 summed directly from its definition with erfc-based CDF values.
double ad_oracle(const Sample& x) {
  std::vector<long double> v(x.begin(), x.end());
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  long double mean = 0;
  for (auto a : v) mean += a;
  mean /= n;
  long double ss = 0;
  for (auto a : v) ss += (a - mean) * (a - mean);
  const long double s = std::sqrt(ss / (n - 1));
  long double total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const long double zi = (v[i] - mean) / s;
    const long double zj = (v[n - 1 - i] - mean) / s;
    const long double lo = 0.5L * std::erfc(-zi / std::numbers::sqrt2_v<long double>);
    const long double hi = 0.5L * std::erfc(zj / std::numbers::sqrt2_v<long double>);
    total += (2.0L * (i + 1) - 1.0L) * (std::log(lo) + std::log(hi));
  }
  return static_cast<double>(-static_cast<long double>(n) - total / n);
}

}  // namespace

TEST_CASE("normal_cdf against the erf series") {
  CHECK(normal_cdf(0.0) == 0.5);
  CHECK(std::abs(normal_cdf(1.959964) - 0.975) < 1e-6);
  for (double z = -4.2; z <= 4.2; z += 0.0137) {
    CHECK(std::abs(normal_cdf(z) - cdf_oracle(z)) <= 1e-12);
    CHECK(std::abs(normal_cdf(-z) - (1.0 - normal_cdf(z))) <= 1e-12);
    CHECK(normal_sf(z) == doctest::Approx(normal_cdf(-z)).epsilon(1e-14));
  }
}

TEST_CASE("normal_cdf is monotone and bounded") {
  double prev = 0.0;
  for (double z = -40.0; z <= 10.0; z += 0.01) {
    const double p = normal_cdf(z);
    CHECK(p >= prev);
    CHECK(p <= 1.0);
    prev = p;
  }
}

TEST_CASE("normal_quantile inverts normal_cdf") {
  CHECK(normal_quantile(0.5) == 0.0);
  CHECK(std::abs(normal_quantile(0.975) - 1.959964) < 1e-5);
  for (double p : {1e-6, 0.01, 0.3, 0.7, 0.99, 1 - 1e-6}) {
    CHECK(std::abs(normal_cdf(normal_quantile(p)) - p) <= 1e-10);
  }
  double prev = -INFINITY;
  for (double e = -12.0; e < 0.0; e += 0.05) {
    for (double p : {std::pow(10.0, e), 1.0 - std::pow(10.0, e), 0.5 + 0.49 * std::sin(e)}) {
      CHECK(std::abs(normal_cdf(normal_quantile(p)) - p) <= 1e-10);
    }
    const double q = normal_quantile(std::pow(10.0, e));
    CHECK(q > prev);
    prev = q;
  }
  CHECK_THROWS_AS(normal_quantile(0.0), DomainError);
  CHECK_THROWS_AS(normal_quantile(1.0), DomainError);
  CHECK_THROWS_AS(normal_quantile(-0.1), DomainError);
  CHECK_THROWS_AS(normal_quantile(NAN), DomainError);
}

TEST_CASE("p_to_z clamps") {
  CHECK(p_to_z(0.5) == 0.0);
  CHECK(p_to_z(0.975) == doctest::Approx(1.96).epsilon(1e-3));
  CHECK(p_to_z(1.0) == normal_quantile(1 - 1e-15));
  CHECK(p_to_z(1.0) == doctest::Approx(7.94).epsilon(1e-3));
  CHECK(p_to_z(0.0) == normal_quantile(1e-15));
  CHECK(std::isfinite(p_to_z(0.0)));
}

TEST_CASE("Shapiro-Wilk n = 3") {
  const TestResult r = shapiro_wilk(Sample({1, 2, 3}));
  CHECK(r.test == NormalityTest::SW);
  CHECK(r.statistic == doctest::Approx(1.0).epsilon(1e-12));
  const auto w = shapiro_wilk_weights(3);
  CHECK(w->coeffs[0] == doctest::Approx(-std::sqrt(0.5)).epsilon(1e-12));
  CHECK(w->coeffs[1] == doctest::Approx(0.0));
  CHECK(w->coeffs[2] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
}

TEST_CASE("Shapiro-Wilk weights are normalized and antisymmetric") {
  for (std::size_t n : {4, 5, 10, 11, 12, 50, 333, 5000}) {
    const auto w = shapiro_wilk_weights(n);
    double sum = 0.0;
    double sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sum += w->coeffs[i];
      sq += w->coeffs[i] * w->coeffs[i];
      CHECK(w->coeffs[i] == doctest::Approx(-w->coeffs[n - 1 - i]).epsilon(1e-12));
    }
    CHECK(std::abs(sum) < 1e-12);
    CHECK(sq == doctest::Approx(1.0).epsilon(1e-10));
  }
  // Shapiro and Wilk's exact n = 10 coefficients
  const auto w10 = shapiro_wilk_weights(10);
  const double exact[] = {0.5739, 0.3291, 0.2141, 0.1224, 0.0399};
  for (int i = 0; i < 5; ++i) CHECK(std::abs(w10->coeffs[9 - i] - exact[i]) < 2e-3);
}

TEST_CASE("Shapiro-Wilk P at tabulated 5% points") {
  CHECK(shapiro_wilk_pvalue(0.842, 10) == doctest::Approx(0.05).epsilon(0.2));
  CHECK(shapiro_wilk_pvalue(0.905, 20) == doctest::Approx(0.05).epsilon(0.2));
  CHECK(shapiro_wilk_pvalue(0.947, 50) == doctest::Approx(0.05).epsilon(0.2));
  // monotone in W
  double prev = 0.0;
  for (double w = 0.80; w < 0.999; w += 0.002) {
    const double p = shapiro_wilk_pvalue(w, 100);
    CHECK(p >= prev);
    prev = p;
  }
}

TEST_CASE("Shapiro-Wilk invariances") {
  const Sample x = testing::lognormal_sample(5, 73, 0.6);
  const TestResult a = shapiro_wilk(x);
  const TestResult b = shapiro_wilk(affine(x, 5.0, 7.0));
  const TestResult c = shapiro_wilk(shuffled(x, 9));
  CHECK(b.statistic == doctest::Approx(a.statistic).epsilon(1e-12));
  CHECK(b.p_raw == doctest::Approx(a.p_raw).epsilon(1e-10));
  CHECK(c.statistic == doctest::Approx(a.statistic).epsilon(1e-12));
  CHECK(c.p_raw == doctest::Approx(a.p_raw).epsilon(1e-10));
  CHECK(a.statistic > 0.0);
  CHECK(a.statistic <= 1.0);
  CHECK(a.z == normal_quantile(a.p_raw));
}

TEST_CASE("Shapiro-Wilk errors") {
  CHECK_THROWS_AS(shapiro_wilk(Sample({2, 2, 2, 2})), DegenerateError);
  CHECK_THROWS_AS(shapiro_wilk(Sample(std::vector<double>(5001, 1.0))), SizeError);
  CHECK_NOTHROW(shapiro_wilk(testing::normal_sample(3, 5000)));
}

TEST_CASE("Anderson-Darling matches direct summation") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Sample x = testing::lognormal_sample(seed, 8 + 13 * seed, 0.4);
    CHECK(anderson_darling(x).statistic == doctest::Approx(ad_oracle(x)).epsilon(1e-10));
  }
  // values whose PIT values sit near (i - 0.5) / n
  const std::size_t n = 40;
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = 3.0 + 2.0 * normal_quantile((i + 0.5) / n);
  const Sample s(x);
  CHECK(anderson_darling(s).statistic == doctest::Approx(ad_oracle(s)).epsilon(1e-10));
  CHECK(anderson_darling(s).statistic < 0.2);
}

TEST_CASE("Anderson-Darling invariances") {
  const Sample x = testing::lognormal_sample(6, 55, 0.6);
  const TestResult a = anderson_darling(x);
  const TestResult b = anderson_darling(affine(x, 5.0, 7.0));
  const TestResult c = anderson_darling(shuffled(x, 3));
  CHECK(b.statistic == doctest::Approx(a.statistic).epsilon(1e-12));
  CHECK(b.p_raw == doctest::Approx(a.p_raw).epsilon(1e-10));
  CHECK(c.statistic == doctest::Approx(a.statistic).epsilon(1e-12));
  CHECK(c.p_raw == doctest::Approx(a.p_raw).epsilon(1e-10));
  CHECK(a.statistic >= 0.0);
  CHECK(a.z == normal_quantile(a.p_raw));
}

TEST_CASE("Anderson-Darling errors") {
  CHECK_THROWS_AS(anderson_darling(Sample({1, 2, 3, 4, 5, 6, 7})), SizeError);
  CHECK_THROWS_AS(anderson_darling(Sample(std::vector<double>(10, 3.0))), DegenerateError);
}

TEST_CASE("Anderson-Darling limiting percentage points") {
  CHECK(anderson_darling_limit_sf(0.631) == doctest::Approx(0.10).epsilon(0.03));
  CHECK(anderson_darling_limit_sf(0.752) == doctest::Approx(0.05).epsilon(0.03));
  CHECK(anderson_darling_limit_sf(0.873) == doctest::Approx(0.025).epsilon(0.03));
  CHECK(anderson_darling_limit_sf(1.035) == doctest::Approx(0.01).epsilon(0.03));
  // the tabulated P value follows the direct inversion
  for (double a2 : {0.05, 0.1, 0.2, 0.3, 0.5, 0.75, 1.0, 1.5, 2.5, 3.5}) {
    CHECK(anderson_darling_pvalue(a2) == doctest::Approx(anderson_darling_limit_sf(a2)).epsilon(1e-4));
  }
  double prev = 1.0;
  for (double a2 = 0.01; a2 < 12.0; a2 += 0.01) {
    const double p = anderson_darling_pvalue(a2);
    CHECK(p <= prev);
    CHECK(p > 0.0);
    prev = p;
  }
  CHECK(anderson_darling_pvalue(0.0) == doctest::Approx(1.0));
}

TEST_CASE("Anderson-Darling Stephens formula") {
  CHECK(anderson_darling_pvalue(0.752, AdPValueMethod::Stephens) == doctest::Approx(0.05).epsilon(0.06));
  CHECK(anderson_darling_pvalue(1.035, AdPValueMethod::Stephens) == doctest::Approx(0.01).epsilon(0.1));
  CHECK(anderson_darling_pvalue(0.1, AdPValueMethod::Stephens) > 0.9);
  CHECK(anderson_darling_pvalue(20.0, AdPValueMethod::Stephens) < 1e-20);
}

TEST_CASE("Anderson-Darling eigenvalues reproduce the limit by simulation") {
  const auto lambdas = anderson_darling_eigenvalues();
  REQUIRE(lambdas.size() >= 50);
  for (std::size_t j = 1; j < lambdas.size(); ++j) CHECK(lambdas[j] <= lambdas[j - 1]);
  CHECK(lambdas[0] > 0.0);
  // weights sum to the trace of the weighted kernel,
  // integral of 1 - phi(x)^2 (1 + x^2 / 2) / (s (1 - s)) with x = Phi^-1(s)
  double trace = 0.0;
  const int steps = 200000;
  for (int k = 0; k < steps; ++k) {
    const double s = (k + 0.5) / steps;
    const double x = normal_quantile(s);
    const double phi = std::exp(-0.5 * x * x) / std::sqrt(2 * std::numbers::pi);
    trace += (1.0 - phi * phi * (1.0 + 0.5 * x * x) / (s * (1.0 - s))) / steps;
  }
  double kept = 0.0;
  for (double l : lambdas) kept += l;
  CHECK(kept < trace);
  CHECK(trace - kept < 2.0 / static_cast<double>(lambdas.size()));

  // A^2 = sum lambda_j chi2_j; the truncated tail adds its mean
  double tail = trace;
  for (std::size_t j = 0; j < 40; ++j) tail -= lambdas[j];
  std::mt19937_64 rng(42);
  std::normal_distribution<double> normal;
  const int reps = 200000;
  int above_10 = 0;
  int above_1 = 0;
  for (int r = 0; r < reps; ++r) {
    double total = tail;
    for (std::size_t j = 0; j < 40; ++j) {
      const double z = normal(rng);
      total += lambdas[j] * z * z;
    }
    above_10 += total > 0.631;
    above_1 += total > 1.035;
  }
  const double p10 = static_cast<double>(above_10) / reps;
  const double p1 = static_cast<double>(above_1) / reps;
  CHECK(std::abs(p10 - anderson_darling_limit_sf(0.631)) < 4 * std::sqrt(0.09 / reps));
  CHECK(std::abs(p1 - anderson_darling_limit_sf(1.035)) < 4 * std::sqrt(0.0099 / reps));
}

TEST_CASE("null P values are uniform") {
  const int reps = 4000;
  std::vector<double> sw;
  std::vector<double> ad;
  for (int r = 0; r < reps; ++r) {
    const Sample x = testing::normal_sample(77, 100, r);
    sw.push_back(shapiro_wilk(x).p_raw);
    ad.push_back(anderson_darling(x).p_raw);
  }
  auto below = [](const std::vector<double>& p, double level) {
    return static_cast<double>(std::count_if(p.begin(), p.end(), [level](double v) { return v < level; })) /
           static_cast<double>(p.size());
  };
  CHECK(std::abs(below(sw, 0.05) - 0.05) < 0.012);
  CHECK(std::abs(below(ad, 0.05) - 0.05) < 0.012);
  CHECK(testing::ks_uniform(sw) < testing::ks_critical_01(reps));
  CHECK(testing::ks_uniform(ad) < testing::ks_critical_01(reps));
}

TEST_CASE("Blom positions") {
  const auto b = blom_positions(5);
  REQUIRE(b.size() == 5);
  CHECK(b[2] == doctest::Approx(0.0));
  CHECK(b[0] == doctest::Approx(normal_quantile(0.625 / 5.25)));
  CHECK(b[4] == doctest::Approx(-b[0]));
}

TEST_CASE("qq_correlation") {
  std::vector<double> z = blom_positions(200);
  CHECK(qq_correlation(z) == doctest::Approx(1.0).epsilon(1e-14));
  for (double& v : z) v = 3.0 * v - 11.0;
  std::reverse(z.begin(), z.end());
  CHECK(std::abs(qq_correlation(z) - 1.0) < 1e-12);

  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  std::vector<double> draws(10000);
  for (double& v : draws) v = normal(rng);
  CHECK(qq_correlation(draws) > 0.999);

  const std::vector<double> skewed = {0.1, 0.2, 0.3, 0.4, 5.0, 9.0, 20.0};
  const double r = qq_correlation(skewed);
  CHECK(r < 0.95);
  CHECK(r >= -1.0);
  CHECK_THROWS_AS(qq_correlation(std::vector<double>{1.0, 2.0}), SizeError);
  CHECK_THROWS_AS(qq_correlation(std::vector<double>{2.0, 2.0, 2.0}), DegenerateError);
}
