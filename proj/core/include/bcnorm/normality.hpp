#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "bcnorm/sample.hpp"

namespace bcnorm {

enum class NormalityTest { SW, AD };

std::string_view to_string(NormalityTest test) noexcept;  // "SW" / "AD"

struct TestResult {
  NormalityTest test = NormalityTest::SW;
  double statistic = 0.0;  ///< W for SW, A^2 (unadjusted) for AD
  double p_raw = 1.0;      ///< clamped to [kPFloor, 1 - kPFloor]
  double z = 0.0;          ///< normal_quantile(p_raw)
};

/// Antisymmetric Shapiro-Wilk coefficients for one sample size (AS R94).
struct ShapiroWilkWeights {
  std::size_t n = 0;
  std::vector<double> coeffs;  ///< length n, ascending-order weights, sum zero
  double sum_sq = 0.0;         ///< sum of coeffs^2

  static ShapiroWilkWeights compute(std::size_t n);
};

/// Cached weights for n; thread-safe.
std::shared_ptr<const ShapiroWilkWeights> shapiro_wilk_weights(std::size_t n);

inline constexpr std::size_t kShapiroWilkMinN = 3;
inline constexpr std::size_t kShapiroWilkMaxN = 5000;
inline constexpr std::size_t kAndersonDarlingMinN = 8;

/// Shapiro-Wilk W with Royston's normalizing-transform P value.
/// Throws SizeError outside [3, 5000] and DegenerateError for constant input.
TestResult shapiro_wilk(const Sample& x);

/// Shapiro-Wilk P value for a given W at sample size n.
double shapiro_wilk_pvalue(double w, std::size_t n);

/// How the P value of the adjusted statistic A*^2 = A^2 (1 + 0.75/n + 2.25/n^2)
/// is obtained.
enum class AdPValueMethod {
  /// Limiting null distribution of A^2 with estimated mean and variance: a
  /// weighted sum of chi-square(1) variables whose weights are the kernel
  /// eigenvalues, inverted with Imhof's formula.
  Asymptotic,
  /// D'Agostino-Stephens piecewise exponential fit.
  Stephens,
};

/// Anderson-Darling A^2 with mean and variance estimated from the sample.
/// Throws SizeError for n < 8 and DegenerateError for constant input.
TestResult anderson_darling(const Sample& x, AdPValueMethod method = AdPValueMethod::Asymptotic);

/// P value of the small-sample adjusted statistic A*^2.
double anderson_darling_pvalue(double adjusted_a2,
                               AdPValueMethod method = AdPValueMethod::Asymptotic);

/// Weights of the limiting chi-square expansion, largest first.
std::span<const double> anderson_darling_eigenvalues();

/// Upper tail of the limiting null distribution, evaluated directly by
/// numerical inversion of the characteristic function (no table lookup).
double anderson_darling_limit_sf(double a2);

/// Blom plotting positions normal_quantile((i - 0.375) / (m + 0.25)), i = 1..m.
std::vector<double> blom_positions(std::size_t m);

/// Pearson correlation of sorted z against Blom normal scores.
/// Throws SizeError for fewer than 3 values and DegenerateError for constant z.
double qq_correlation(std::span<const double> z);

}  // namespace bcnorm
