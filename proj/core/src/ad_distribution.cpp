// Limiting null distribution of the Anderson-Darling statistic when the
// normal mean and variance are estimated from the sample.
//
// The limit is sum_j lambda_j chi2_1 where lambda_j are the eigenvalues of
//   K(s, t) / sqrt(s (1 - s) t (1 - t)),
//   K(s, t) = min(s, t) - s t - phi(x_s) phi(x_t) - x_s phi(x_s) x_t phi(x_t) / 2,
// x_s = Phi^-1(s). The eigenvalues come from a Nystrom discretisation on
// Gauss-Legendre nodes, the tail probabilities from Imhof's integral.

#include "ad_distribution.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "bcnorm/normal.hpp"
#include "bcnorm/normality.hpp"

namespace bcnorm {
namespace {

constexpr int kNystromNodes = 400;
constexpr std::size_t kLeadingEigenvalues = 120;
constexpr double kTableMax = 4.0;
constexpr double kTableStep = 0.0025;

struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Nodes and weights on [-1, 1] by Newton iteration on P_n.
GaussLegendre gauss_legendre(int n) {
  GaussLegendre g;
  g.nodes.resize(static_cast<std::size_t>(n));
  g.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    g.nodes[static_cast<std::size_t>(i)] = -x;
    g.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    g.weights[static_cast<std::size_t>(i)] = w;
    g.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  return g;
}

struct Spectrum {
  std::vector<double> leading;  // descending
  double remainder = 0.0;       // sum of the rest, treated as a constant
};

Spectrum compute_spectrum() {
  const GaussLegendre g = gauss_legendre(kNystromNodes);
  const int m = kNystromNodes;
  std::vector<double> t(m), w(m), x(m), phi(m), scale(m);
  for (int i = 0; i < m; ++i) {
    t[i] = 0.5 * (g.nodes[i] + 1.0);
    w[i] = 0.5 * g.weights[i];
    x[i] = normal_quantile(t[i]);
    phi[i] = std::exp(-0.5 * x[i] * x[i]) / std::sqrt(2.0 * std::numbers::pi);
    scale[i] = std::sqrt(w[i] / (t[i] * (1.0 - t[i])));
  }
  Eigen::MatrixXd a(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j <= i; ++j) {
      const double k = std::min(t[i], t[j]) - t[i] * t[j] - phi[i] * phi[j] -
                       0.5 * x[i] * phi[i] * x[j] * phi[j];
      a(i, j) = a(j, i) = k * scale[i] * scale[j];
    }
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, Eigen::EigenvaluesOnly);
  std::vector<double> values(solver.eigenvalues().data(), solver.eigenvalues().data() + m);
  std::sort(values.begin(), values.end(), std::greater<>());
  Spectrum s;
  for (double v : values) {
    if (v <= 0.0) break;
    if (s.leading.size() < kLeadingEigenvalues) {
      s.leading.push_back(v);
    } else {
      s.remainder += v;
    }
  }
  return s;
}

const Spectrum& spectrum() {
  static const Spectrum s = compute_spectrum();
  return s;
}

// Imhof: P(Q > x) = 1/2 + (1/pi) int_0^inf sin(theta(u)) / (u rho(u)) du with
// theta(u) = sum atan(lambda_j u) / 2 - x u / 2 and rho(u) = prod (1 + lambda_j^2 u^2)^(1/4).
// theta's x-free part and the amplitude are cached per quadrature node.
class ImhofIntegrator {
 public:
  explicit ImhofIntegrator(const Spectrum& s) : remainder_(s.remainder) {
    constexpr double kPanel = 1.0;
    constexpr double kLogCutoff = 36.0;  // amplitude below e^-36
    const GaussLegendre g = gauss_legendre(8);
    for (int panel = 0; panel < 40000; ++panel) {
      const double lo = panel * kPanel;
      double log_amp_min = 0.0;
      for (std::size_t k = 0; k < g.nodes.size(); ++k) {
        const double u = lo + 0.5 * kPanel * (g.nodes[k] + 1.0);
        double phase = 0.0;
        double log_rho = 0.0;
        for (double lam : s.leading) {
          phase += std::atan(lam * u);
          log_rho += std::log1p(lam * lam * u * u);
        }
        const double log_amp = -std::log(u) - 0.25 * log_rho;
        phase_.push_back(0.5 * phase);
        u_.push_back(u);
        amp_.push_back(0.5 * kPanel * g.weights[k] * std::exp(log_amp));
        log_amp_min = log_amp;
      }
      if (log_amp_min < -kLogCutoff) break;
    }
  }

  double sf(double a2) const {
    const double shifted = a2 - remainder_;
    double sum = 0.0;
    for (std::size_t i = 0; i < u_.size(); ++i) {
      sum += amp_[i] * std::sin(phase_[i] - 0.5 * shifted * u_[i]);
    }
    return std::clamp(0.5 + sum / std::numbers::pi, 0.0, 1.0);
  }

 private:
  double remainder_;
  std::vector<double> u_, phase_, amp_;
};

const ImhofIntegrator& integrator() {
  static const ImhofIntegrator imhof(spectrum());
  return imhof;
}

struct SfTable {
  std::vector<double> log_sf;  // at k * kTableStep
  double tail_rate = 0.0;      // d log sf / dx beyond the table
};

const SfTable& sf_table() {
  static const SfTable table = [] {
    SfTable t;
    const ImhofIntegrator& imhof = integrator();
    const auto knots = static_cast<std::size_t>(std::lround(kTableMax / kTableStep)) + 1;
    t.log_sf.resize(knots);
    for (std::size_t k = 0; k < knots; ++k) {
      const double sf = imhof.sf(static_cast<double>(k) * kTableStep);
      t.log_sf[k] = std::log(std::max(sf, 1e-300));
    }
    t.tail_rate = -0.5 / spectrum().leading.front();
    return t;
  }();
  return table;
}

}  // namespace

std::span<const double> anderson_darling_eigenvalues() { return spectrum().leading; }

double anderson_darling_limit_sf(double a2) {
  if (!(a2 > 0.0)) return 1.0;
  return integrator().sf(a2);
}

namespace detail {

double ad_limit_sf_interpolated(double a2) {
  if (!(a2 > 0.0)) return 1.0;
  const SfTable& t = sf_table();
  const double pos = a2 / kTableStep;
  const auto last = t.log_sf.size() - 1;
  if (pos >= static_cast<double>(last)) {
    return std::exp(t.log_sf[last] + t.tail_rate * (a2 - kTableMax));
  }
  const auto k = static_cast<std::size_t>(pos);
  const double frac = pos - static_cast<double>(k);
  return std::exp(t.log_sf[k] + frac * (t.log_sf[k + 1] - t.log_sf[k]));
}

}  // namespace detail
}  // namespace bcnorm
