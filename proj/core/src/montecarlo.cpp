#include "bcnorm/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "bcnorm/boxcox.hpp"
#include "bcnorm/normal.hpp"

namespace bcnorm {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Raw outcome of one (replicate, cell) pair.
struct Score {
  double p_raw = kNaN;
  double z = kNaN;
  bool ok = false;
};

TestResult run_test(NormalityTest test, const Sample& y) {
  return test == NormalityTest::SW ? shapiro_wilk(y) : anderson_darling(y);
}

Sample transform_for(SimModel model, const Sample& x) {
  switch (model) {
    case SimModel::TrueLambda:
      return boxcox_transform(x, 0.0, 0.0);
    case SimModel::OneParam: {
      const BoxCoxFit fit = fit_1p(x);
      return boxcox_transform(x, fit.lambda, fit.delta);
    }
    case SimModel::TwoParam: {
      const BoxCoxFit fit = fit_2p(x);
      return boxcox_transform(x, fit.lambda, fit.delta);
    }
  }
  throw std::logic_error("unknown SimModel");
}

std::optional<BoxCoxModel> fitted(SimModel model) {
  if (model == SimModel::OneParam) return BoxCoxModel::OneParam;
  if (model == SimModel::TwoParam) return BoxCoxModel::TwoParam;
  return std::nullopt;
}

void summarize(CellSummary& cell, std::vector<Score>::const_iterator first, std::size_t stride,
               std::size_t replicates, const std::optional<CalibrationCoefficients>& coeffs,
               bool keep_scores) {
  std::vector<double> z;
  std::vector<double> p;
  z.reserve(replicates);
  p.reserve(replicates);
  for (std::size_t r = 0; r < replicates; ++r) {
    const Score& s = *(first + static_cast<std::ptrdiff_t>(r * stride));
    if (s.ok) {
      z.push_back(s.z);
      p.push_back(s.p_raw);
    } else {
      ++cell.failures;
    }
  }
  cell.completed = z.size();
  const double m = static_cast<double>(z.size());
  if (z.empty()) {
    cell.mean_z = cell.sd_z = cell.qq_corr = kNaN;
    cell.frac_raw.fill(kNaN);
    cell.frac_cal.fill(kNaN);
    return;
  }
  double sum = 0.0;
  for (double v : z) sum += v;
  cell.mean_z = sum / m;
  double ss = 0.0;
  for (double v : z) ss += (v - cell.mean_z) * (v - cell.mean_z);
  cell.sd_z = z.size() > 1 ? std::sqrt(ss / (m - 1.0)) : kNaN;
  try {
    cell.qq_corr = qq_correlation(z);
  } catch (const std::exception&) {
    cell.qq_corr = kNaN;
  }

  std::array<std::size_t, 3> raw{};
  std::array<std::size_t, 3> cal{};
  for (double pr : p) {
    const double q = coeffs ? calibrate_p(pr, cell.n, *coeffs) : pr;
    for (std::size_t k = 0; k < kTailLevels.size(); ++k) {
      raw[k] += pr < kTailLevels[k];
      cal[k] += q < kTailLevels[k];
    }
  }
  for (std::size_t k = 0; k < kTailLevels.size(); ++k) {
    cell.frac_raw[k] = static_cast<double>(raw[k]) / m;
    cell.frac_cal[k] = static_cast<double>(cal[k]) / m;
  }
  if (keep_scores) {
    cell.z = std::move(z);
    cell.p_raw = std::move(p);
  }
}

}  // namespace

std::string_view to_string(SimModel model) noexcept {
  switch (model) {
    case SimModel::TrueLambda:
      return "true";
    case SimModel::OneParam:
      return "1p";
    case SimModel::TwoParam:
      return "2p";
  }
  return "?";
}

std::optional<SimModel> parse_sim_model(std::string_view text) {
  if (text == "true" || text == "none" || text == "TrueLambda") return SimModel::TrueLambda;
  if (text == "1p") return SimModel::OneParam;
  if (text == "2p") return SimModel::TwoParam;
  return std::nullopt;
}

std::optional<NormalityTest> parse_test(std::string_view text) {
  if (text == "SW" || text == "sw") return NormalityTest::SW;
  if (text == "AD" || text == "ad") return NormalityTest::AD;
  return std::nullopt;
}

ReplicateStream::ReplicateStream(std::uint64_t seed, std::uint64_t n, std::uint64_t replicate) {
  auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); };
  auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
  std::seed_seq seq{lo(seed), hi(seed), lo(n), hi(n), lo(replicate), hi(replicate)};
  engine_.seed(seq);
}

double ReplicateStream::uniform() {
  // Midpoint of one of 2^53 equal cells, never 0 or 1.
  const std::uint64_t bits = engine_() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double ReplicateStream::normal() { return normal_quantile(uniform()); }

Sample generate_lognormal(std::size_t n, double log_mean, double log_sd, ReplicateStream& stream) {
  std::vector<double> x(n);
  for (double& v : x) v = std::exp(log_mean + log_sd * stream.normal());
  return Sample(std::move(x));
}

std::vector<std::size_t> default_grid_sizes() {
  return {40, 60, 80, 120, 160, 200, 260, 340, 440, 580, 760, 1000};
}

std::vector<std::size_t> validation_sizes() { return {30, 50, 100, 2000}; }

void SimulationConfig::validate() const {
  if (replicates < 100) throw std::invalid_argument("replicates must be at least 100");
  if (sample_sizes.empty()) throw std::invalid_argument("no sample sizes given");
  for (std::size_t n : sample_sizes) {
    if (n < kAndersonDarlingMinN || n > kShapiroWilkMaxN) {
      throw std::invalid_argument("sample size " + std::to_string(n) +
                                  " outside the supported range [8, 5000]");
    }
  }
  if (models.empty() || tests.empty()) throw std::invalid_argument("no models or tests selected");
  if (!(log_sd > 0.0) || !std::isfinite(log_mean)) {
    throw std::invalid_argument("log_sd must be positive and log_mean finite");
  }
}

unsigned resolve_thread_count(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv(kThreadsEnvVar)) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<CellResult> run_replicate(const Sample& x, const std::vector<SimModel>& models,
                                      const std::vector<NormalityTest>& tests) {
  std::vector<CellResult> out;
  out.reserve(models.size() * tests.size());
  for (SimModel model : models) {
    std::optional<Sample> y;
    std::string failure;
    try {
      y.emplace(transform_for(model, x));
    } catch (const std::exception& e) {
      failure = std::string("transform: ") + e.what();
    }
    for (NormalityTest test : tests) {
      CellResult cell;
      cell.model = model;
      cell.test = test;
      if (y) {
        try {
          cell.result = run_test(test, *y);
        } catch (const std::exception& e) {
          cell.failure = std::string(to_string(test)) + ": " + e.what();
        }
      } else {
        cell.failure = failure;
      }
      out.push_back(std::move(cell));
    }
  }
  return out;
}

const CellSummary* SimulationSummary::find(std::size_t n, NormalityTest test,
                                           SimModel model) const {
  for (const CellSummary& c : cells) {
    if (c.n == n && c.test == test && c.model == model) return &c;
  }
  return nullptr;
}

CalibrationTable SimulationSummary::table(NormalityTest test, BoxCoxModel model) const {
  CalibrationTable t;
  t.test = test;
  t.model = model;
  const SimModel sim = model == BoxCoxModel::OneParam ? SimModel::OneParam : SimModel::TwoParam;
  for (const CellSummary& c : cells) {
    if (c.test == test && c.model == sim && c.completed > 1) {
      t.rows.push_back({c.n, c.mean_z, c.sd_z});
    }
  }
  std::sort(t.rows.begin(), t.rows.end(),
            [](const CalibrationRow& a, const CalibrationRow& b) { return a.n < b.n; });
  return t;
}

SimulationSummary run_grid(const SimulationConfig& config, const ProgressFn& progress) {
  config.validate();
  const std::size_t sizes = config.sample_sizes.size();
  const std::size_t reps = config.replicates;
  const std::size_t cells_per_rep = config.models.size() * config.tests.size();
  const std::size_t total = sizes * reps;

  // scores[(size * reps + rep) * cells_per_rep + cell]; one writer per slot.
  std::vector<Score> scores(total * cells_per_rep);

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;
  const std::size_t step = std::max<std::size_t>(1, total / 100);

  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&] {
    try {
      for (std::size_t unit = next++; unit < total; unit = next++) {
        const std::size_t size_index = unit / reps;
        const std::size_t rep = unit % reps;
        const std::size_t n = config.sample_sizes[size_index];
        ReplicateStream stream(config.seed, n, rep);
        const Sample x = generate_lognormal(n, config.log_mean, config.log_sd, stream);
        const std::vector<CellResult> results = run_replicate(x, config.models, config.tests);
        Score* slot = &scores[unit * cells_per_rep];
        for (std::size_t c = 0; c < results.size(); ++c) {
          if (results[c].result) {
            slot[c] = {results[c].result->p_raw, results[c].result->z, true};
          }
        }
        const std::size_t finished = ++done;
        if (progress && (finished % step == 0 || finished == total)) {
          std::lock_guard lock(progress_mutex);
          progress(finished, total);
        }
      }
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
      next = total;
    }
  };

  const unsigned threads =
      static_cast<unsigned>(std::min<std::size_t>(resolve_thread_count(config.threads), total));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);

  // Cell order within a replicate is models outer, tests inner (run_replicate).
  SimulationSummary summary;
  for (std::size_t s = 0; s < sizes; ++s) {
    for (std::size_t ti = 0; ti < config.tests.size(); ++ti) {
      for (std::size_t mi = 0; mi < config.models.size(); ++mi) {
        CellSummary cell;
        cell.n = config.sample_sizes[s];
        cell.test = config.tests[ti];
        cell.model = config.models[mi];
        std::optional<CalibrationCoefficients> coeffs;
        if (auto fm = fitted(cell.model)) coeffs = config.coefficients.get(cell.test, *fm);
        const std::size_t c = mi * config.tests.size() + ti;
        const auto first = scores.cbegin() +
                           static_cast<std::ptrdiff_t>(s * reps * cells_per_rep + c);
        summarize(cell, first, cells_per_rep, reps, coeffs, config.keep_scores);
        summary.cells.push_back(std::move(cell));
      }
    }
  }
  return summary;
}

std::vector<ValidationRow> validate(SimulationConfig config, const CoefficientSet& coeffs,
                                    const ProgressFn& progress) {
  config.coefficients = coeffs;
  const SimulationSummary summary = run_grid(config, progress);

  std::vector<ValidationRow> rows;
  for (const CellSummary& cell : summary.cells) {
    ValidationRow row;
    row.n = cell.n;
    row.test = cell.test;
    row.model = cell.model;
    if (auto fm = fitted(cell.model)) row.predicted = predicted_mean_sd(coeffs.get(row.test, *fm), row.n);
    row.observed_mean_z = cell.mean_z;
    row.observed_sd_z = cell.sd_z;
    for (std::size_t k = 0; k < 3; ++k) row.pct_cal[k] = 100.0 * cell.frac_cal[k];
    row.failures = cell.failures;
    rows.push_back(row);
  }
  return rows;
}

std::vector<RawBiasRow> raw_bias_report(SimulationConfig config, std::size_t n,
                                        const ProgressFn& progress) {
  config.sample_sizes = {n};
  const SimulationSummary summary = run_grid(config, progress);
  std::vector<RawBiasRow> rows;
  for (const CellSummary& cell : summary.cells) {
    rows.push_back({cell.test, cell.model, cell.frac_raw[1]});
  }
  return rows;
}

}  // namespace bcnorm
