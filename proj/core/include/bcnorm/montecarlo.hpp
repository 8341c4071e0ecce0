#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "bcnorm/calibration.hpp"
#include "bcnorm/normality.hpp"
#include "bcnorm/sample.hpp"

namespace bcnorm {

/// Transform applied before testing. TrueLambda is the known-correct log
/// transform of lognormal data (lambda = delta = 0, nothing fitted).
enum class SimModel { TrueLambda, OneParam, TwoParam };

std::string_view to_string(SimModel model) noexcept;  // "true" / "1p" / "2p"
std::optional<SimModel> parse_sim_model(std::string_view text);
std::optional<NormalityTest> parse_test(std::string_view text);

/// Independent random stream for one (seed, n, replicate) triple. Streams are
/// seeded through std::seed_seq, so every replicate draws the same numbers
/// whatever order or thread it runs on.
class ReplicateStream {
 public:
  ReplicateStream(std::uint64_t seed, std::uint64_t n, std::uint64_t replicate);

  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform();
  /// Standard normal by inversion.
  double normal();

 private:
  std::mt19937_64 engine_;
};

/// exp(log_mean + log_sd * z_i) for n standard normal draws from the stream.
Sample generate_lognormal(std::size_t n, double log_mean, double log_sd, ReplicateStream& stream);

inline constexpr std::array<double, 3> kTailLevels = {0.01, 0.05, 0.10};

/// Sample sizes of the main calibration grid.
std::vector<std::size_t> default_grid_sizes();
/// Hold-out sizes used to check the calibration.
std::vector<std::size_t> validation_sizes();

struct SimulationConfig {
  std::vector<std::size_t> sample_sizes = default_grid_sizes();
  std::size_t replicates = 10000;
  double log_mean = 0.0;
  double log_sd = 0.3;
  std::uint64_t seed = 20240101;
  std::vector<SimModel> models = {SimModel::TrueLambda, SimModel::OneParam, SimModel::TwoParam};
  std::vector<NormalityTest> tests = {NormalityTest::SW, NormalityTest::AD};
  /// Coefficients for the calibrated tail fractions; TrueLambda cells are
  /// never recalibrated.
  CoefficientSet coefficients = CoefficientSet::builtin();
  /// 0 picks BCNORM_THREADS from the environment, else the hardware count.
  unsigned threads = 0;
  /// Keep every replicate's P and Z in the summary.
  bool keep_scores = false;

  /// Throws std::invalid_argument on replicates < 100, sizes < 8 or > 5000,
  /// empty model/test lists or log_sd <= 0.
  void validate() const;
};

/// Environment variable consulted for the default worker count.
inline constexpr const char* kThreadsEnvVar = "BCNORM_THREADS";
unsigned resolve_thread_count(unsigned requested);

struct CellResult {
  SimModel model = SimModel::TrueLambda;
  NormalityTest test = NormalityTest::SW;
  std::optional<TestResult> result;  ///< empty when the replicate failed
  std::string failure;               ///< reason, when result is empty
};

/// Fits each requested model on x (resubstitution), transforms, and runs
/// each requested test on the same transformed values. Failures are
/// reported per cell, never thrown.
std::vector<CellResult> run_replicate(const Sample& x, const std::vector<SimModel>& models,
                                      const std::vector<NormalityTest>& tests);

struct CellSummary {
  std::size_t n = 0;
  NormalityTest test = NormalityTest::SW;
  SimModel model = SimModel::TrueLambda;
  std::size_t completed = 0;
  std::size_t failures = 0;
  double mean_z = 0.0;
  double sd_z = 0.0;
  double qq_corr = 0.0;
  std::array<double, 3> frac_raw{};  ///< P < 1%, 5%, 10%
  std::array<double, 3> frac_cal{};  ///< Q < 1%, 5%, 10%
  std::vector<double> p_raw;         ///< replicate order; only with keep_scores
  std::vector<double> z;
};

struct SimulationSummary {
  std::vector<CellSummary> cells;  ///< ordered by n, then test, then model

  const CellSummary* find(std::size_t n, NormalityTest test, SimModel model) const;
  /// Z-score mean/sd rows for one fitted (test, model) across all sizes.
  CalibrationTable table(NormalityTest test, BoxCoxModel model) const;
};

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

/// Runs every (size, replicate) work unit, possibly in parallel, and
/// summarizes per cell. Output is bit-identical for a given config
/// regardless of thread count.
SimulationSummary run_grid(const SimulationConfig& config, const ProgressFn& progress = {});

struct ValidationRow {
  std::size_t n = 0;
  NormalityTest test = NormalityTest::SW;
  SimModel model = SimModel::OneParam;
  MeanSd predicted;  ///< (0, 1) for the known transform
  double observed_mean_z = 0.0;
  double observed_sd_z = 0.0;
  std::array<double, 3> pct_cal{};  ///< percent of Q below 1%, 5%, 10%
  std::size_t failures = 0;
};

/// Simulates config.models at config.sample_sizes with coeffs and reports
/// calibrated tail percentages next to the modelled mean and sd. Cells of the
/// known transform are not recalibrated, so their Q is the raw P.
std::vector<ValidationRow> validate(SimulationConfig config, const CoefficientSet& coeffs,
                                    const ProgressFn& progress = {});

struct RawBiasRow {
  NormalityTest test = NormalityTest::SW;
  SimModel model = SimModel::TrueLambda;
  double frac_below_5 = 0.0;
};

/// Fraction of raw P below 5% for every (test, model) at one sample size.
std::vector<RawBiasRow> raw_bias_report(SimulationConfig config, std::size_t n = 100,
                                        const ProgressFn& progress = {});

/// Summary CSV: n,test,model,mean_z,sd_z,qq_corr,frac_raw_1,frac_raw_5,
/// frac_raw_10,frac_cal_1,frac_cal_5,frac_cal_10,failures.
void write_summary_csv(std::ostream& out, const SimulationSummary& summary);

/// Reads the mean_z/sd_z columns of a summary CSV into per-cell tables
/// (fitted models only). Throws InputError naming the offending line.
std::vector<CalibrationTable> read_summary_tables(std::istream& in);

/// replicate,p_raw,z for one cell with kept scores.
void write_score_csv(std::ostream& out, const CellSummary& cell);

}  // namespace bcnorm
