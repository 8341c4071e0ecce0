#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bcnorm/bcnorm.hpp"
#include "input.hpp"
#include "manifest.hpp"
#include "qq_plot.hpp"

namespace fs = std::filesystem;
using bcnorm::cli::format_number;
using json = nlohmann::ordered_json;

namespace bcnorm::cli {
namespace {

enum Exit { kOk = 0, kInput = 2, kDomain = 3, kNumerical = 4 };

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<NormalityTest> parse_tests(const std::string& text) {
  const std::string t = lower(text);
  if (t == "both") return {NormalityTest::SW, NormalityTest::AD};
  std::vector<NormalityTest> out;
  for (const std::string& item : split_list(t)) {
    const auto test = parse_test(item);
    if (!test) throw InputError("unknown test \"" + item + "\" (use sw, ad or both)");
    out.push_back(*test);
  }
  return out;
}

std::vector<SimModel> parse_models(const std::string& text) {
  std::vector<SimModel> out;
  for (const std::string& item : split_list(lower(text))) {
    const auto model = parse_sim_model(item);
    if (!model) throw InputError("unknown model \"" + item + "\" (use true, 1p or 2p)");
    out.push_back(*model);
  }
  return out;
}

CoefficientSet load_coeffs(const std::string& source, RunManifest* manifest = nullptr) {
  if (source == "builtin") return CoefficientSet::builtin();
  if (source == "identity") return CoefficientSet::identity();
  if (manifest) manifest->add_input(source);
  return CoefficientSet::load(source);
}

json sizes_json(const std::vector<std::size_t>& sizes) {
  json j = json::array();
  for (std::size_t n : sizes) j.push_back(n);
  return j;
}

void maybe_write_manifest(const RunManifest& manifest, const std::string& path) {
  if (!path.empty()) manifest.write(path);
}

void progress_line(std::size_t done, std::size_t total) {
  std::fprintf(stderr, "\r%3zu%% (%zu/%zu samples)", 100 * done / total, done, total);
  if (done == total) std::fputc('\n', stderr);
  std::fflush(stderr);
}

// ---------------------------------------------------------------- test

struct TestOptions {
  std::string input;
  std::string model = "1p";
  std::string tests = "both";
  std::string coeffs = "builtin";
  std::string ad_pvalue = "asymptotic";
  std::string manifest;
  bool json = false;
  bool csv = false;
  bool force = false;
};

struct TestRow {
  TestResult result;
  double q = 0.0;
  bool calibrated = false;
};

int cmd_test(const TestOptions& o) {
  RunManifest manifest;
  manifest.command = "test";
  manifest.add_input(o.input);
  const Column col = read_column_file(o.input);
  const std::size_t n = col.values.size();
  if (n < kAndersonDarlingMinN) {
    throw InputError(o.input + ": need at least 8 values, found " + std::to_string(n));
  }
  const std::string model_name = lower(o.model);
  if (model_name != "1p" && model_name != "2p" && model_name != "none") {
    throw InputError("unknown model \"" + o.model + "\" (use 1p, 2p or none)");
  }
  const std::vector<NormalityTest> tests = parse_tests(o.tests);
  const AdPValueMethod ad_method = lower(o.ad_pvalue) == "stephens" ? AdPValueMethod::Stephens
                                                                    : AdPValueMethod::Asymptotic;
  if (lower(o.ad_pvalue) != "stephens" && lower(o.ad_pvalue) != "asymptotic") {
    throw InputError("unknown AD P-value method \"" + o.ad_pvalue + "\"");
  }
  const CoefficientSet coeffs = load_coeffs(o.coeffs, &manifest);
  manifest.config = {{"input", o.input},   {"model", model_name}, {"test", o.tests},
                     {"coeffs", o.coeffs}, {"ad_pvalue", lower(o.ad_pvalue)}, {"force", o.force}};

  if (model_name == "1p") {
    for (std::size_t i = 0; i < n; ++i) {
      if (!(col.values[i] > 0.0)) {
        throw DomainError(o.input + " line " + std::to_string(col.rows[i]) + ": value " +
                          format_number(col.values[i]) +
                          " is not positive; the one-parameter transform needs x > 0");
      }
    }
  }

  const Sample x(col.values);
  std::optional<BoxCoxFit> fit;
  if (model_name == "1p") fit = fit_1p(x);
  if (model_name == "2p") fit = fit_2p(x);
  const Sample y = fit ? boxcox_transform(x, fit->lambda, fit->delta) : x;

  std::string note;
  std::vector<TestRow> rows;
  for (NormalityTest test : tests) {
    TestRow row;
    row.result = test == NormalityTest::SW ? shapiro_wilk(y) : anderson_darling(y, ad_method);
    row.q = row.result.p_raw;
    if (fit) {
      const CalibrationCoefficients& c = coeffs.get(test, fit->model);
      if (c.covers(n) || o.force) {
        row.q = calibrate_p(row.result.p_raw, n, c);
        row.calibrated = true;
        if (!c.covers(n)) {
          note = "n = " + std::to_string(n) + " is outside the coefficient range [" +
                 std::to_string(c.n_min) + ", " + std::to_string(c.n_max) + "]; calibrated anyway (--force)";
        }
      } else {
        note = "calibration refused: n = " + std::to_string(n) + " is outside [" +
               std::to_string(c.n_min) + ", " + std::to_string(c.n_max) +
               "]; Q is the raw P (use --force to calibrate anyway)";
      }
    } else {
      note = "no transform fitted; Q is the raw P";
    }
    rows.push_back(row);
  }
  if (!note.empty() && !o.json) std::cerr << "note: " << note << '\n';

  if (o.json) {
    json j;
    j["input"] = o.input;
    j["n"] = n;
    j["model"] = model_name;
    if (fit) {
      j["lambda"] = fit->lambda;
      j["delta"] = fit->delta;
      j["loglik"] = fit->loglik;
      j["lambda_at_bound"] = fit->lambda_at_bound;
      j["delta_at_bound"] = fit->delta_at_bound;
    } else {
      j["lambda"] = nullptr;
      j["delta"] = nullptr;
      j["loglik"] = nullptr;
    }
    j["results"] = json::array();
    for (const TestRow& r : rows) {
      j["results"].push_back({{"test", std::string(to_string(r.result.test))},
                              {"statistic", r.result.statistic},
                              {"p_raw", r.result.p_raw},
                              {"z", r.result.z},
                              {"q", r.q},
                              {"calibrated", r.calibrated}});
    }
    j["note"] = note;
    std::cout << j.dump(2) << '\n';
  } else if (o.csv) {
    std::cout << "test,n,model,lambda,delta,loglik,statistic,p_raw,z,q,calibrated\n";
    for (const TestRow& r : rows) {
      std::cout << to_string(r.result.test) << ',' << n << ',' << model_name << ','
                << (fit ? format_number(fit->lambda) : "") << ','
                << (fit ? format_number(fit->delta) : "") << ','
                << (fit ? format_number(fit->loglik) : "") << ','
                << format_number(r.result.statistic) << ',' << format_number(r.result.p_raw) << ','
                << format_number(r.result.z) << ',' << format_number(r.q) << ','
                << (r.calibrated ? "true" : "false") << '\n';
    }
  } else {
    std::printf("%s: n = %zu\n", o.input.c_str(), n);
    if (fit) {
      std::printf("Box-Cox %s: lambda = %.6g%s", model_name.c_str(), fit->lambda,
                  fit->lambda_at_bound ? " (at search bound)" : "");
      if (fit->model == BoxCoxModel::TwoParam) {
        std::printf(", delta = %.6g%s", fit->delta, fit->delta_at_bound ? " (at search bound)" : "");
      }
      std::printf(", loglik = %.6g\n", fit->loglik);
    } else {
      std::printf("no transform\n");
    }
    std::printf("%-4s %12s %12s %9s %12s\n", "test", "statistic", "raw P", "Z", "Q");
    for (const TestRow& r : rows) {
      std::printf("%-4s %12.6g %12.6g %9.4f %12.6g%s\n", std::string(to_string(r.result.test)).c_str(),
                  r.result.statistic, r.result.p_raw, r.result.z, r.q, r.calibrated ? "" : " (raw)");
    }
  }
  maybe_write_manifest(manifest, o.manifest);
  return kOk;
}

// ---------------------------------------------------------------- simulate / validate

struct SimOptions {
  std::string sizes;
  std::size_t reps = 10000;
  std::uint64_t seed = 20240101;
  std::string models;
  std::string tests = "sw,ad";
  std::string coeffs = "builtin";
  double log_mean = 0.0;
  double log_sd = 0.3;
  unsigned threads = 0;
  bool quiet = false;
};

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> out;
  for (const std::string& item : split_list(text)) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || v <= 0) throw InputError("bad sample size \"" + item + "\"");
    out.push_back(static_cast<std::size_t>(v));
  }
  if (out.empty()) throw InputError("no sample sizes given");
  return out;
}

SimulationConfig make_config(const SimOptions& o, RunManifest& manifest) {
  SimulationConfig c;
  c.sample_sizes = parse_sizes(o.sizes);
  c.replicates = o.reps;
  c.seed = o.seed;
  c.models = parse_models(o.models);
  c.tests = parse_tests(o.tests);
  c.coefficients = load_coeffs(o.coeffs, &manifest);
  c.log_mean = o.log_mean;
  c.log_sd = o.log_sd;
  c.threads = o.threads;
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  manifest.seed = o.seed;
  manifest.has_seed = true;
  manifest.config = {{"sizes", sizes_json(c.sample_sizes)},
                     {"reps", c.replicates},
                     {"models", o.models},
                     {"tests", o.tests},
                     {"coeffs", o.coeffs},
                     {"log_mean", c.log_mean},
                     {"log_sd", c.log_sd}};
  return c;
}

struct SimulateOptions : SimOptions {
  std::string out;
  std::string manifest;
  bool scores = false;
};

int cmd_simulate(const SimulateOptions& o) {
  RunManifest manifest;
  manifest.command = "simulate";
  SimulationConfig c = make_config(o, manifest);
  c.keep_scores = o.scores;
  if (o.scores && o.out.empty()) throw InputError("--scores needs --out DIR");
  const SimulationSummary summary =
      run_grid(c, o.quiet ? ProgressFn{} : ProgressFn(progress_line));
  if (o.out.empty()) {
    write_summary_csv(std::cout, summary);
  } else {
    fs::create_directories(o.out);
    std::ofstream csv(fs::path(o.out) / "summary.csv");
    if (!csv) throw InputError("cannot write " + (fs::path(o.out) / "summary.csv").string());
    write_summary_csv(csv, summary);
    if (o.scores) {
      const fs::path dir = fs::path(o.out) / "scores";
      fs::create_directories(dir);
      for (const CellSummary& cell : summary.cells) {
        const std::string name = "z_n" + std::to_string(cell.n) + "_" +
                                 lower(std::string(to_string(cell.test))) + "_" +
                                 std::string(to_string(cell.model)) + ".csv";
        std::ofstream out(dir / name);
        write_score_csv(out, cell);
      }
    }
    manifest.write((fs::path(o.out) / "manifest.json").string());
  }
  maybe_write_manifest(manifest, o.manifest);
  for (const CellSummary& cell : summary.cells) {
    if (cell.failures > 0) {
      std::cerr << "warning: n = " << cell.n << ' ' << to_string(cell.test) << ' '
                << to_string(cell.model) << ": " << cell.failures << " failed replicates excluded\n";
    }
  }
  return kOk;
}

struct ValidateOptions : SimOptions {
  std::string manifest;
  bool json = false;
  bool csv = false;
};

int cmd_validate(const ValidateOptions& o) {
  RunManifest manifest;
  manifest.command = "validate";
  const SimulationConfig c = make_config(o, manifest);
  const std::vector<ValidationRow> rows =
      validate(c, c.coefficients, o.quiet ? ProgressFn{} : ProgressFn(progress_line));

  auto label = [](const ValidationRow& r) {
    return std::string(to_string(r.test)) + " " + std::string(to_string(r.model));
  };
  if (o.json) {
    json j = json::array();
    for (const ValidationRow& r : rows) {
      j.push_back({{"n", r.n},
                   {"test", std::string(to_string(r.test))},
                   {"model", std::string(to_string(r.model))},
                   {"model_mean", r.predicted.mean},
                   {"model_sd", r.predicted.sd},
                   {"pct_below_1", r.pct_cal[0]},
                   {"pct_below_5", r.pct_cal[1]},
                   {"pct_below_10", r.pct_cal[2]},
                   {"sim_mean", r.observed_mean_z},
                   {"sim_sd", r.observed_sd_z},
                   {"failures", r.failures}});
    }
    std::cout << j.dump(2) << '\n';
  } else if (o.csv) {
    std::cout << "n,test,model,model_mean,model_sd,pct_below_1,pct_below_5,pct_below_10,sim_mean,"
                 "sim_sd,failures\n";
    for (const ValidationRow& r : rows) {
      std::cout << r.n << ',' << to_string(r.test) << ',' << to_string(r.model) << ','
                << format_number(r.predicted.mean) << ',' << format_number(r.predicted.sd) << ','
                << format_number(r.pct_cal[0]) << ',' << format_number(r.pct_cal[1]) << ','
                << format_number(r.pct_cal[2]) << ',' << format_number(r.observed_mean_z) << ','
                << format_number(r.observed_sd_z) << ',' << r.failures << '\n';
    }
  } else {
    std::printf("N\tTest\tModel values\t\t\t\t\tSimulated\n");
    std::printf("\t\tMean\tsd\t<1%%\t<5%%\t<10%%\tMean\tsd\n");
    std::size_t last_n = 0;
    for (const ValidationRow& r : rows) {
      std::printf("%s\t%s\t%.3f\t%.3f\t%.1f\t%.1f\t%.1f\t%.3f\t%.3f\n",
                  r.n == last_n ? "" : std::to_string(r.n).c_str(), label(r).c_str(),
                  r.predicted.mean, r.predicted.sd, r.pct_cal[0], r.pct_cal[1], r.pct_cal[2],
                  r.observed_mean_z, r.observed_sd_z);
      last_n = r.n;
    }
  }
  maybe_write_manifest(manifest, o.manifest);
  return kOk;
}

// ---------------------------------------------------------------- calibrate

struct CalibrateOptions {
  std::string summary;
  std::string out;
};

int cmd_calibrate(const CalibrateOptions& o) {
  RunManifest manifest;
  manifest.command = "calibrate";
  manifest.add_input(o.summary);
  manifest.config = {{"summary", o.summary}, {"out", o.out}};
  std::ifstream in(o.summary);
  if (!in) throw InputError("cannot open " + o.summary);
  const std::vector<CalibrationTable> tables = read_summary_tables(in);
  if (tables.empty()) throw InputError(o.summary + ": no fitted-model rows");

  std::vector<CalibrationFit> fits;
  CoefficientSet set = CoefficientSet::builtin();
  for (const CalibrationTable& t : tables) {
    try {
      fits.push_back(fit_calibration(t));
    } catch (const InputError& e) {
      throw InputError(o.summary + ": " + std::string(to_string(t.test)) + " " +
                       std::string(to_string(t.model)) + ": " + e.what());
    }
    set.set(fits.back().coeffs);
  }
  // means first, then standard deviations, cells in SW 1p, SW 2p, AD 1p, AD 2p order
  for (int part = 0; part < 2; ++part) {
    for (const CalibrationFit& f : fits) {
      const std::string title = std::string(to_string(f.coeffs.test)) + " " +
                                std::string(to_string(f.coeffs.model)) + (part == 0 ? " mean" : " sd");
      print_regression_block(std::cout, title, part == 0 ? f.mean_fit : f.sd_fit);
    }
  }
  if (fits.size() < 4) {
    std::cerr << "note: cells absent from the summary keep the built-in coefficients\n";
  }
  if (!o.out.empty()) {
    std::ofstream out(o.out);
    if (!out) throw InputError("cannot write " + o.out);
    set.write(out);
    manifest.write(o.out + ".manifest.json");
  }
  return kOk;
}

// ---------------------------------------------------------------- qq

struct QQOptions {
  std::string zscores;
  std::string from_sim;
  std::string svg;
  std::string csv;
  unsigned threads = 0;
};

struct SimCell {
  std::size_t n = 100;
  NormalityTest test = NormalityTest::SW;
  SimModel model = SimModel::TwoParam;
  std::size_t reps = 10000;
  std::uint64_t seed = 20240101;
};

SimCell parse_cell(const std::string& spec) {
  SimCell cell;
  for (const std::string& item : split_list(spec)) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw InputError("--from-sim: expected key=value, got \"" + item + "\"");
    const std::string key = lower(item.substr(0, eq));
    const std::string value = item.substr(eq + 1);
    try {
      if (key == "n") {
        cell.n = std::stoul(value);
      } else if (key == "reps") {
        cell.reps = std::stoul(value);
      } else if (key == "seed") {
        cell.seed = std::stoull(value);
      } else if (key == "test") {
        const auto t = parse_test(value);
        if (!t) throw InputError("--from-sim: unknown test \"" + value + "\"");
        cell.test = *t;
      } else if (key == "model") {
        const auto m = parse_sim_model(lower(value));
        if (!m) throw InputError("--from-sim: unknown model \"" + value + "\"");
        cell.model = *m;
      } else {
        throw InputError("--from-sim: unknown key \"" + key + "\"");
      }
    } catch (const std::logic_error&) {
      throw InputError("--from-sim: bad value for " + key);
    }
  }
  return cell;
}

int cmd_qq(const QQOptions& o) {
  RunManifest manifest;
  manifest.command = "qq";
  std::vector<double> z;
  std::string title;
  if (!o.zscores.empty()) {
    manifest.add_input(o.zscores);
    manifest.config = {{"zscores", o.zscores}};
    z = read_column_file(o.zscores, "z").values;
    title = fs::path(o.zscores).filename().string();
  } else {
    const SimCell cell = parse_cell(o.from_sim);
    SimulationConfig c;
    c.sample_sizes = {cell.n};
    c.replicates = cell.reps;
    c.seed = cell.seed;
    c.models = {cell.model};
    c.tests = {cell.test};
    c.threads = o.threads;
    c.keep_scores = true;
    try {
      c.validate();
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
    manifest.seed = cell.seed;
    manifest.has_seed = true;
    manifest.config = {{"n", cell.n},
                       {"test", std::string(to_string(cell.test))},
                       {"model", std::string(to_string(cell.model))},
                       {"reps", cell.reps}};
    z = run_grid(c).cells.front().z;
    title = "n = " + std::to_string(cell.n) + ", " + std::string(to_string(cell.test)) + " " +
            std::string(to_string(cell.model));
  }
  if (z.empty()) throw InputError("no Z scores to plot");
  if (z.size() < 3) throw InputError("need at least 3 Z scores, found " + std::to_string(z.size()));
  const QQData qq = make_qq(std::move(z));

  if (o.svg.empty() && o.csv.empty()) {
    write_qq_csv(std::cout, qq);
    return kOk;
  }
  if (!o.csv.empty()) {
    std::ofstream out(o.csv);
    if (!out) throw InputError("cannot write " + o.csv);
    write_qq_csv(out, qq);
    manifest.write(o.csv + ".manifest.json");
  }
  if (!o.svg.empty()) {
    std::ofstream out(o.svg);
    if (!out) throw InputError("cannot write " + o.svg);
    write_qq_svg(out, qq, title);
    manifest.write(o.svg + ".manifest.json");
  }
  std::printf("mean %.4f  sd %.4f  slope %.4f  QQ r %.5f  (%zu scores)\n", qq.mean, qq.sd, qq.slope,
              qq.r, qq.z.size());
  return kOk;
}

template <typename F>
int guarded(F&& f) {
  try {
    return f();
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInput;
  } catch (const SizeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInput;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDomain;
  } catch (const DegenerateError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInput;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kNumerical;
  }
}

std::string join_sizes(const std::vector<std::size_t>& sizes) {
  std::string out;
  for (std::size_t n : sizes) out += (out.empty() ? "" : ",") + std::to_string(n);
  return out;
}

void add_sim_options(CLI::App* sub, SimOptions& o) {
  sub->add_option("--reps", o.reps, "replicates per sample size")->capture_default_str();
  sub->add_option("--seed", o.seed, "random seed")->capture_default_str();
  sub->add_option("--tests", o.tests, "sw, ad or both, comma separated")->capture_default_str();
  sub->add_option("--coeffs", o.coeffs, "calibration coefficients: builtin, identity or a file")
      ->capture_default_str();
  sub->add_option("--log-mean", o.log_mean, "mean of log(x)")->capture_default_str();
  sub->add_option("--log-sd", o.log_sd, "sd of log(x)")->capture_default_str();
  sub->add_option("--threads", o.threads,
                  std::string("worker threads; 0 uses $") + kThreadsEnvVar + " or every core")
      ->capture_default_str();
  sub->add_flag("-q,--quiet", o.quiet, "no progress on stderr");
}

}  // namespace
}  // namespace bcnorm::cli

int main(int argc, char** argv) {
  using namespace bcnorm;
  using namespace bcnorm::cli;

  CLI::App app{"Box-Cox normality testing with resubstitution-bias calibration"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.footer(std::string("Exit codes: 0 success, 2 input error, 3 domain error, 4 numerical failure.\n"
                         "Environment: ") +
             kThreadsEnvVar + " sets the default worker count for simulations.");

  TestOptions test_o;
  auto* test = app.add_subcommand("test", "fit a Box-Cox transform to a data file and test normality");
  test->add_option("input", test_o.input, "one numeric column, optional header; - for stdin")->required();
  test->add_option("--model", test_o.model, "1p, 2p or none")->capture_default_str();
  test->add_option("--test", test_o.tests, "sw, ad or both")->capture_default_str();
  test->add_option("--coeffs", test_o.coeffs, "builtin, identity or a coefficient file")->capture_default_str();
  test->add_option("--ad-pvalue", test_o.ad_pvalue, "asymptotic or stephens")->capture_default_str();
  test->add_option("--manifest", test_o.manifest, "write the run manifest to this file");
  auto* tj = test->add_flag("--json", test_o.json, "JSON report");
  test->add_flag("--csv", test_o.csv, "CSV report")->excludes(tj);
  test->add_flag("--force", test_o.force, "calibrate even outside the coefficient range");

  SimulateOptions sim_o;
  sim_o.sizes = join_sizes(default_grid_sizes());
  sim_o.models = "true,1p,2p";
  auto* sim = app.add_subcommand("simulate", "run the lognormal simulation grid and summarize Z scores");
  sim->add_option("--sizes", sim_o.sizes, "comma separated sample sizes")->capture_default_str();
  sim->add_option("--models", sim_o.models, "true, 1p, 2p, comma separated")->capture_default_str();
  add_sim_options(sim, sim_o);
  sim->add_option("--out", sim_o.out, "directory for summary.csv, manifest.json and scores/");
  sim->add_flag("--scores", sim_o.scores, "also write per-cell P and Z dumps");
  sim->add_option("--manifest", sim_o.manifest, "write the run manifest to this file");

  CalibrateOptions cal_o;
  auto* cal = app.add_subcommand("calibrate", "refit calibration coefficients from a simulation summary");
  cal->add_option("--summary", cal_o.summary, "summary CSV from simulate")->required();
  cal->add_option("--out", cal_o.out, "write the coefficient file here");

  ValidateOptions val_o;
  val_o.sizes = join_sizes(validation_sizes());
  val_o.models = "1p,2p";
  auto* val = app.add_subcommand("validate", "check calibrated tail fractions on fresh simulations");
  val->add_option("--sizes", val_o.sizes, "comma separated sample sizes")->capture_default_str();
  val->add_option("--models", val_o.models, "true, 1p, 2p, comma separated")->capture_default_str();
  add_sim_options(val, val_o);
  val->add_option("--manifest", val_o.manifest, "write the run manifest to this file");
  auto* vj = val->add_flag("--json", val_o.json, "JSON report");
  val->add_flag("--csv", val_o.csv, "CSV report")->excludes(vj);

  QQOptions qq_o;
  auto* qq = app.add_subcommand("qq", "normal QQ plot data of Z scores");
  auto* zs = qq->add_option("--zscores", qq_o.zscores, "file of Z scores (single column, or a column named z)");
  qq->add_option("--from-sim", qq_o.from_sim, "simulate one cell: n=100,test=sw,model=2p[,reps=R,seed=S]")
      ->excludes(zs);
  qq->add_option("--svg", qq_o.svg, "write an SVG plot");
  qq->add_option("--csv", qq_o.csv, "write position,z pairs");
  qq->add_option("--threads", qq_o.threads, "worker threads for --from-sim");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*test) return guarded([&] { return cmd_test(test_o); });
  if (*sim) return guarded([&] { return cmd_simulate(sim_o); });
  if (*cal) return guarded([&] { return cmd_calibrate(cal_o); });
  if (*val) return guarded([&] { return cmd_validate(val_o); });
  if (*qq) {
    if (qq_o.zscores.empty() && qq_o.from_sim.empty()) {
      std::cerr << "error: qq needs --zscores FILE or --from-sim CELL\n";
      return 2;
    }
    return guarded([&] { return cmd_qq(qq_o); });
  }
  return 2;
}
