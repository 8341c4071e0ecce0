#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <set>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>

#include "bcnorm/error.hpp"
#include "bcnorm/montecarlo.hpp"

namespace bcnorm {
namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) {
    field.erase(std::remove(field.begin(), field.end(), '\r'), field.end());
    const auto a = field.find_first_not_of(" \t\"");
    const auto b = field.find_last_not_of(" \t\"");
    fields.push_back(a == std::string::npos ? std::string() : field.substr(a, b - a + 1));
  }
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

void write_summary_csv(std::ostream& out, const SimulationSummary& summary) {
  out << "n,test,model,mean_z,sd_z,qq_corr,frac_raw_1,frac_raw_5,frac_raw_10,"
         "frac_cal_1,frac_cal_5,frac_cal_10,failures\n";
  for (const CellSummary& c : summary.cells) {
    out << c.n << ',' << to_string(c.test) << ',' << to_string(c.model) << ',' << fmt(c.mean_z)
        << ',' << fmt(c.sd_z) << ',' << fmt(c.qq_corr);
    for (double f : c.frac_raw) out << ',' << fmt(f);
    for (double f : c.frac_cal) out << ',' << fmt(f);
    out << ',' << c.failures << '\n';
  }
}

void write_score_csv(std::ostream& out, const CellSummary& cell) {
  out << "replicate,p_raw,z\n";
  for (std::size_t i = 0; i < cell.z.size(); ++i) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", i, cell.p_raw[i], cell.z[i]);
    out << buf;
  }
}

std::vector<CalibrationTable> read_summary_tables(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    header = split_csv(line);
    break;
  }
  if (header.empty()) throw InputError("summary file is empty");
  const std::size_t header_line = line_no;

  auto column = [&](const std::string& name) -> std::size_t {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw InputError("summary header lacks column \"" + name + "\"", header_line);
    }
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t col_n = column("n");
  const std::size_t col_test = column("test");
  const std::size_t col_model = column("model");
  const std::size_t col_mean = column("mean_z");
  const std::size_t col_sd = column("sd_z");

  std::map<std::pair<int, int>, CalibrationTable> tables;
  std::set<std::tuple<int, int, std::size_t>> seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    const std::vector<std::string> f = split_csv(line);
    const std::string where = "summary line " + std::to_string(line_no);
    if (f.size() < header.size()) throw InputError(where + ": too few fields", line_no);

    const auto model = parse_sim_model(f[col_model]);
    const auto test = parse_test(f[col_test]);
    if (!model) throw InputError(where + ": unknown model \"" + f[col_model] + "\"", line_no);
    if (!test) throw InputError(where + ": unknown test \"" + f[col_test] + "\"", line_no);
    if (*model == SimModel::TrueLambda) continue;

    CalibrationRow row;
    try {
      std::size_t used = 0;
      const long long n = std::stoll(f[col_n], &used);
      if (used != f[col_n].size() || n < 3) throw std::invalid_argument("n");
      row.n = static_cast<std::size_t>(n);
      row.mean_z = std::stod(f[col_mean], &used);
      if (used != f[col_mean].size()) throw std::invalid_argument("mean");
      row.sd_z = std::stod(f[col_sd], &used);
      if (used != f[col_sd].size()) throw std::invalid_argument("sd");
    } catch (const std::exception&) {
      throw InputError(where + ": malformed n, mean_z or sd_z", line_no);
    }
    if (!std::isfinite(row.mean_z) || !(row.sd_z > 0.0) || !std::isfinite(row.sd_z)) {
      throw InputError(where + ": mean_z must be finite and sd_z positive", line_no);
    }
    const BoxCoxModel bm =
        *model == SimModel::OneParam ? BoxCoxModel::OneParam : BoxCoxModel::TwoParam;
    if (!seen.emplace(static_cast<int>(*test), static_cast<int>(bm), row.n).second) {
      throw InputError(where + ": duplicate row for n = " + std::to_string(row.n), line_no);
    }
    CalibrationTable& t = tables[{static_cast<int>(*test), static_cast<int>(bm)}];
    t.test = *test;
    t.model = bm;
    t.rows.push_back(row);
  }

  std::vector<CalibrationTable> out;
  for (auto& [key, t] : tables) {
    std::sort(t.rows.begin(), t.rows.end(),
              [](const CalibrationRow& a, const CalibrationRow& b) { return a.n < b.n; });
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace bcnorm
