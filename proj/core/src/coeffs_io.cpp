#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "bcnorm/calibration.hpp"
#include "bcnorm/error.hpp"

namespace bcnorm {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& text, std::size_t line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || !std::isfinite(v)) {
    throw InputError("line " + std::to_string(line) + ": \"" + text + "\" is not a finite number",
                     line);
  }
  return v;
}

int parse_int(const std::string& text, std::size_t line) {
  const double v = parse_double(text, line);
  if (v != std::floor(v) || std::abs(v) > 2.0e9) {
    throw InputError("line " + std::to_string(line) + ": \"" + text + "\" is not an integer", line);
  }
  return static_cast<int>(v);
}

void check_valid(const CalibrationCoefficients& c, std::size_t line) {
  const double lo = std::log(static_cast<double>(c.n_min));
  const double hi = std::log(static_cast<double>(c.n_max));
  if (c.n_min < 3 || c.n_max < c.n_min) {
    throw InputError("block ending at line " + std::to_string(line) + ": bad n_min/n_max", line);
  }
  // sd is linear in log n, so checking the endpoints covers the range.
  if (!(c.C + c.D * lo > 0.0) || !(c.C + c.D * hi > 0.0)) {
    throw InputError("block ending at line " + std::to_string(line) +
                         ": modelled sd is not positive over [n_min, n_max]",
                     line);
  }
}

}  // namespace

void CoefficientSet::write(std::ostream& out) const {
  out << "# bcnorm calibration coefficients: mean = A + B ln(n), sd = C + D ln(n)\n";
  char buf[64];
  auto num = [&buf](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  for (const CalibrationCoefficients& c : cells_) {
    out << "\ntest = " << to_string(c.test) << '\n'
        << "model = " << to_string(c.model) << '\n'
        << "A = " << num(c.A) << '\n'
        << "B = " << num(c.B) << '\n'
        << "C = " << num(c.C) << '\n'
        << "D = " << num(c.D) << '\n'
        << "n_min = " << c.n_min << '\n'
        << "n_max = " << c.n_max << '\n';
  }
}

CoefficientSet CoefficientSet::read(std::istream& in) {
  CoefficientSet set;
  bool seen[4] = {false, false, false, false};
  std::optional<CalibrationCoefficients> current;
  unsigned have = 0;  // bit per key of the current block
  constexpr unsigned kAll = 0xFF;
  std::size_t line_no = 0;

  auto finish = [&](std::size_t line) {
    if (!current) return;
    if (have != kAll) {
      throw InputError("block ending at line " + std::to_string(line) +
                           " is missing keys (need test, model, A, B, C, D, n_min, n_max)",
                       line);
    }
    check_valid(*current, line);
    seen[index(current->test, current->model)] = true;
    set.set(*current);
    current.reset();
    have = 0;
  };

  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InputError("line " + std::to_string(line_no) + ": expected key = value", line_no);
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "test") {
      finish(line_no - 1);
      current.emplace();
      if (value == "SW" || value == "sw") {
        current->test = NormalityTest::SW;
      } else if (value == "AD" || value == "ad") {
        current->test = NormalityTest::AD;
      } else {
        throw InputError("line " + std::to_string(line_no) + ": unknown test \"" + value + "\"",
                         line_no);
      }
      have |= 1u;
      continue;
    }
    if (!current) {
      throw InputError("line " + std::to_string(line_no) + ": key before any \"test =\" line",
                       line_no);
    }
    if (key == "model") {
      if (value == "1p") {
        current->model = BoxCoxModel::OneParam;
      } else if (value == "2p") {
        current->model = BoxCoxModel::TwoParam;
      } else {
        throw InputError("line " + std::to_string(line_no) + ": unknown model \"" + value + "\"",
                         line_no);
      }
      have |= 2u;
    } else if (key == "A") {
      current->A = parse_double(value, line_no), have |= 4u;
    } else if (key == "B") {
      current->B = parse_double(value, line_no), have |= 8u;
    } else if (key == "C") {
      current->C = parse_double(value, line_no), have |= 16u;
    } else if (key == "D") {
      current->D = parse_double(value, line_no), have |= 32u;
    } else if (key == "n_min") {
      current->n_min = parse_int(value, line_no), have |= 64u;
    } else if (key == "n_max") {
      current->n_max = parse_int(value, line_no), have |= 128u;
    } else {
      throw InputError("line " + std::to_string(line_no) + ": unknown key \"" + key + "\"",
                       line_no);
    }
  }
  finish(line_no);
  for (bool s : seen) {
    if (!s) throw InputError("coefficient file must define all four (test, model) cells");
  }
  return set;
}

CoefficientSet CoefficientSet::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open coefficient file " + path);
  return read(in);
}

}  // namespace bcnorm
