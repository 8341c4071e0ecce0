#include "input.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>

#include "bcnorm/error.hpp"

namespace bcnorm::cli {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\"");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\"");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',' || c == '\t' || c == ';') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

bool parse(const std::string& text, double& v) {
  if (text.empty()) return false;
  const char* first = text.data();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, text.data() + text.size(), v);
  return ec == std::errc() && ptr == text.data() + text.size();
}

}  // namespace

Column read_column(std::istream& in, const std::string& column) {
  Column col;
  std::string line;
  std::size_t line_no = 0;
  std::size_t field = 0;
  std::size_t width = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = trim(line.substr(0, line.find('#')));
    if (body.empty()) continue;
    const std::vector<std::string> f = split_fields(body);
    const std::string where = "line " + std::to_string(line_no);
    if (first) {
      first = false;
      width = f.size();
      double probe = 0.0;
      if (!parse(f[0], probe)) {
        if (width == 1) {
          col.header = f[0];
          continue;
        }
        const std::string want = column.empty() ? "x" : column;
        const auto it = std::find(f.begin(), f.end(), want);
        if (it == f.end()) {
          throw InputError(where + ": header has " + std::to_string(width) +
                               " columns and none is named \"" + want + "\"",
                           line_no);
        }
        field = static_cast<std::size_t>(it - f.begin());
        col.header = want;
        continue;
      }
      if (width > 1) {
        throw InputError(where + ": expected a single numeric column, found " +
                             std::to_string(width) + " fields",
                         line_no);
      }
    }
    if (f.size() != width) {
      throw InputError(where + ": expected " + std::to_string(width) + " fields, found " +
                           std::to_string(f.size()),
                       line_no);
    }
    double v = 0.0;
    if (!parse(f[field], v)) {
      throw InputError(where + ": \"" + f[field] + "\" is not a number", line_no);
    }
    if (!std::isfinite(v)) throw InputError(where + ": value is not finite", line_no);
    col.values.push_back(v);
    col.rows.push_back(line_no);
  }
  return col;
}

Column read_column_file(const std::string& path, const std::string& column) {
  std::ifstream file;
  if (path != "-") {
    file.open(path);
    if (!file) throw InputError("cannot open " + path);
  }
  try {
    return read_column(path == "-" ? std::cin : file, column);
  } catch (const InputError& e) {
    throw InputError((path == "-" ? std::string("stdin") : path) + ": " + e.what(), e.row());
  }
}

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "";
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (std::istreambuf_iterator<char> it(in), end; it != end; ++it) {
    h ^= static_cast<unsigned char>(*it);
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace bcnorm::cli
