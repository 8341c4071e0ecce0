#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <vector>

namespace bcnorm::cli {

struct Column {
  std::vector<double> values;
  std::vector<std::size_t> rows;  ///< 1-based file line of each value
  std::string header;             ///< empty when the file has none
};

/// Reads one numeric column. Blank lines and '#' comments are skipped; a
/// first line that does not parse as a number is taken as the header. Files
/// with several comma, tab or semicolon separated fields need a header
/// naming `column`. Throws InputError naming the offending line.
Column read_column(std::istream& in, const std::string& column = "");

/// As above for a path; "-" reads standard input.
Column read_column_file(const std::string& path, const std::string& column = "");

/// 64-bit FNV-1a of a file's bytes, as 16 hex digits.
std::string file_digest(const std::string& path);

/// Shortest decimal that reads back to the same double.
std::string format_number(double v);

}  // namespace bcnorm::cli
