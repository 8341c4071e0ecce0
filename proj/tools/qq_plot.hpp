#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bcnorm::cli {

/// Sorted scores against Blom normal positions, with the legend figures.
struct QQData {
  std::vector<double> position;  ///< ascending
  std::vector<double> z;         ///< sorted ascending
  double mean = 0.0;
  double sd = 0.0;
  double slope = 0.0;  ///< least-squares slope of z on position
  double r = 0.0;      ///< QQ correlation
};

/// Throws SizeError for fewer than 3 scores, DegenerateError when constant.
QQData make_qq(std::vector<double> z);

void write_qq_csv(std::ostream& out, const QQData& qq);

/// Static SVG 1.1: points, the identity line and a legend.
void write_qq_svg(std::ostream& out, const QQData& qq, const std::string& title);

}  // namespace bcnorm::cli
