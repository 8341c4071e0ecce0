#include "qq_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "bcnorm/normality.hpp"
#include "input.hpp"

namespace bcnorm::cli {
namespace {

std::string fixed(double v, int digits) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

}  // namespace

QQData make_qq(std::vector<double> z) {
  QQData qq;
  qq.r = qq_correlation(z);  // validates size and spread
  std::sort(z.begin(), z.end());
  qq.position = blom_positions(z.size());
  qq.z = std::move(z);
  const double m = static_cast<double>(qq.z.size());
  double sum = 0.0;
  for (double v : qq.z) sum += v;
  qq.mean = sum / m;
  double ss = 0.0;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < qq.z.size(); ++i) {
    const double d = qq.z[i] - qq.mean;
    ss += d * d;
    sxy += qq.position[i] * d;  // positions are symmetric, mean zero
    sxx += qq.position[i] * qq.position[i];
  }
  qq.sd = std::sqrt(ss / (m - 1.0));
  qq.slope = sxy / sxx;
  return qq;
}

void write_qq_csv(std::ostream& out, const QQData& qq) {
  out << "position,z\n";
  for (std::size_t i = 0; i < qq.z.size(); ++i) {
    out << format_number(qq.position[i]) << ',' << format_number(qq.z[i]) << '\n';
  }
}

void write_qq_svg(std::ostream& out, const QQData& qq, const std::string& title) {
  constexpr double kSize = 480.0;
  constexpr double kPad = 48.0;
  double lo = std::min(qq.position.front(), qq.z.front());
  double hi = std::max(qq.position.back(), qq.z.back());
  lo = std::floor(lo) - 0.5;
  hi = std::ceil(hi) + 0.5;
  const double span = kSize - 2 * kPad;
  auto sx = [&](double v) { return kPad + (v - lo) / (hi - lo) * span; };
  auto sy = [&](double v) { return kSize - kPad - (v - lo) / (hi - lo) * span; };

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kSize
      << "\" height=\"" << kSize << "\" viewBox=\"0 0 " << kSize << ' ' << kSize << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kSize / 2 << "\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"14\">"
      << escape(title) << "</text>\n";

  // axes with integer ticks
  out << "<g stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n"
      << "<rect x=\"" << kPad << "\" y=\"" << kPad << "\" width=\"" << span << "\" height=\"" << span
      << "\"/>\n</g>\n<g font-family=\"sans-serif\" font-size=\"10\" fill=\"black\">\n";
  for (double t = std::ceil(lo); t <= hi; t += 1.0) {
    out << "<text x=\"" << fixed(sx(t), 1) << "\" y=\"" << kSize - kPad + 14
        << "\" text-anchor=\"middle\">" << fixed(t, 0) << "</text>\n"
        << "<text x=\"" << kPad - 6 << "\" y=\"" << fixed(sy(t) + 3, 1) << "\" text-anchor=\"end\">"
        << fixed(t, 0) << "</text>\n";
  }
  out << "<text x=\"" << kSize / 2 << "\" y=\"" << kSize - 10
      << "\" text-anchor=\"middle\">Normal quantile</text>\n"
      << "<text x=\"14\" y=\"" << kSize / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
      << kSize / 2 << ")\">Sorted Z</text>\n</g>\n";

  out << "<line x1=\"" << fixed(sx(lo), 2) << "\" y1=\"" << fixed(sy(lo), 2) << "\" x2=\""
      << fixed(sx(hi), 2) << "\" y2=\"" << fixed(sy(hi), 2)
      << "\" stroke=\"red\" stroke-width=\"1\"/>\n<g fill=\"steelblue\" fill-opacity=\"0.6\">\n";
  for (std::size_t i = 0; i < qq.z.size(); ++i) {
    out << "<circle cx=\"" << fixed(sx(qq.position[i]), 2) << "\" cy=\"" << fixed(sy(qq.z[i]), 2)
        << "\" r=\"1.5\"/>\n";
  }
  out << "</g>\n<g font-family=\"sans-serif\" font-size=\"11\" fill=\"black\">\n"
      << "<text x=\"" << kPad + 8 << "\" y=\"" << kPad + 16 << "\">QQ r " << fixed(qq.r, 4)
      << "</text>\n"
      << "<text x=\"" << kSize - kPad - 8 << "\" y=\"" << kSize - kPad - 40
      << "\" text-anchor=\"end\">mean " << fixed(qq.mean, 3) << "</text>\n"
      << "<text x=\"" << kSize - kPad - 8 << "\" y=\"" << kSize - kPad - 26
      << "\" text-anchor=\"end\">sd " << fixed(qq.sd, 3) << "</text>\n"
      << "<text x=\"" << kSize - kPad - 8 << "\" y=\"" << kSize - kPad - 12
      << "\" text-anchor=\"end\">slope " << fixed(qq.slope, 3) << "</text>\n</g>\n</svg>\n";
}

}  // namespace bcnorm::cli
