#include "flowlab/svg.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "flowlab/experiment.hpp"
#include "flowlab/format.hpp"

namespace flowlab {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kMargin = 48.0;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf"};

}  // namespace

std::string render_svg_scatter(const std::vector<ScatterSeries>& series) {
  for (const auto& s : series) {
    if (s.points.rank() != 2 || s.points.cols() != 2) {
      throw std::invalid_argument("emit_svg_scatter: points must be [n,2]");
    }
  }

  double lo_x = -1.0, hi_x = 1.0, lo_y = -1.0, hi_y = 1.0;
  bool seen = false;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.points.rows(); ++i) {
      const double x = s.points.at(i, 0), y = s.points.at(i, 1);
      if (!seen) {
        lo_x = hi_x = x;
        lo_y = hi_y = y;
        seen = true;
      } else {
        lo_x = std::min(lo_x, x);
        hi_x = std::max(hi_x, x);
        lo_y = std::min(lo_y, y);
        hi_y = std::max(hi_y, y);
      }
    }
  }
  const double pad_x = (hi_x - lo_x) > 0 ? 0.05 * (hi_x - lo_x) : 1.0;
  const double pad_y = (hi_y - lo_y) > 0 ? 0.05 * (hi_y - lo_y) : 1.0;
  lo_x -= pad_x;
  hi_x += pad_x;
  lo_y -= pad_y;
  hi_y += pad_y;

  auto px = [&](double x) {
    return kMargin + (x - lo_x) / (hi_x - lo_x) * (kWidth - 2 * kMargin);
  };
  auto py = [&](double y) {
    return kHeight - kMargin - (y - lo_y) / (hi_y - lo_y) * (kHeight - 2 * kMargin);
  };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
  out << "  <rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\""
      << kWidth - 2 * kMargin << "\" height=\"" << kHeight - 2 * kMargin
      << "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % std::size(kPalette)];
    out << "  <g fill=\"" << color << "\" fill-opacity=\"0.6\">\n";
    for (std::size_t i = 0; i < series[s].points.rows(); ++i) {
      out << "    <circle cx=\"" << format_double(px(series[s].points.at(i, 0))) << "\" cy=\""
          << format_double(py(series[s].points.at(i, 1))) << "\" r=\"2.5\"/>\n";
    }
    out << "  </g>\n";
  }

  // legend
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % std::size(kPalette)];
    const double ly = kMargin + 16.0 + 18.0 * static_cast<double>(s);
    out << "  <circle cx=\"" << kMargin + 12.0 << "\" cy=\"" << format_double(ly)
        << "\" r=\"4\" fill=\"" << color << "\"/>\n";
    out << "  <text x=\"" << kMargin + 22.0 << "\" y=\"" << format_double(ly + 4.0)
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << series[s].label << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

void emit_svg_scatter(const std::vector<ScatterSeries>& series,
                      const std::filesystem::path& path) {
  write_file_atomic(path, render_svg_scatter(series));
}

void emit_svg_scatter(const Tensor& samples, const std::filesystem::path& path,
                      const std::string& label) {
  emit_svg_scatter(std::vector<ScatterSeries>{{samples, label}}, path);
}

}  // namespace flowlab
