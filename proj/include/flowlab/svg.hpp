#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "flowlab/tensor.hpp"

namespace flowlab {

struct ScatterSeries {
  Tensor points;  // [n, 2]; n may be 0
  std::string label;
};

/// Standalone SVG scatter plot: axis box, one circle per sample, one legend
/// entry per series. Output bytes are a pure function of the input, so two
/// identical calls produce identical files.
std::string render_svg_scatter(const std::vector<ScatterSeries>& series);

void emit_svg_scatter(const std::vector<ScatterSeries>& series,
                      const std::filesystem::path& path);
void emit_svg_scatter(const Tensor& samples, const std::filesystem::path& path,
                      const std::string& label = "samples");

}  // namespace flowlab
