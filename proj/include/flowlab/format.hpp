#pragma once

#include <string>

namespace flowlab {

/// Shortest decimal string that round-trips the double exactly (to_chars);
/// the same value always prints the same bytes, which the CSV/SVG golden
/// comparisons rely on.
std::string format_double(double v);

}  // namespace flowlab
