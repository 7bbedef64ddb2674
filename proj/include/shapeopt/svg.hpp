#pragma once

#include <string>
#include <vector>

#include "shapeopt/curve.hpp"

namespace shapeopt {

struct SvgOptions {
  double half_extent = 1.2;  // fixed viewBox [-h, h]^2
  int pixel_size = 600;
  double stroke_width = 0.006;
};

/// One closed polyline per curve, colored along a blue -> red ramp from the
/// first curve to the last.
std::string render_iterates_svg(const std::vector<std::vector<Vec2>>& curves, const SvgOptions& options = {});

}  // namespace shapeopt
