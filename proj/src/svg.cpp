#include "shapeopt/svg.hpp"

#include <cmath>
#include <cstdio>

namespace shapeopt {

namespace {

std::string ramp_color(std::size_t index, std::size_t count) {
  const double s = count > 1 ? static_cast<double>(index) / static_cast<double>(count - 1) : 1.0;
  const int red = static_cast<int>(std::lround(255.0 * s));
  const int blue = 255 - red;
  char buf[16];
  std::snprintf(buf, sizeof(buf), "#%02x00%02x", red, blue);
  return buf;
}

}  // namespace

std::string render_iterates_svg(const std::vector<std::vector<Vec2>>& curves, const SvgOptions& options) {
  const double h = options.half_extent;
  char buf[256];
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  std::snprintf(buf, sizeof(buf),
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" viewBox=\"%g %g %g %g\">\n",
                options.pixel_size, options.pixel_size, -h, -h, 2.0 * h, 2.0 * h);
  out += buf;
  out += "<rect x=\"" + std::to_string(-h) + "\" y=\"" + std::to_string(-h) + "\" width=\"" +
         std::to_string(2.0 * h) + "\" height=\"" + std::to_string(2.0 * h) + "\" fill=\"white\"/>\n";
  // Flip y so the plot uses mathematical orientation.
  out += "<g transform=\"scale(1,-1)\" fill=\"none\">\n";
  for (std::size_t k = 0; k < curves.size(); ++k) {
    out += "<polyline stroke=\"" + ramp_color(k, curves.size()) + "\" stroke-width=\"";
    std::snprintf(buf, sizeof(buf), "%g", options.stroke_width);
    out += buf;
    out += "\" points=\"";
    for (std::size_t i = 0; i < curves[k].size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%s%.6f,%.6f", i == 0 ? "" : " ", curves[k][i].x(), curves[k][i].y());
      out += buf;
    }
    if (!curves[k].empty()) {
      std::snprintf(buf, sizeof(buf), " %.6f,%.6f", curves[k][0].x(), curves[k][0].y());
      out += buf;
    }
    out += "\"/>\n";
  }
  out += "</g>\n</svg>\n";
  return out;
}

}  // namespace shapeopt
