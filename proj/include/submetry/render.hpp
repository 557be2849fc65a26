#pragma once

#include "submetry/verify.hpp"

#include <string>
#include <vector>

namespace submetry {

struct RenderOptions {
  double window_radius = 10.0;  // plane view: the square [-W, W]^2
  int size_px = 800;            // width of one panel
  double stroke_middle = 2.0;
  double stroke_boundary = 1.5;
  double stroke_other = 1.0;
  std::string color_middle = "black";
  std::string color_plus = "blue";
  std::string color_minus = "green";
  std::string color_other = "#888888";
  int samples_per_pi = 256;  // polyline resolution for sphere arcs
};

/// Stroke class of a level: "middle", "boundary-plus", "boundary-minus" or
/// "level".
std::string level_class(const AnySubmetry& s, double level);

/// SVG figure of the fibers over `levels`. Plane fibers are drawn with exact
/// arc and line commands; sphere fibers as polylines on two orthographic disks
/// (z >= 0 on the left, z <= 0 on the right). Every element carries data-*
/// attributes with the exact piece geometry.
std::string render_svg(const AnySubmetry& s, const std::vector<double>& levels, const RenderOptions& options = {});

}  // namespace submetry
