#pragma once

#include <variant>

namespace submetry {

struct Line {};
struct HalfLine {
  double origin = 0.0;
};
struct Segment {
  double lo = 0.0;
  double hi = 1.0;
};
/// Points are represented by an angle in [0, length).
struct Circle {
  double length = 1.0;
};

/// One-dimensional Alexandrov space.
using Space1D = std::variant<Line, HalfLine, Segment, Circle>;

void validate(const Space1D& space);
bool contains(const Space1D& space, double y, double tol = 1e-12);
double base_distance(const Space1D& space, double y1, double y2);

/// Nearest point of the space (clamped for intervals, wrapped for circles).
double clamp_to(const Space1D& space, double y);

/// Folds a unit-speed path y0 + t into the space: identity on the line,
/// reflection at the boundary points of half-lines and segments, wrapping on
/// circles.
double reflect_into(const Space1D& space, double y);

bool same_space(const Space1D& a, const Space1D& b, double tol = 1e-12);
const char* kind_name(const Space1D& space);

}  // namespace submetry
