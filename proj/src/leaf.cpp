#include "submetry/leaf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <type_traits>

namespace submetry {

namespace {

constexpr double kLevelTol = 1e-12;

double wrap(double u, double period) { return u - period * std::floor(u / period); }

void require_level(double level, double a) {
  if (!std::isfinite(level) || std::abs(level) > a * (1 + kLevelTol)) {
    std::ostringstream os;
    os << "level " << level << " outside the base segment [-" << a << ", " << a << "]";
    throw InvalidInput(os.str());
  }
}

// Unit tangent at p pointing away from c along the great circle through both.
// Undefined (zero) at p = +-c.
Vec3 away_from(const Vec3& p, const Vec3& c) {
  const Vec3 g = p * p.dot(c) - c;
  const double n = g.norm();
  return n > 0 ? Vec3(g / n) : Vec3::Zero();
}

Vec2 plane_level_gradient(const PlaneSigmaParams& params, const PlanePoint& p) {
  const RegionCoordinate rc = region_coordinate_plane(params, p);
  const double slope = fold_wave_slope(rc.u, params.a);
  switch (rc.region) {
    case Region::UpperCap: return slope * (p.vec() - params.x0().vec()) / rc.u;
    case Region::LowerCap: return -slope * (p.vec() - params.y0().vec()) / rc.u;
    default: return Vec2(slope * (p.x >= params.x0().x ? 1.0 : -1.0), 0.0);
  }
}

Vec3 sphere_level_gradient(const SphereSigmaParams& params, const SpherePoint& p) {
  const RegionCoordinate rc = region_coordinate_sphere(params, p);
  const double slope = fold_wave_slope(rc.u, params.a());
  if (rc.region == Region::UpperHemisphere) return slope * away_from(p.v, params.x0().v);
  return -slope * away_from(p.v, params.y0().v);
}

int orientation_from_gradient(const CurvePiece& piece, const auto& gradient_at) {
  const UnitTangent n = left_normal_on_piece(piece, 0.5);
  double dot = 0;
  using Grad = std::decay_t<decltype(gradient_at(std::declval<const Point&>()))>;
  if constexpr (std::is_same_v<Grad, Vec2>) {
    const auto& pt = std::get<PlaneTangent>(n);
    dot = gradient_at(Point(pt.base)).dot(pt.dir);
  } else {
    const auto& st = std::get<SphereTangent>(n);
    dot = gradient_at(Point(st.base)).dot(st.dir);
  }
  return dot >= 0 ? 1 : -1;
}

void link_chain_junctions(LeafCurve& curve, std::size_t first, std::size_t count, bool closed) {
  for (std::size_t i = 0; i + 1 < count; ++i) {
    const std::size_t from = first + i;
    curve.junctions.push_back({from, from + 1, point_on_piece(curve.pieces[from], 1.0)});
  }
  if (closed && count > 1) {
    const std::size_t last = first + count - 1;
    curve.junctions.push_back({last, first, point_on_piece(curve.pieces[last], 1.0)});
  }
}

// Walks the plane leaf away from the upper-arc endpoint at abscissa x0.x + x*a,
// stopping before any arc whose radius exceeds the window.
std::vector<CurvePiece> walk_plane_leaf(double a, const PlanePoint& x0, const PlanePoint& y0, long x,
                                        double window_units) {
  std::vector<CurvePiece> out;
  const bool strip = x0.y > y0.y;
  while (true) {
    const long q = x - 2;  // abscissa relative to y0 (in units of a)
    if (static_cast<double>(std::labs(q)) > window_units) break;
    const PlanePoint top(x0.x + x * a, x0.y);
    const PlanePoint bottom(y0.x + q * a, y0.y);
    if (strip) out.push_back(LineSegment{top, bottom});
    if (q != 0) {
      out.push_back(make_arc(y0, std::labs(q) * a, q > 0 ? 0.0 : kPi, q > 0 ? -kPi : kPi));
    }
    const long next = 4 - x;  // relative to x0 again
    if (static_cast<double>(std::labs(next)) > window_units) break;
    const PlanePoint bottom2(y0.x + (next - 2) * a, y0.y);
    const PlanePoint top2(x0.x + next * a, x0.y);
    if (strip) out.push_back(LineSegment{bottom2, top2});
    out.push_back(make_arc(x0, std::labs(next) * a, next > 0 ? 0.0 : kPi, next > 0 ? kPi : -kPi));
    x = -next;
  }
  return out;
}

}  // namespace

double fold_wave(double u, double a) { return std::abs(wrap(u, 4 * a) - 2 * a) - a; }

double fold_wave_slope(double u, double a) { return wrap(u, 4 * a) < 2 * a ? -1.0 : 1.0; }

std::vector<double> fold_wave_roots(double level, double a, double u_max) {
  const double e = std::clamp(level / a, -1.0, 1.0);
  const double limit = u_max / a;
  const double slack = kLevelTol * std::max(1.0, limit);
  std::vector<double> units;
  for (double base : {1.0 - e, 3.0 + e}) {
    for (double r = base; r <= limit + slack; r += 4.0) units.push_back(r);
  }
  std::sort(units.begin(), units.end());
  units.erase(std::unique(units.begin(), units.end(), [&](double x, double y) { return std::abs(x - y) <= slack; }),
              units.end());
  std::vector<double> roots;
  roots.reserve(units.size());
  for (double r : units) roots.push_back(std::abs(r - limit) <= slack ? u_max : r * a);
  return roots;
}

void PlaneSigmaParams::validate() const {
  if (!std::isfinite(a) || a <= 0) throw InvalidInput("plane sigma: a must be positive");
  if (!std::isfinite(h) || h < 0) throw InvalidInput("plane sigma: h must be non-negative");
}

double PlaneSigmaParams::center_distance() const { return std::sqrt(4 * a * a + h * h); }

void SphereSigmaParams::validate(bool allow_disconnected) const {
  if (k < 2) throw InvalidInput("sphere sigma: k must be at least 2");
  if (s < 1 || s > 2 * k - 1) throw InvalidInput("sphere sigma: s must lie in [1, 2k-1]");
  if (allow_disconnected) return;
  if (s % 2 == 0 || std::gcd(s, k) != 1) {
    std::ostringstream os;
    os << "sphere sigma: s not coprime/odd (k=" << k << ", s=" << s << ")";
    throw InvalidInput(os.str());
  }
}

double SphereSigmaParams::a() const { return kPi / (2.0 * k); }

SpherePoint SphereSigmaParams::x0() const { return SpherePoint(Vec3::UnitX()); }

SpherePoint SphereSigmaParams::y0() const {
  const double lon = 2.0 * a() * s;
  return SpherePoint::normalized(Vec3(std::cos(lon), std::sin(lon), 0.0));
}

const char* to_string(Region region) {
  switch (region) {
    case Region::UpperCap: return "upper_cap";
    case Region::LowerCap: return "lower_cap";
    case Region::Strip: return "strip";
    case Region::UpperHemisphere: return "upper_hemisphere";
    case Region::LowerHemisphere: return "lower_hemisphere";
  }
  return "?";
}

void assemble_components(FiberSet& fiber, double tol) {
  fiber.components = connected_components(fiber.pieces, fiber.singular_points, tol);
}

RegionCoordinate region_coordinate_plane(const PlaneSigmaParams& params, const PlanePoint& p) {
  if (p.y >= params.h / 2) return {Region::UpperCap, distance(p, params.x0())};
  if (p.y <= -params.h / 2) return {Region::LowerCap, distance(p, params.y0())};
  return {Region::Strip, std::abs(p.x - params.x0().x)};
}

RegionCoordinate region_coordinate_sphere(const SphereSigmaParams& params, const SpherePoint& p) {
  if (p.v.z() >= 0) return {Region::UpperHemisphere, distance(p, params.x0())};
  return {Region::LowerHemisphere, distance(p, params.y0())};
}

double signed_distance_plane(const PlaneSigmaParams& params, const PlanePoint& p) {
  const RegionCoordinate rc = region_coordinate_plane(params, p);
  const double f = fold_wave(rc.u, params.a);
  return rc.region == Region::LowerCap ? -f : f;
}

double signed_distance_sphere_upper(const SphereSigmaParams& params, const SpherePoint& p) {
  return fold_wave(distance(p, params.x0()), params.a());
}

double signed_distance_sphere_lower(const SphereSigmaParams& params, const SpherePoint& p) {
  return -fold_wave(distance(p, params.y0()), params.a());
}

double signed_distance_sphere(const SphereSigmaParams& params, const SpherePoint& p) {
  return p.v.z() >= 0 ? signed_distance_sphere_upper(params, p) : signed_distance_sphere_lower(params, p);
}

LeafCurve build_sigma_plane_from_centers(double a, const PlanePoint& x0, const PlanePoint& y0,
                                         double window_radius) {
  if (!std::isfinite(a) || a <= 0) throw InvalidInput("plane sigma: a must be positive");
  if (y0.y > x0.y) throw InvalidInput("plane sigma: the lower center must not lie above the upper one");
  if (!(window_radius > distance(x0, y0))) throw InvalidInput("plane sigma: window radius must exceed dist(x0, y0)");
  const double units = window_radius / a;

  std::vector<CurvePiece> backward = walk_plane_leaf(a, x0, y0, -1, units);
  std::vector<CurvePiece> forward = walk_plane_leaf(a, x0, y0, 1, units);

  LeafCurve curve;
  curve.ambient = Ambient::Plane;
  for (auto it = backward.rbegin(); it != backward.rend(); ++it) curve.pieces.push_back(reverse_piece(*it));
  curve.pieces.push_back(make_arc(x0, a, kPi, -kPi));  // innermost upper arc, from x0.x - a to x0.x + a
  curve.pieces.insert(curve.pieces.end(), forward.begin(), forward.end());
  link_chain_junctions(curve, 0, curve.pieces.size(), false);
  // The innermost arc runs clockwise around the positive pole x0, so the
  // positive side is to the right of the direction of travel along the chain.
  curve.orientation.assign(curve.pieces.size(), -1);
  curve.metadata.window_radius = window_radius;
  return curve;
}

LeafCurve build_sigma_plane(const PlaneSigmaParams& params, double window_radius) {
  params.validate();
  LeafCurve curve = build_sigma_plane_from_centers(params.a, params.x0(), params.y0(), window_radius);
  auto gradient = [&](const Point& p) { return plane_level_gradient(params, std::get<PlanePoint>(p)); };
  for (std::size_t i = 0; i < curve.pieces.size(); ++i) {
    curve.orientation[i] = orientation_from_gradient(curve.pieces[i], gradient);
  }
  curve.metadata.params = params;
  return curve;
}

LeafCurve build_sigma_sphere(const SphereSigmaParams& params, bool bypass) {
  params.validate(bypass);
  const double a = params.a();
  const SpherePoint x0 = params.x0();
  const SpherePoint y0 = params.y0();
  const Vec3 east_of_y0(-y0.v.y(), y0.v.x(), 0.0);

  std::vector<CurvePiece> raw;
  for (int i = 0; i < params.k; ++i) {
    const double r = (1 + 2 * i) * a;
    raw.push_back(make_spherical_arc(x0, r, Vec3::UnitY(), kPi));  // z >= 0
    raw.push_back(make_spherical_arc(y0, r, east_of_y0, -kPi));    // z <= 0
  }

  LeafCurve curve;
  curve.ambient = Ambient::Sphere;
  for (Chain& chain : order_into_chains(raw)) {
    const std::size_t first = curve.pieces.size();
    const std::size_t count = chain.pieces.size();
    curve.pieces.insert(curve.pieces.end(), chain.pieces.begin(), chain.pieces.end());
    link_chain_junctions(curve, first, count, chain.closed);
  }
  auto gradient = [&](const Point& p) { return sphere_level_gradient(params, std::get<SpherePoint>(p)); };
  for (const auto& piece : curve.pieces) curve.orientation.push_back(orientation_from_gradient(piece, gradient));
  curve.metadata.params = params;
  curve.metadata.bypass = bypass;
  return curve;
}

FiberSet fiber_plane(const PlaneSigmaParams& params, double level, double window_radius) {
  params.validate();
  require_level(level, params.a);
  if (!(window_radius > params.center_distance())) throw InvalidInput("plane fiber: window radius must exceed dist(x0, y0)");
  const PlanePoint x0 = params.x0();
  const PlanePoint y0 = params.y0();

  FiberSet fiber;
  fiber.ambient = Ambient::Plane;
  fiber.level = level;
  for (double u : fold_wave_roots(level, params.a, window_radius)) {
    if (u == 0.0) fiber.singular_points.push_back(x0);
    else fiber.pieces.push_back(make_arc(x0, u, 0.0, kPi));
  }
  for (double u : fold_wave_roots(-level, params.a, window_radius)) {
    if (u == 0.0) fiber.singular_points.push_back(y0);
    else fiber.pieces.push_back(make_arc(y0, u, 0.0, -kPi));
  }
  if (params.h > 0) {
    for (double u : fold_wave_roots(level, params.a, window_radius)) {
      for (int side = 0; side < (u == 0.0 ? 1 : 2); ++side) {
        const double x = side == 0 ? u : -u;
        if (std::abs(x - y0.x) > window_radius) continue;
        fiber.pieces.push_back(LineSegment{PlanePoint(x, x0.y), PlanePoint(x, y0.y)});
      }
    }
  }
  assemble_components(fiber);
  return fiber;
}

FiberSet fiber_sphere(const SphereSigmaParams& params, double level) {
  params.validate();
  const double a = params.a();
  require_level(level, a);
  const SpherePoint x0 = params.x0();
  const SpherePoint y0 = params.y0();
  const Vec3 east_of_y0(-y0.v.y(), y0.v.x(), 0.0);

  FiberSet fiber;
  fiber.ambient = Ambient::Sphere;
  fiber.level = level;
  for (double u : fold_wave_roots(level, a, kPi)) {
    if (u == 0.0) fiber.singular_points.push_back(x0);
    else if (u == kPi) fiber.singular_points.push_back(SpherePoint(-x0.v));
    else fiber.pieces.push_back(make_spherical_arc(x0, u, Vec3::UnitY(), kPi));
  }
  for (double u : fold_wave_roots(-level, a, kPi)) {
    if (u == 0.0) fiber.singular_points.push_back(y0);
    else if (u == kPi) fiber.singular_points.push_back(SpherePoint(-y0.v));
    else fiber.pieces.push_back(make_spherical_arc(y0, u, east_of_y0, -kPi));
  }
  assemble_components(fiber);
  return fiber;
}

}  // namespace submetry
