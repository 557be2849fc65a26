#pragma once

// Test-side reference computations. Nothing here calls the library's level
// formulas: curves are rebuilt from their defining arcs, distances are brute
// force, signs come from crossing parity along a path from the positive pole.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <tuple>
#include <vector>

namespace oracle {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
inline constexpr double pi = std::numbers::pi;

// Level profile as a distance to the lattice 4aZ.
inline double profile(double u, double a) {
  const double n = std::round(u / (4 * a));
  return a - std::abs(u - 4 * a * n);
}

// All u in [0, u_max] with profile(u, a) == level, ascending.
inline std::vector<double> roots(double level, double a, double u_max) {
  std::vector<double> out;
  const double off = a - level;
  for (int n = 0; 4 * a * n - off <= u_max + 1e-12; ++n) {
    for (double u : {4 * a * n - off, 4 * a * n + off}) {
      if (u < -1e-12 || u > u_max + 1e-12) continue;
      u = std::clamp(u, 0.0, u_max);
      if (std::none_of(out.begin(), out.end(), [&](double v) { return std::abs(v - u) < 1e-12; })) out.push_back(u);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---- plane ---------------------------------------------------------------

struct PlaneCurve {
  std::vector<std::pair<Vec2, Vec2>> chords;
  Vec2 pole;  // positive center
};

inline void add_arc(PlaneCurve& c, const Vec2& center, double r, double from, double to, int n) {
  Vec2 prev = center + r * Vec2(std::cos(from), std::sin(from));
  for (int i = 1; i <= n; ++i) {
    const double t = from + (to - from) * i / n;
    const Vec2 p = center + r * Vec2(std::cos(t), std::sin(t));
    c.chords.push_back({prev, p});
    prev = p;
  }
}

// The zero set rebuilt from its arcs: odd multiples of a about both centers,
// joined by vertical segments across the strip.
inline PlaneCurve plane_sigma(double a, double h, double window, int chords_per_arc) {
  PlaneCurve c;
  const Vec2 x0(0, h / 2), y0(2 * a, -h / 2);
  c.pole = x0;
  for (double r = a; r <= window + 1e-12; r += 2 * a) {
    add_arc(c, x0, r, 0, pi, chords_per_arc);
    add_arc(c, y0, r, pi, 2 * pi, chords_per_arc);
  }
  if (h > 0) {
    for (double x = a; x <= window + 1e-12; x += 2 * a) {
      for (double sx : {x, -x}) c.chords.push_back({Vec2(sx, h / 2), Vec2(sx, -h / 2)});
    }
  }
  return c;
}

inline double seg_dist(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 d = b - a;
  const double t = std::clamp((p - a).dot(d) / d.squaredNorm(), 0.0, 1.0);
  return (p - (a + t * d)).norm();
}

inline bool segments_cross(const Vec2& p, const Vec2& q, const Vec2& a, const Vec2& b) {
  auto cross = [](const Vec2& u, const Vec2& v) { return u.x() * v.y() - u.y() * v.x(); };
  const double d1 = cross(q - p, a - p), d2 = cross(q - p, b - p);
  const double d3 = cross(b - a, p - a), d4 = cross(b - a, q - a);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

inline double signed_distance(const PlaneCurve& c, const Vec2& p) {
  double d = std::numeric_limits<double>::infinity();
  int crossings = 0;
  for (const auto& [s, e] : c.chords) {
    d = std::min(d, seg_dist(p, s, e));
    if (segments_cross(c.pole, p, s, e)) ++crossings;
  }
  return crossings % 2 == 0 ? d : -d;
}

// ---- sphere --------------------------------------------------------------

struct SphereCurve {
  std::vector<std::pair<Vec3, Vec3>> chords;
  Vec3 pole;
};

inline Vec3 on_circle(const Vec3& c, double u, const Vec3& e1, const Vec3& e2, double phi) {
  return std::cos(u) * c + std::sin(u) * (std::cos(phi) * e1 + std::sin(phi) * e2);
}

inline Vec3 sphere_x0() { return Vec3::UnitX(); }
inline Vec3 sphere_y0(int k, int s) {
  const double lon = 2 * s * (pi / (2 * k));
  return Vec3(std::cos(lon), std::sin(lon), 0);
}

// Upper halves of the circles about x0 and lower halves about y0 with radii
// odd multiples of pi/2k.
inline SphereCurve sphere_sigma(int k, int s, int chords_per_arc) {
  SphereCurve c;
  const double a = pi / (2 * k);
  const Vec3 up = Vec3::UnitZ();
  c.pole = sphere_x0();
  for (const auto& [center, lo, hi] : {std::tuple{sphere_x0(), 0.0, pi}, std::tuple{sphere_y0(k, s), pi, 2 * pi}}) {
    const Vec3 e1 = up.cross(center).normalized();
    for (double r = a; r < pi; r += 2 * a) {
      Vec3 prev = on_circle(center, r, e1, up, lo);
      for (int i = 1; i <= chords_per_arc; ++i) {
        const Vec3 q = on_circle(center, r, e1, up, lo + (hi - lo) * i / chords_per_arc);
        c.chords.push_back({prev, q});
        prev = q;
      }
    }
  }
  return c;
}

inline double angle(const Vec3& u, const Vec3& v) { return std::atan2(u.cross(v).norm(), u.dot(v)); }

inline double great_arc_dist(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 n = a.cross(b);
  if (n.norm() < 1e-300) return angle(p, a);
  const Vec3 nu = n.normalized();
  const Vec3 proj = p - p.dot(nu) * nu;
  if (proj.norm() > 1e-15) {
    const Vec3 f = proj.normalized();
    if (a.cross(f).dot(n) >= 0 && f.cross(b).dot(n) >= 0) return std::asin(std::clamp(std::abs(p.dot(nu)), 0.0, 1.0));
  }
  return std::min(angle(p, a), angle(p, b));
}

inline bool great_arcs_cross(const Vec3& p, const Vec3& q, const Vec3& a, const Vec3& b) {
  const Vec3 n1 = p.cross(q), n2 = a.cross(b);
  if ((a.dot(n1) > 0) == (b.dot(n1) > 0)) return false;
  if ((p.dot(n2) > 0) == (q.dot(n2) > 0)) return false;
  // Both arcs are short; the crossing is on the side both midpoints face.
  const Vec3 x = n1.cross(n2);
  const double side = x.dot(p + q) > 0 ? 1.0 : -1.0;
  return (side * x).dot(a + b) > 0;
}

// Crossing parity along a polygonal path from the pole: the great circle from
// the pole to p is split into short steps so every step is a minor arc.
inline double signed_distance(const SphereCurve& c, const Vec3& p) {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& [s, e] : c.chords) d = std::min(d, great_arc_dist(p, s, e));
  const double total = angle(c.pole, p);
  Vec3 axis = c.pole.cross(p);
  if (axis.norm() < 1e-12) axis = c.pole.cross(Vec3(0.123, 0.456, 0.789));
  const Vec3 t = axis.normalized().cross(c.pole);
  const int steps = 8;
  int crossings = 0;
  Vec3 prev = c.pole;
  for (int i = 1; i <= steps; ++i) {
    const double th = total * i / steps;
    const Vec3 cur = std::cos(th) * c.pole + std::sin(th) * t;
    for (const auto& [s, e] : c.chords) {
      if (great_arcs_cross(prev, cur, s, e)) ++crossings;
    }
    prev = cur;
  }
  return crossings % 2 == 0 ? d : -d;
}

inline Vec3 random_unit(auto& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec3 v(n(rng), n(rng), n(rng));
  return v.normalized();
}

}  // namespace oracle
