#include "submetry/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <sstream>

namespace submetry {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

const PlanePoint& plane_arg(const Point& p) {
  if (const auto* pp = std::get_if<PlanePoint>(&p)) return *pp;
  throw InvalidInput("descriptor lives on the plane but got a sphere point");
}

const SpherePoint& sphere_arg(const Point& p) {
  if (const auto* sp = std::get_if<SpherePoint>(&p)) return *sp;
  throw InvalidInput("descriptor lives on the sphere but got a plane point");
}

double distance_to_seed(const ConvexSeed& seed, const PlanePoint& p) {
  return std::visit(overloaded{
                        [&](const PointSeed& s) { return distance(p, s.p); },
                        [&](const SegmentSeed& s) { return distance_to_piece(p, LineSegment{s.p, s.q}).distance; },
                        [&](const HalfLineSeed& s) {
                          const double t = std::max(0.0, (p.vec() - s.origin.vec()).dot(s.dir));
                          return (p.vec() - s.origin.vec() - t * s.dir).norm();
                        },
                    },
                    seed);
}

// Largest t >= 0 with |q + t*dir| <= radius, or nullopt when q + t*dir never
// enters the disk for t >= 0.
std::optional<double> ray_exit(const Vec2& q, const Vec2& dir, double radius) {
  const double b = q.dot(dir);
  const double disc = b * b - q.squaredNorm() + radius * radius;
  if (disc < 0) return std::nullopt;
  const double t = -b + std::sqrt(disc);
  if (t <= 0) return std::nullopt;
  return t;
}

Vec3 some_perpendicular(const Vec3& v) {
  const Vec3 ref = std::abs(v.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  return v.cross(ref).normalized();
}

FiberSet convex_fiber(const ConvexSeed& seed, double y, double window) {
  FiberSet f;
  f.ambient = Ambient::Plane;
  f.level = y;
  std::visit(overloaded{
                 [&](const PointSeed& s) {
                   if (y == 0) f.singular_points.push_back(s.p);
                   else f.pieces.push_back(make_arc(s.p, y, 0.0, 2 * kPi));
                 },
                 [&](const SegmentSeed& s) {
                   if (y == 0) {
                     f.pieces.push_back(make_segment(s.p, s.q));
                     return;
                   }
                   const Vec2 d = (s.q.vec() - s.p.vec()).normalized();
                   const Vec2 n(-d.y(), d.x());
                   const double ang = std::atan2(n.y(), n.x());
                   f.pieces.push_back(LineSegment{PlanePoint(s.p.vec() - y * n), PlanePoint(s.q.vec() - y * n)});
                   f.pieces.push_back(make_arc(s.q, y, ang - kPi, kPi));
                   f.pieces.push_back(LineSegment{PlanePoint(s.q.vec() + y * n), PlanePoint(s.p.vec() + y * n)});
                   f.pieces.push_back(make_arc(s.p, y, ang, kPi));
                 },
                 [&](const HalfLineSeed& s) {
                   const Vec2 o = s.origin.vec();
                   if (y == 0) {
                     const auto t = ray_exit(o, s.dir, window);
                     if (!t) throw InvalidInput("half-line seed does not meet the window");
                     f.pieces.push_back(LineSegment{s.origin, PlanePoint(o + *t * s.dir)});
                     return;
                   }
                   const Vec2 n(-s.dir.y(), s.dir.x());
                   const double ang = std::atan2(n.y(), n.x());
                   if (const auto t = ray_exit(o + y * n, s.dir, window)) {
                     f.pieces.push_back(LineSegment{PlanePoint(o + y * n + *t * s.dir), PlanePoint(o + y * n)});
                   }
                   f.pieces.push_back(make_arc(s.origin, y, ang, kPi));
                   if (const auto t = ray_exit(o - y * n, s.dir, window)) {
                     f.pieces.push_back(LineSegment{PlanePoint(o - y * n), PlanePoint(o - y * n + *t * s.dir)});
                   }
                 },
             },
             seed);
  return f;
}

void require_in_base(const SubmetryDescriptor& d, double y) {
  if (!contains(base_space(d), y, 1e-12)) {
    std::ostringstream os;
    os << "level " << y << " outside the base space of " << describe(d);
    throw InvalidInput(os.str());
  }
}

struct Isometry {
  Eigen::Matrix3d q;
};

// Orthonormal frame whose first axis is c1 and whose first two axes span c1, c2.
std::optional<Eigen::Matrix3d> pair_frame(const Vec3& c1, const Vec3& c2) {
  const Vec3 e2 = c2 - c2.dot(c1) * c1;
  if (e2.norm() < 1e-9) return std::nullopt;
  Eigen::Matrix3d f;
  f.col(0) = c1;
  f.col(1) = e2.normalized();
  f.col(2) = c1.cross(f.col(1));
  return f;
}

std::vector<Vec3> distinct_centers(const LeafCurve& c, double tol) {
  std::vector<Vec3> out;
  for (const auto& piece : c.pieces) {
    const Vec3 center = std::get<SphericalArc>(piece).center.v;
    const bool seen = std::any_of(out.begin(), out.end(), [&](const Vec3& v) { return (v - center).norm() <= tol; });
    if (!seen) out.push_back(center);
  }
  return out;
}

bool same_piece_set(const std::vector<CurvePiece>& a, const std::vector<CurvePiece>& b, double tol) {
  if (a.size() != b.size()) return false;
  std::vector<bool> taken(b.size(), false);
  for (const auto& pa : a) {
    const auto& arc_a = std::get<SphericalArc>(pa);
    const Vec3 mid_a = embed(point_on_piece(pa, 0.5));
    bool matched = false;
    for (std::size_t j = 0; j < b.size() && !matched; ++j) {
      if (taken[j]) continue;
      const auto& arc_b = std::get<SphericalArc>(b[j]);
      if ((arc_a.center.v - arc_b.center.v).norm() > tol) continue;
      if (std::abs(arc_a.angular_radius - arc_b.angular_radius) > tol) continue;
      if (std::abs(std::abs(arc_a.sweep) - std::abs(arc_b.sweep)) > tol) continue;
      if ((mid_a - embed(point_on_piece(b[j], 0.5))).norm() > tol) continue;
      taken[j] = true;
      matched = true;
    }
    if (!matched) return false;
  }
  return true;
}

CurvePiece transform_piece(const Eigen::Matrix3d& q, const CurvePiece& piece) {
  const auto& arc = std::get<SphericalArc>(piece);
  const double det = q.determinant();
  return SphericalArc{SpherePoint::normalized(q * arc.center.v), arc.angular_radius, (q * arc.start_dir).normalized(),
                      det > 0 ? arc.sweep : -arc.sweep};
}

}  // namespace

void validate(const SubmetryDescriptor& d) {
  std::visit(overloaded{
                 [](const OrthogonalProjection& p) {
                   if (!std::isfinite(p.axis_angle)) throw InvalidInput("projection axis angle must be finite");
                 },
                 [](const DistanceToConvex& c) {
                   std::visit(overloaded{
                                  [](const PointSeed&) {},
                                  [](const SegmentSeed& s) {
                                    if (distance(s.p, s.q) == 0) throw InvalidInput("segment seed needs p != q");
                                  },
                                  [](const HalfLineSeed& s) {
                                    if (!s.dir.allFinite() || std::abs(s.dir.norm() - 1) > 1e-12) {
                                      throw InvalidInput("half-line seed direction must be unit");
                                    }
                                  },
                              },
                              c.seed);
                 },
                 [](const SignedDistanceSigmaPlane& s) { s.params.validate(); },
                 [](const SphereRotation&) {},
                 [](const SignedDistanceSigmaSphere& s) { s.params.validate(); },
             },
             d);
}

Ambient ambient_of(const SubmetryDescriptor& d) {
  return std::holds_alternative<SphereRotation>(d) || std::holds_alternative<SignedDistanceSigmaSphere>(d)
             ? Ambient::Sphere
             : Ambient::Plane;
}

std::string describe(const SubmetryDescriptor& d) {
  std::ostringstream os;
  std::visit(overloaded{
                 [&](const OrthogonalProjection& p) { os << "orthogonal_projection(axis=" << p.axis_angle << ")"; },
                 [&](const DistanceToConvex& c) {
                   const char* names[] = {"point", "segment", "half_line"};
                   os << "distance_to_convex(" << names[c.seed.index()] << ")";
                 },
                 [&](const SignedDistanceSigmaPlane& s) {
                   os << "sigma_plane(a=" << s.params.a << ", h=" << s.params.h << ")";
                 },
                 [&](const SphereRotation& r) {
                   os << "sphere_rotation(pole=" << r.pole.v.x() << "," << r.pole.v.y() << "," << r.pole.v.z() << ")";
                 },
                 [&](const SignedDistanceSigmaSphere& s) {
                   os << "sigma_sphere(k=" << s.params.k << ", s=" << s.params.s << ")";
                 },
             },
             d);
  return os.str();
}

double evaluate(const SubmetryDescriptor& d, const Point& p) {
  return std::visit(overloaded{
                        [&](const OrthogonalProjection& o) {
                          const PlanePoint& q = plane_arg(p);
                          return q.x * std::cos(o.axis_angle) + q.y * std::sin(o.axis_angle);
                        },
                        [&](const DistanceToConvex& c) { return distance_to_seed(c.seed, plane_arg(p)); },
                        [&](const SignedDistanceSigmaPlane& s) { return signed_distance_plane(s.params, plane_arg(p)); },
                        [&](const SphereRotation& r) { return distance(sphere_arg(p), r.pole); },
                        [&](const SignedDistanceSigmaSphere& s) {
                          return signed_distance_sphere(s.params, sphere_arg(p));
                        },
                    },
                    d);
}

FiberSet fiber(const SubmetryDescriptor& d, double y, double window_radius) {
  validate(d);
  require_in_base(d, y);
  FiberSet f = std::visit(
      overloaded{
          [&](const OrthogonalProjection& o) {
            if (!(std::abs(y) < window_radius)) throw InvalidInput("projection fiber lies outside the window");
            const Vec2 u(std::cos(o.axis_angle), std::sin(o.axis_angle));
            const Vec2 n(-u.y(), u.x());
            const double w = std::sqrt(window_radius * window_radius - y * y);
            FiberSet out;
            out.ambient = Ambient::Plane;
            out.level = y;
            out.pieces.push_back(LineSegment{PlanePoint(y * u - w * n), PlanePoint(y * u + w * n)});
            return out;
          },
          [&](const DistanceToConvex& c) { return convex_fiber(c.seed, y, window_radius); },
          [&](const SignedDistanceSigmaPlane& s) { return fiber_plane(s.params, y, window_radius); },
          [&](const SphereRotation& r) {
            FiberSet out;
            out.ambient = Ambient::Sphere;
            out.level = y;
            if (y <= 0) out.singular_points.push_back(r.pole);
            else if (y >= kPi) out.singular_points.push_back(SpherePoint(-r.pole.v));
            else out.pieces.push_back(make_spherical_arc(r.pole, y, some_perpendicular(r.pole.v), 2 * kPi));
            return out;
          },
          [&](const SignedDistanceSigmaSphere& s) { return fiber_sphere(s.params, y); },
      },
      d);
  if (f.components.empty()) assemble_components(f);
  return f;
}

Space1D base_space(const SubmetryDescriptor& d) {
  return std::visit(overloaded{
                        [](const OrthogonalProjection&) -> Space1D { return Line{}; },
                        [](const DistanceToConvex&) -> Space1D { return HalfLine{0.0}; },
                        [](const SignedDistanceSigmaPlane& s) -> Space1D { return Segment{-s.params.a, s.params.a}; },
                        [](const SphereRotation&) -> Space1D { return Segment{0.0, kPi}; },
                        [](const SignedDistanceSigmaSphere& s) -> Space1D {
                          return Segment{-s.params.a(), s.params.a()};
                        },
                    },
                    d);
}

SingularSet singular_set(const SubmetryDescriptor& d) {
  SingularSet out;
  if (const auto* sp = std::get_if<SignedDistanceSigmaPlane>(&d)) {
    out.points = {sp->params.x0(), sp->params.y0()};
  } else if (const auto* ss = std::get_if<SignedDistanceSigmaSphere>(&d)) {
    // Degenerate (radius 0 and radius pi) solutions of the radial level
    // equation in each hemisphere.
    const SphereSigmaParams& p = ss->params;
    const double a = p.a();
    for (const auto& [center, sign] : {std::pair{p.x0(), 1.0}, std::pair{p.y0(), -1.0}}) {
      for (double level : {a, -a}) {
        for (double u : fold_wave_roots(sign * level, a, kPi)) {
          if (u == 0.0) out.points.push_back(center);
          else if (u == kPi) out.points.push_back(SpherePoint(-center.v));
        }
      }
    }
  }
  return out;
}

std::optional<double> middle_level(const SubmetryDescriptor& d) {
  const Space1D base = base_space(d);
  if (std::holds_alternative<Line>(base)) return 0.0;
  if (const auto* s = std::get_if<Segment>(&base)) return 0.5 * (s->lo + s->hi);
  return std::nullopt;
}

bool sphere_curves_congruent(const LeafCurve& a, const LeafCurve& b, double tol) {
  if (a.ambient != Ambient::Sphere || b.ambient != Ambient::Sphere) return false;
  if (a.pieces.size() != b.pieces.size()) return false;
  const std::vector<Vec3> ca = distinct_centers(a, tol);
  const std::vector<Vec3> cb = distinct_centers(b, tol);
  if (ca.size() != 2 || cb.size() != 2) return false;
  const auto fa = pair_frame(ca[0], ca[1]);
  if (!fa) return false;
  for (int order = 0; order < 2; ++order) {
    const Vec3& t1 = order == 0 ? cb[0] : cb[1];
    const Vec3& t2 = order == 0 ? cb[1] : cb[0];
    if (std::abs(ca[0].dot(ca[1]) - t1.dot(t2)) > tol) continue;
    const auto fb = pair_frame(t1, t2);
    if (!fb) continue;
    for (double mirror : {1.0, -1.0}) {
      const Eigen::Matrix3d q = *fb * Eigen::Vector3d(1, 1, mirror).asDiagonal() * fa->transpose();
      std::vector<CurvePiece> moved;
      moved.reserve(a.pieces.size());
      for (const auto& piece : a.pieces) moved.push_back(transform_piece(q, piece));
      if (same_piece_set(moved, b.pieces, tol)) return true;
    }
  }
  return false;
}

std::vector<SubmetryDescriptor> enumerate_sphere(int k_max) {
  if (k_max < 1) throw InvalidInput("enumerate_sphere: k_max must be at least 1");
  std::vector<SubmetryDescriptor> out;
  out.push_back(SphereRotation{SpherePoint(Vec3::UnitZ())});
  for (int k = 2; k <= k_max; ++k) {
    std::vector<LeafCurve> representatives;
    for (int s = 1; s <= 2 * k - 1; s += 2) {
      if (std::gcd(s, k) != 1) continue;
      const SphereSigmaParams params{k, s};
      LeafCurve curve = build_sigma_sphere(params);
      const bool known = std::any_of(representatives.begin(), representatives.end(),
                                     [&](const LeafCurve& rep) { return sphere_curves_congruent(curve, rep); });
      if (known) continue;
      representatives.push_back(std::move(curve));
      out.push_back(SignedDistanceSigmaSphere{params});
    }
  }
  return out;
}

}  // namespace submetry
