#include "submetry/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace submetry {

namespace {

constexpr double kUnitTol = 1e-12;
constexpr double kTwoPi = 2.0 * kPi;

double wrap_two_pi(double angle) {
  double r = std::fmod(angle, kTwoPi);
  if (r < 0) r += kTwoPi;
  return r;
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw InvalidInput(std::string(what) + " must be finite");
}

Vec2 rotate_left(const Vec2& v) { return {-v.y(), v.x()}; }

// Frame (e1, e2) of a spherical arc: e2 = center x e1.
struct ArcFrame {
  Vec3 c, e1, e2;
};

ArcFrame frame_of(const SphericalArc& arc) {
  return {arc.center.v, arc.start_dir, arc.center.v.cross(arc.start_dir)};
}

Vec3 spherical_arc_point(const SphericalArc& arc, double theta) {
  const ArcFrame f = frame_of(arc);
  const double cr = std::cos(arc.angular_radius);
  const double sr = std::sin(arc.angular_radius);
  return cr * f.c + sr * (std::cos(theta) * f.e1 + std::sin(theta) * f.e2);
}

Vec3 spherical_arc_tangent(const SphericalArc& arc, double theta) {
  const ArcFrame f = frame_of(arc);
  const double sign = arc.sweep >= 0 ? 1.0 : -1.0;
  return sign * (-std::sin(theta) * f.e1 + std::cos(theta) * f.e2);
}

const PlanePoint& as_plane(const Point& p, const char* op) {
  if (const auto* pp = std::get_if<PlanePoint>(&p)) return *pp;
  throw InvalidInput(std::string(op) + ": expected a plane point");
}

const SpherePoint& as_sphere(const Point& p, const char* op) {
  if (const auto* sp = std::get_if<SpherePoint>(&p)) return *sp;
  throw InvalidInput(std::string(op) + ": expected a sphere point");
}

FootPoint foot_on_segment(const PlanePoint& point, const LineSegment& seg) {
  const Vec2 p = seg.p.vec();
  const Vec2 d = seg.q.vec() - p;
  const double len2 = d.squaredNorm();
  double s = (point.vec() - p).dot(d) / len2;
  bool endpoint = false;
  if (s <= 0.0) {
    s = 0.0;
    endpoint = true;
  } else if (s >= 1.0) {
    s = 1.0;
    endpoint = true;
  }
  const Vec2 foot = p + s * d;
  return {(point.vec() - foot).norm(), PlanePoint(foot), endpoint, s};
}

FootPoint foot_on_arc(const PlanePoint& point, const CircularArc& arc) {
  const Vec2 c = arc.center.vec();
  const Vec2 d = point.vec() - c;
  const double rho = d.norm();
  const double span = std::abs(arc.sweep);
  const double sign = arc.sweep >= 0 ? 1.0 : -1.0;
  auto at = [&](double s) {
    const double ang = arc.start_angle + s * arc.sweep;
    return Vec2(c + arc.radius * Vec2(std::cos(ang), std::sin(ang)));
  };
  if (rho == 0.0) {
    return {arc.radius, PlanePoint(at(0.0)), true, 0.0};
  }
  const double delta = wrap_two_pi(sign * (std::atan2(d.y(), d.x()) - arc.start_angle));
  if (delta <= span) {
    const double s = delta / span;
    const Vec2 foot = c + (arc.radius / rho) * d;
    return {std::abs(rho - arc.radius), PlanePoint(foot), s == 0.0 || s == 1.0, s};
  }
  const Vec2 a = at(0.0);
  const Vec2 b = at(1.0);
  const double da = (point.vec() - a).norm();
  const double db = (point.vec() - b).norm();
  if (db < da) return {db, PlanePoint(b), true, 1.0};
  return {da, PlanePoint(a), true, 0.0};
}

FootPoint foot_on_spherical_arc(const SpherePoint& point, const SphericalArc& arc) {
  const ArcFrame f = frame_of(arc);
  const Vec3& p = point.v;
  const double beta = p.dot(f.e1);
  const double gamma = p.dot(f.e2);
  const double span = std::abs(arc.sweep);
  const double sign = arc.sweep >= 0 ? 1.0 : -1.0;
  auto at = [&](double s) { return SpherePoint::normalized(spherical_arc_point(arc, s * arc.sweep)); };
  if (std::hypot(beta, gamma) < 1e-15) {
    const SpherePoint q = at(0.0);
    return {angle_between(p, q.v), q, true, 0.0};
  }
  const double delta = wrap_two_pi(sign * std::atan2(gamma, beta));
  if (delta <= span) {
    const double s = delta / span;
    const SpherePoint q = at(s);
    return {angle_between(p, q.v), q, s == 0.0 || s == 1.0, s};
  }
  const SpherePoint a = at(0.0);
  const SpherePoint b = at(1.0);
  const double da = angle_between(p, a.v);
  const double db = angle_between(p, b.v);
  if (db < da) return {db, b, true, 1.0};
  return {da, a, true, 0.0};
}

}  // namespace

const char* to_string(Ambient ambient) { return ambient == Ambient::Plane ? "plane" : "sphere"; }

PlanePoint::PlanePoint(double px, double py) : x(px), y(py) {
  require_finite(px, "PlanePoint.x");
  require_finite(py, "PlanePoint.y");
}

SpherePoint::SpherePoint(const Vec3& unit) : v(unit) {
  if (!unit.allFinite() || std::abs(unit.norm() - 1.0) > kUnitTol) {
    std::ostringstream os;
    os << "SpherePoint must be unit, got norm " << unit.norm();
    throw InvalidInput(os.str());
  }
}

SpherePoint SpherePoint::normalized(const Vec3& any) {
  const double n = any.norm();
  if (!any.allFinite() || n == 0.0) throw InvalidInput("cannot normalize a zero or non-finite vector");
  return SpherePoint(any / n);
}

Ambient ambient_of(const Point& p) {
  return std::holds_alternative<PlanePoint>(p) ? Ambient::Plane : Ambient::Sphere;
}

PlaneTangent make_tangent(const PlanePoint& base, const Vec2& dir) {
  const double n = dir.norm();
  if (!dir.allFinite() || n == 0.0) throw InvalidInput("tangent direction must be nonzero");
  return {base, dir / n};
}

SphereTangent make_tangent(const SpherePoint& base, const Vec3& dir) {
  const Vec3 proj = dir - dir.dot(base.v) * base.v;
  const double n = proj.norm();
  if (!proj.allFinite() || n < 1e-14) throw InvalidInput("tangent direction must be nonzero and not radial");
  return {base, proj / n};
}

LineSegment make_segment(const PlanePoint& p, const PlanePoint& q) {
  if ((p.vec() - q.vec()).norm() == 0.0) throw InvalidInput("segment endpoints must differ");
  return {p, q};
}

CircularArc make_arc(const PlanePoint& center, double radius, double start_angle, double sweep) {
  require_finite(radius, "arc radius");
  require_finite(start_angle, "arc start angle");
  require_finite(sweep, "arc sweep");
  if (radius <= 0.0) throw InvalidInput("arc radius must be positive");
  if (sweep == 0.0 || std::abs(sweep) > kTwoPi * (1 + 1e-15)) throw InvalidInput("arc sweep must satisfy 0 < |sweep| <= 2pi");
  return {center, radius, normalize_angle(start_angle), sweep};
}

SphericalArc make_spherical_arc(const SpherePoint& center, double angular_radius, const Vec3& start_dir,
                                double sweep) {
  require_finite(angular_radius, "spherical arc radius");
  require_finite(sweep, "spherical arc sweep");
  if (angular_radius <= 0.0 || angular_radius >= kPi) throw InvalidInput("angular radius must lie in (0, pi)");
  if (sweep == 0.0 || std::abs(sweep) > kTwoPi * (1 + 1e-15)) throw InvalidInput("arc sweep must satisfy 0 < |sweep| <= 2pi");
  const SphereTangent t = make_tangent(center, start_dir);
  return {center, angular_radius, t.dir, sweep};
}

Ambient ambient_of(const CurvePiece& piece) {
  return std::holds_alternative<SphericalArc>(piece) ? Ambient::Sphere : Ambient::Plane;
}

double normalize_angle(double angle) {
  double r = std::remainder(angle, kTwoPi);  // [-pi, pi]
  if (r <= -kPi) r += kTwoPi;
  return r;
}

double angle_between(const Vec3& u, const Vec3& v) { return std::atan2(u.cross(v).norm(), u.dot(v)); }

double distance(const PlanePoint& p, const PlanePoint& q) { return (p.vec() - q.vec()).norm(); }

double distance(const SpherePoint& p, const SpherePoint& q) { return angle_between(p.v, q.v); }

double distance(const Point& p, const Point& q) {
  if (ambient_of(p) != ambient_of(q)) throw InvalidInput("distance: points live on different ambient spaces");
  if (ambient_of(p) == Ambient::Plane) return distance(std::get<PlanePoint>(p), std::get<PlanePoint>(q));
  return distance(std::get<SpherePoint>(p), std::get<SpherePoint>(q));
}

FootPoint distance_to_piece(const Point& point, const CurvePiece& piece) {
  return std::visit(
      [&](const auto& pc) -> FootPoint {
        using T = std::decay_t<decltype(pc)>;
        if constexpr (std::is_same_v<T, LineSegment>) {
          return foot_on_segment(as_plane(point, "distance_to_piece"), pc);
        } else if constexpr (std::is_same_v<T, CircularArc>) {
          return foot_on_arc(as_plane(point, "distance_to_piece"), pc);
        } else {
          return foot_on_spherical_arc(as_sphere(point, "distance_to_piece"), pc);
        }
      },
      piece);
}

SpherePoint sphere_geodesic(const SpherePoint& start, const Vec3& dir, double t) {
  return SpherePoint::normalized(std::cos(t) * start.v + std::sin(t) * dir);
}

SpherePoint sphere_geodesic(const SphereTangent& tangent, double t) {
  return sphere_geodesic(tangent.base, tangent.dir, t);
}

Point point_on_piece(const CurvePiece& piece, double s) {
  if (!(s >= 0.0 && s <= 1.0)) throw InvalidInput("point_on_piece: parameter must lie in [0, 1]");
  return std::visit(
      [&](const auto& pc) -> Point {
        using T = std::decay_t<decltype(pc)>;
        if constexpr (std::is_same_v<T, LineSegment>) {
          if (s == 0.0) return pc.p;
          if (s == 1.0) return pc.q;
          return PlanePoint(pc.p.vec() + s * (pc.q.vec() - pc.p.vec()));
        } else if constexpr (std::is_same_v<T, CircularArc>) {
          const double ang = pc.start_angle + s * pc.sweep;
          return PlanePoint(pc.center.vec() + pc.radius * Vec2(std::cos(ang), std::sin(ang)));
        } else {
          return SpherePoint::normalized(spherical_arc_point(pc, s * pc.sweep));
        }
      },
      piece);
}

UnitTangent tangent_on_piece(const CurvePiece& piece, double s) {
  return std::visit(
      [&](const auto& pc) -> UnitTangent {
        using T = std::decay_t<decltype(pc)>;
        const Point base = point_on_piece(piece, s);
        if constexpr (std::is_same_v<T, LineSegment>) {
          return make_tangent(std::get<PlanePoint>(base), pc.q.vec() - pc.p.vec());
        } else if constexpr (std::is_same_v<T, CircularArc>) {
          const double ang = pc.start_angle + s * pc.sweep;
          const double sign = pc.sweep >= 0 ? 1.0 : -1.0;
          return PlaneTangent{std::get<PlanePoint>(base), sign * Vec2(-std::sin(ang), std::cos(ang))};
        } else {
          const SpherePoint& b = std::get<SpherePoint>(base);
          return make_tangent(b, spherical_arc_tangent(pc, s * pc.sweep));
        }
      },
      piece);
}

UnitTangent left_normal_on_piece(const CurvePiece& piece, double s) {
  const UnitTangent t = tangent_on_piece(piece, s);
  if (const auto* pt = std::get_if<PlaneTangent>(&t)) return PlaneTangent{pt->base, rotate_left(pt->dir)};
  const auto& st = std::get<SphereTangent>(t);
  return SphereTangent{st.base, st.base.v.cross(st.dir).normalized()};
}

EndpointData piece_endpoint_data(const CurvePiece& piece) {
  const UnitTangent t0 = tangent_on_piece(piece, 0.0);
  const UnitTangent t1 = tangent_on_piece(piece, 1.0);
  return {point_on_piece(piece, 0.0), t0, point_on_piece(piece, 1.0), t1};
}

double piece_length(const CurvePiece& piece) {
  return std::visit(
      [](const auto& pc) -> double {
        using T = std::decay_t<decltype(pc)>;
        if constexpr (std::is_same_v<T, LineSegment>) {
          return (pc.q.vec() - pc.p.vec()).norm();
        } else if constexpr (std::is_same_v<T, CircularArc>) {
          return pc.radius * std::abs(pc.sweep);
        } else {
          return std::sin(pc.angular_radius) * std::abs(pc.sweep);
        }
      },
      piece);
}

CurvePiece reverse_piece(const CurvePiece& piece) {
  return std::visit(
      [](const auto& pc) -> CurvePiece {
        using T = std::decay_t<decltype(pc)>;
        if constexpr (std::is_same_v<T, LineSegment>) {
          return LineSegment{pc.q, pc.p};
        } else if constexpr (std::is_same_v<T, CircularArc>) {
          return CircularArc{pc.center, pc.radius, normalize_angle(pc.start_angle + pc.sweep), -pc.sweep};
        } else {
          const ArcFrame f = frame_of(pc);
          const Vec3 dir = std::cos(pc.sweep) * f.e1 + std::sin(pc.sweep) * f.e2;
          return SphericalArc{pc.center, pc.angular_radius, dir.normalized(), -pc.sweep};
        }
      },
      piece);
}

Point move_along(const UnitTangent& tangent, double t) {
  if (const auto* pt = std::get_if<PlaneTangent>(&tangent)) return PlanePoint(pt->base.vec() + t * pt->dir);
  return sphere_geodesic(std::get<SphereTangent>(tangent), t);
}

double tangent_mismatch(const UnitTangent& a, const UnitTangent& b) {
  if (a.index() != b.index()) throw InvalidInput("tangent_mismatch: tangents live on different ambient spaces");
  if (const auto* pa = std::get_if<PlaneTangent>(&a)) {
    const auto& pb = std::get<PlaneTangent>(b);
    const double cross = pa->dir.x() * pb.dir.y() - pa->dir.y() * pb.dir.x();
    return std::abs(std::atan2(cross, pa->dir.dot(pb.dir)));
  }
  return angle_between(std::get<SphereTangent>(a).dir, std::get<SphereTangent>(b).dir);
}

Vec3 embed(const Point& p) {
  if (const auto* pp = std::get_if<PlanePoint>(&p)) return {pp->x, pp->y, 0.0};
  return std::get<SpherePoint>(p).v;
}

}  // namespace submetry
