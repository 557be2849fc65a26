#pragma once

#include <Eigen/Dense>

#include <numbers>
#include <stdexcept>
#include <string>
#include <variant>

namespace submetry {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

inline constexpr double kPi = std::numbers::pi;

/// Raised for any argument that violates an operation's precondition.
class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

enum class Ambient { Plane, Sphere };

const char* to_string(Ambient ambient);

struct PlanePoint {
  double x = 0.0;
  double y = 0.0;

  PlanePoint() = default;
  PlanePoint(double px, double py);
  explicit PlanePoint(const Vec2& v) : PlanePoint(v.x(), v.y()) {}

  Vec2 vec() const { return {x, y}; }
};

/// A point of the unit sphere. The stored vector is unit within 1e-12.
struct SpherePoint {
  Vec3 v = Vec3::UnitZ();

  SpherePoint() = default;
  /// Accepts a vector that is already unit (within 1e-12).
  explicit SpherePoint(const Vec3& unit);
  static SpherePoint normalized(const Vec3& any);
};

using Point = std::variant<PlanePoint, SpherePoint>;

Ambient ambient_of(const Point& p);

struct PlaneTangent {
  PlanePoint base;
  Vec2 dir = Vec2::UnitX();
};

struct SphereTangent {
  SpherePoint base;
  Vec3 dir = Vec3::UnitX();
};

using UnitTangent = std::variant<PlaneTangent, SphereTangent>;

/// Builds a tangent after normalizing `dir` (and projecting it to the tangent
/// plane on the sphere). Throws on a zero direction.
PlaneTangent make_tangent(const PlanePoint& base, const Vec2& dir);
SphereTangent make_tangent(const SpherePoint& base, const Vec3& dir);

struct LineSegment {
  PlanePoint p;
  PlanePoint q;
};

struct CircularArc {
  PlanePoint center;
  double radius = 1.0;
  double start_angle = 0.0;  // (-pi, pi]
  double sweep = 0.0;        // signed, |sweep| <= 2pi
};

/// Small circle arc: the points at angular distance `angular_radius` from
/// `center`, swept from `start_dir` by `sweep` around `center` (right-handed).
struct SphericalArc {
  SpherePoint center;
  double angular_radius = kPi / 2;
  Vec3 start_dir = Vec3::UnitX();  // unit, orthogonal to center
  double sweep = 0.0;
};

using CurvePiece = std::variant<LineSegment, CircularArc, SphericalArc>;

LineSegment make_segment(const PlanePoint& p, const PlanePoint& q);
CircularArc make_arc(const PlanePoint& center, double radius, double start_angle, double sweep);
SphericalArc make_spherical_arc(const SpherePoint& center, double angular_radius,
                                const Vec3& start_dir, double sweep);

Ambient ambient_of(const CurvePiece& piece);

/// Maps an angle to (-pi, pi].
double normalize_angle(double angle);

/// Geodesic distance on the ambient space; angles in [0, pi] on the sphere.
double distance(const PlanePoint& p, const PlanePoint& q);
double distance(const SpherePoint& p, const SpherePoint& q);
double distance(const Point& p, const Point& q);

/// Numerically stable angle between two nonzero vectors.
double angle_between(const Vec3& u, const Vec3& v);

struct FootPoint {
  double distance = 0.0;
  Point foot;
  bool foot_is_endpoint = false;
  double param = 0.0;  // normalized parameter of the foot in [0, 1]
};

/// Exact closest point on a piece. Ties go to the smaller parameter.
FootPoint distance_to_piece(const Point& point, const CurvePiece& piece);

SpherePoint sphere_geodesic(const SpherePoint& start, const Vec3& dir, double t);
SpherePoint sphere_geodesic(const SphereTangent& tangent, double t);

struct EndpointData {
  Point start;
  UnitTangent start_tangent;
  Point end;
  UnitTangent end_tangent;
};

EndpointData piece_endpoint_data(const CurvePiece& piece);

/// Constant-speed parametrization, s in [0, 1].
Point point_on_piece(const CurvePiece& piece, double s);
UnitTangent tangent_on_piece(const CurvePiece& piece, double s);

/// Unit normal to the left of the direction of travel. On the sphere this is
/// base x tangent.
UnitTangent left_normal_on_piece(const CurvePiece& piece, double s);

double piece_length(const CurvePiece& piece);

/// Same point set traversed in the opposite direction.
CurvePiece reverse_piece(const CurvePiece& piece);

/// Moves from `base` along `dir` for distance t (straight line or great circle).
Point move_along(const UnitTangent& tangent, double t);

/// Angle between two tangent directions based at (nearly) the same point.
double tangent_mismatch(const UnitTangent& a, const UnitTangent& b);

Vec3 embed(const Point& p);  // plane points get z = 0

}  // namespace submetry
