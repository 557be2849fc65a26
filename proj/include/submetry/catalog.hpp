#pragma once

#include "submetry/geometry.hpp"
#include "submetry/leaf.hpp"
#include "submetry/space1d.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace submetry {

struct PointSeed {
  PlanePoint p;
};
struct SegmentSeed {
  PlanePoint p;
  PlanePoint q;
};
struct HalfLineSeed {
  PlanePoint origin;
  Vec2 dir = Vec2::UnitX();  // unit
};

/// Closed convex nowhere-dense subsets of the plane whose distance function has
/// connected fibers. A full line is deliberately absent: its level sets are
/// pairs of lines.
using ConvexSeed = std::variant<PointSeed, SegmentSeed, HalfLineSeed>;

struct OrthogonalProjection {
  double axis_angle = 0.0;
};
struct DistanceToConvex {
  ConvexSeed seed;
};
struct SignedDistanceSigmaPlane {
  PlaneSigmaParams params;
};
struct SphereRotation {
  SpherePoint pole;
};
struct SignedDistanceSigmaSphere {
  SphereSigmaParams params;
};

/// The submetries with connected fibers of the plane and the round sphere onto
/// one-dimensional bases.
using SubmetryDescriptor = std::variant<OrthogonalProjection, DistanceToConvex, SignedDistanceSigmaPlane,
                                        SphereRotation, SignedDistanceSigmaSphere>;

struct SingularSet {
  std::vector<Point> points;
};

void validate(const SubmetryDescriptor& d);
Ambient ambient_of(const SubmetryDescriptor& d);
std::string describe(const SubmetryDescriptor& d);

double evaluate(const SubmetryDescriptor& d, const Point& p);

/// Fiber over y. Unbounded plane fibers are clipped to the disk of
/// `window_radius` about the origin; sigma-plane fibers keep every arc of
/// radius <= window_radius.
FiberSet fiber(const SubmetryDescriptor& d, double y, double window_radius = 10.0);

Space1D base_space(const SubmetryDescriptor& d);
SingularSet singular_set(const SubmetryDescriptor& d);

/// Level whose fiber is the natural starting leaf for horizontal traces: the
/// midpoint of a segment base, 0 on the line; nullopt for half-line bases.
std::optional<double> middle_level(const SubmetryDescriptor& d);

/// Rotation, then one sigma-sphere representative per isometry class for each
/// 2 <= k <= k_max.
std::vector<SubmetryDescriptor> enumerate_sphere(int k_max);

/// True when some isometry of the sphere maps the point set of `a` onto `b`.
bool sphere_curves_congruent(const LeafCurve& a, const LeafCurve& b, double tol = 1e-9);

}  // namespace submetry
