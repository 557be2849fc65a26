#pragma once

#include "submetry/geometry.hpp"
#include "submetry/topology.hpp"

#include <cstddef>
#include <variant>
#include <vector>

namespace submetry {

/// Triangle wave of period 4a with f(0) = a and zeros at a + 2ma:
///   f(u) = |wrap(u, 4a) - 2a| - a.
double fold_wave(double u, double a);

/// Derivative of fold_wave away from its kinks (u = 2ma): -1 or +1.
double fold_wave_slope(double u, double a);

/// All u in [0, u_max] with fold_wave(u, a) == level, ascending. The root
/// u_max itself is included when it is a root up to rounding.
std::vector<double> fold_wave_roots(double level, double a, double u_max);

/// Plane leaf parameters. Canonical placement: l_a = {y = h/2} bounds the upper
/// cap, l_{-a} = {y = -h/2} the lower cap, x0 = (0, h/2), y0 = (2a, -h/2).
struct PlaneSigmaParams {
  double a = 1.0;
  double h = 0.0;

  void validate() const;
  PlanePoint x0() const { return {0.0, h / 2}; }
  PlanePoint y0() const { return {2 * a, -h / 2}; }
  double center_distance() const;  // sqrt(4a^2 + h^2)
};

/// Sphere leaf parameters: a = pi/(2k), x0 = (1,0,0), y0 on the equator at
/// longitude 2as; the upper hemisphere z >= 0 carries the arcs about x0.
struct SphereSigmaParams {
  int k = 2;
  int s = 1;

  /// Requires k >= 2, odd s in [1, 2k-1] and gcd(s, k) == 1. With
  /// `allow_disconnected` only k >= 2 and s in [1, 2k-1] are enforced.
  void validate(bool allow_disconnected = false) const;
  double a() const;
  SpherePoint x0() const;
  SpherePoint y0() const;
};

struct Junction {
  std::size_t from = 0;  // end of this piece ...
  std::size_t to = 0;    // ... meets the start of this one
  Point point;
};

struct CurveMetadata {
  std::variant<std::monostate, PlaneSigmaParams, SphereSigmaParams> params;
  double window_radius = 0.0;  // plane only
  bool bypass = false;         // sphere built without the connectivity guard
};

/// An oriented piecewise curve. orientation[i] = +1 when the positive side of
/// the signed distance lies along the left normal of piece i, -1 otherwise.
struct LeafCurve {
  Ambient ambient = Ambient::Plane;
  std::vector<CurvePiece> pieces;
  std::vector<Junction> junctions;
  std::vector<int> orientation;
  CurveMetadata metadata;
};

enum class Region { UpperCap, LowerCap, Strip, UpperHemisphere, LowerHemisphere };

const char* to_string(Region region);

struct RegionCoordinate {
  Region region = Region::UpperCap;
  double u = 0.0;
};

/// A single fiber P^{-1}(level): its pieces, isolated points and components.
struct FiberSet {
  Ambient ambient = Ambient::Plane;
  double level = 0.0;
  std::vector<CurvePiece> pieces;
  std::vector<Component> components;
  std::vector<Point> singular_points;
};

/// Recomputes `components` from the pieces and points.
void assemble_components(FiberSet& fiber, double tol = kEndpointTol);

RegionCoordinate region_coordinate_plane(const PlaneSigmaParams& params, const PlanePoint& p);
RegionCoordinate region_coordinate_sphere(const SphereSigmaParams& params, const SpherePoint& p);

double signed_distance_plane(const PlaneSigmaParams& params, const PlanePoint& p);

/// Upper hemisphere: f(d(p, x0)); lower: -f(d(p, y0)).
double signed_distance_sphere(const SphereSigmaParams& params, const SpherePoint& p);
double signed_distance_sphere_upper(const SphereSigmaParams& params, const SpherePoint& p);
double signed_distance_sphere_lower(const SphereSigmaParams& params, const SpherePoint& p);

LeafCurve build_sigma_plane(const PlaneSigmaParams& params, double window_radius);

/// Same construction with arbitrary region centers: upper arcs about x0 in
/// {y >= x0.y}, lower arcs about y0 in {y <= y0.y}, strip segments joining the
/// corresponding arc endpoints. Used to study perturbed (non-C^1) layouts.
LeafCurve build_sigma_plane_from_centers(double a, const PlanePoint& x0, const PlanePoint& y0,
                                         double window_radius);

LeafCurve build_sigma_sphere(const SphereSigmaParams& params, bool bypass = false);

FiberSet fiber_plane(const PlaneSigmaParams& params, double level, double window_radius);
FiberSet fiber_sphere(const SphereSigmaParams& params, double level);

}  // namespace submetry
