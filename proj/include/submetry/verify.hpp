#pragma once

#include "submetry/catalog.hpp"
#include "submetry/leaf.hpp"
#include "submetry/quotient.hpp"

#include <json.hpp>

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

namespace submetry {

struct ToleranceProfile {
  double tol_pos = 1e-10;
  double tol_tan = 1e-10;
  double tol_metric = 1e-6;
  long oracle_chords = 100000;
  long samples = 10000;
  std::uint64_t rng_seed = 20240501;

  void validate() const;
};

struct VerificationReport {
  std::string check_name;
  bool pass = false;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  std::vector<Point> witness;
  nlohmann::json parameters = nlohmann::json::object();
  std::uint64_t seed = 0;
  std::vector<std::string> events;
};

using AnySubmetry = std::variant<SubmetryDescriptor, ComposedSubmetry>;

Ambient submetry_ambient(const AnySubmetry& s);
double submetry_evaluate(const AnySubmetry& s, const Point& p);
FiberSet submetry_fiber(const AnySubmetry& s, double y, double window_radius);
Space1D submetry_base(const AnySubmetry& s);
std::string submetry_describe(const AnySubmetry& s);

/// Sample points distributed over the pieces of a fiber proportionally to
/// length; isolated points are always included.
std::vector<Point> sample_fiber(const FiberSet& f, long count, std::mt19937_64& rng);

/// Uniform sample of the closed ball of radius r about x.
Point sample_ball(const Point& x, double r, std::mt19937_64& rng);

VerificationReport check_junctions_c1(const LeafCurve& curve, const ToleranceProfile& tol);

/// Fiber-to-fiber distances from raw piece geometry. On the plane, probes are
/// kept only where the window-clipped target fiber is complete.
VerificationReport check_equidistance(const AnySubmetry& s, double level1, double level2,
                                      const ToleranceProfile& tol, double window_radius = 10.0);

VerificationReport check_lipschitz_and_ball(const AnySubmetry& s, const Point& x, double r,
                                            const ToleranceProfile& tol);

/// 1-Lipschitz and ball-surjectivity of a discrete map on `tol.samples`
/// random (x, r) pairs; images are sampled on a grid of step resolution / 2.
VerificationReport check_map_submetry(const DiscreteMap1D& m, const ToleranceProfile& tol,
                                      double resolution = 1e-3);

struct TraceResult {
  std::vector<double> t;
  std::vector<Point> path;
  std::vector<double> profile;
  std::vector<double> predicted;
  std::optional<double> singular_hit;  // parameter where the geodesic meets a singular point
  VerificationReport report;
};

/// Follows the fiber-normal geodesic from `start` and compares the level
/// profile with the reflected triangle wave in the base.
TraceResult trace_horizontal(const SubmetryDescriptor& d, const Point& start, bool outward, double t_max,
                             double dt, const ToleranceProfile& tol);

/// Nearest-point uniqueness for probes within probe_dist. Random normal
/// probes are complemented by probes at the focal points of every arc.
VerificationReport check_positive_reach(const FiberSet& f, double probe_dist, const ToleranceProfile& tol);

/// Smallest distance along a normal ray at which the nearest point stops being
/// the ray's foot, over the same probe family, capped at probe_max.
double estimate_reach(const FiberSet& f, double probe_max, const ToleranceProfile& tol);

std::size_t check_connectivity(const FiberSet& f, double tol_pos = kEndpointTol);
std::size_t check_connectivity(const LeafCurve& curve, double tol_pos = kEndpointTol);

/// Signed distance to a curve approximated by chords: straight chords on the
/// plane, great-circle chords on the sphere, searched through a bounding-box
/// tree built once for the curve.
class ChordOracle {
 public:
  ChordOracle(const LeafCurve& curve, long chords_per_piece);
  ~ChordOracle();
  ChordOracle(ChordOracle&&) noexcept;
  ChordOracle& operator=(ChordOracle&&) noexcept;

  double signed_distance(const Point& p) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

double brute_force_signed_distance(const LeafCurve& curve, const Point& p, long n_chords);

}  // namespace submetry
