#include "submetry/suite.hpp"

#include "submetry/serialize.hpp"

#include <algorithm>

namespace submetry {

namespace {

bool wants(const std::string& suite, const char* check) { return suite == "full" || suite == check; }

void require_known(const std::string& suite) {
  static const char* known[] = {"full", "c1", "connectivity", "equidistance", "ball", "trace", "reach"};
  if (std::none_of(std::begin(known), std::end(known), [&](const char* k) { return suite == k; })) {
    throw InvalidInput("unknown suite '" + suite + "'");
  }
}

std::vector<std::pair<double, double>> level_pairs(const Space1D& base) {
  return std::visit(
      [](const auto& b) -> std::vector<std::pair<double, double>> {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, Segment>) {
          const double len = b.hi - b.lo;
          const double mid = 0.5 * (b.lo + b.hi);
          return {{mid, b.lo + 0.75 * len}, {b.lo, b.hi}, {b.lo + 0.1 * len, b.hi - 0.35 * len}};
        } else if constexpr (std::is_same_v<T, HalfLine>) {
          return {{b.origin, b.origin + 1.0}, {b.origin + 0.5, b.origin + 2.0}};
        } else if constexpr (std::is_same_v<T, Circle>) {
          return {{0.0, b.length / 4}, {0.1 * b.length, 0.6 * b.length}};
        } else {
          return {{0.0, 1.0}, {-0.5, 1.5}};
        }
      },
      base);
}

double base_scale(const Space1D& base) {
  if (const auto* s = std::get_if<Segment>(&base)) return s->hi - s->lo;
  if (const auto* c = std::get_if<Circle>(&base)) return c->length;
  return 2.0;
}

std::optional<double> middle_of(const Space1D& base) {
  if (std::holds_alternative<Line>(base)) return 0.0;
  if (const auto* s = std::get_if<Segment>(&base)) return 0.5 * (s->lo + s->hi);
  return std::nullopt;
}

// First piece point of the fiber closest to the origin of the chart, or one of
// its isolated points.
std::optional<Point> anchor_point(const FiberSet& f) {
  std::optional<Point> best;
  double best_norm = 0.0;
  for (const auto& piece : f.pieces) {
    const Point p = point_on_piece(piece, 0.37);
    const double n = std::holds_alternative<PlanePoint>(p) ? std::get<PlanePoint>(p).vec().norm() : 0.0;
    if (!best || n < best_norm - 1e-12) {
      best = p;
      best_norm = n;
    }
  }
  if (!best && !f.singular_points.empty()) best = f.singular_points.front();
  return best;
}

const SubmetryDescriptor* as_descriptor(const AnySubmetry& s) { return std::get_if<SubmetryDescriptor>(&s); }

}  // namespace

VerificationReport connectivity_report(std::size_t components, const ToleranceProfile& tol) {
  VerificationReport r;
  r.check_name = "connectivity";
  r.seed = tol.rng_seed;
  r.max_deviation = components >= 1 ? double(components - 1) : 1.0;
  r.tolerance = 0.0;
  r.parameters = {{"components", components}};
  r.pass = r.max_deviation <= r.tolerance;
  return r;
}

std::vector<VerificationReport> run_curve_suite(const LeafCurve& curve, const std::string& suite,
                                                const ToleranceProfile& tol) {
  if (suite != "full" && suite != "c1" && suite != "connectivity") {
    throw InvalidInput("suite '" + suite + "' needs a descriptor, not a curve file");
  }
  std::vector<VerificationReport> out;
  if (wants(suite, "c1")) out.push_back(check_junctions_c1(curve, tol));
  if (wants(suite, "connectivity")) out.push_back(connectivity_report(check_connectivity(curve, tol.tol_pos), tol));
  return out;
}

std::vector<VerificationReport> run_suite(const AnySubmetry& s, const std::string& suite, const ToleranceProfile& tol,
                                          double window_radius) {
  require_known(suite);
  tol.validate();
  std::vector<VerificationReport> out;
  const SubmetryDescriptor* d = as_descriptor(s);
  const Space1D base = submetry_base(s);
  const double scale = base_scale(base);

  if (d && (wants(suite, "c1") || wants(suite, "connectivity"))) {
    std::optional<LeafCurve> curve;
    if (const auto* sp = std::get_if<SignedDistanceSigmaPlane>(d)) curve = build_sigma_plane(sp->params, window_radius);
    if (const auto* ss = std::get_if<SignedDistanceSigmaSphere>(d)) curve = build_sigma_sphere(ss->params);
    if (curve) {
      const auto part = run_curve_suite(*curve, suite, tol);
      out.insert(out.end(), part.begin(), part.end());
    }
  }

  if (wants(suite, "equidistance")) {
    for (const auto& [l1, l2] : level_pairs(base)) out.push_back(check_equidistance(s, l1, l2, tol, window_radius));
  }

  if (wants(suite, "ball")) {
    std::vector<Point> centers;
    if (const auto m = middle_of(base)) {
      if (auto p = anchor_point(submetry_fiber(s, *m, window_radius))) centers.push_back(*p);
    }
    if (d) {
      for (const auto& p : singular_set(*d).points) centers.push_back(p);
    }
    const auto pairs = level_pairs(base);
    if (auto p = anchor_point(submetry_fiber(s, pairs.front().second, window_radius))) centers.push_back(*p);
    for (const auto& c : centers) out.push_back(check_lipschitz_and_ball(s, c, 0.25 * scale, tol));
  }

  if (d && wants(suite, "trace")) {
    if (const auto m = middle_level(*d)) {
      const FiberSet f = fiber(*d, *m, window_radius);
      if (!f.pieces.empty()) {
        const Point start = *anchor_point(f);
        out.push_back(trace_horizontal(*d, start, true, 2 * scale, scale / 200, tol).report);
      }
    }
  }

  if (d && wants(suite, "reach")) {
    std::optional<double> probe;
    if (const auto* sp = std::get_if<SignedDistanceSigmaPlane>(d)) probe = 0.95 * sp->params.a;
    if (const auto* ss = std::get_if<SignedDistanceSigmaSphere>(d)) probe = 0.95 * ss->params.a();
    if (std::holds_alternative<SphereRotation>(*d)) probe = 0.95 * kPi / 2;
    if (probe) {
      const double m = middle_level(*d).value_or(0.0);
      out.push_back(check_positive_reach(fiber(*d, m, window_radius), *probe, tol));
    }
  }
  return out;
}

nlohmann::json report_bundle(const std::string& suite, const std::vector<VerificationReport>& reports,
                             const ToleranceProfile& tol) {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& r : reports) list.push_back(encode(r));
  return {{"suite", suite}, {"tolerance", encode(tol)}, {"reports", list}, {"pass", all_pass(reports)}};
}

bool all_pass(const std::vector<VerificationReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const VerificationReport& r) { return r.pass; });
}

}  // namespace submetry
