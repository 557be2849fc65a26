#include "submetry/verify.hpp"

#include "submetry/topology.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

namespace submetry {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kInf = std::numeric_limits<double>::infinity();

const SubmetryDescriptor& inner_descriptor(const AnySubmetry& s) {
  if (const auto* d = std::get_if<SubmetryDescriptor>(&s)) return *d;
  return std::get<ComposedSubmetry>(s).inner;
}

VerificationReport make_report(std::string name, const ToleranceProfile& tol) {
  VerificationReport r;
  r.check_name = std::move(name);
  r.seed = tol.rng_seed;
  return r;
}

void finish(VerificationReport& r) { r.pass = r.max_deviation <= r.tolerance; }

std::string point_text(const Point& p) {
  const Vec3 v = embed(p);
  std::ostringstream os;
  os.precision(12);
  if (std::holds_alternative<PlanePoint>(p)) os << "(" << v.x() << ", " << v.y() << ")";
  else os << "(" << v.x() << ", " << v.y() << ", " << v.z() << ")";
  return os.str();
}

struct Nearest {
  double distance = kInf;
  Point foot = PlanePoint(0, 0);
};

Nearest nearest_on(const FiberSet& f, const Point& p) {
  Nearest best;
  for (const auto& piece : f.pieces) {
    const FootPoint fp = distance_to_piece(p, piece);
    if (fp.distance < best.distance) best = {fp.distance, fp.foot};
  }
  for (const auto& q : f.singular_points) {
    const double d = distance(p, q);
    if (d < best.distance) best = {d, q};
  }
  return best;
}

// Orthonormal basis of the tangent plane at a sphere point.
std::pair<Vec3, Vec3> tangent_basis(const Vec3& v) {
  const Vec3 ref = std::abs(v.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  const Vec3 e1 = v.cross(ref).normalized();
  return {e1, v.cross(e1)};
}

UnitTangent random_direction(const Point& p, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0.0, 2 * kPi);
  const double phi = angle(rng);
  if (const auto* pp = std::get_if<PlanePoint>(&p)) return PlaneTangent{*pp, Vec2(std::cos(phi), std::sin(phi))};
  const auto& sp = std::get<SpherePoint>(p);
  const auto [e1, e2] = tangent_basis(sp.v);
  return SphereTangent{sp, std::cos(phi) * e1 + std::sin(phi) * e2};
}

UnitTangent negate(const UnitTangent& t) {
  if (const auto* pt = std::get_if<PlaneTangent>(&t)) return PlaneTangent{pt->base, -pt->dir};
  const auto& st = std::get<SphereTangent>(t);
  return SphereTangent{st.base, -st.dir};
}

// Centers whose distance bounds the region where window-clipped fibers are
// complete, plus the extra slack the clipping rule needs.
struct ProbeRegion {
  std::vector<Vec2> centers;
  double slack = 0.0;
};

ProbeRegion probe_region(const SubmetryDescriptor& d) {
  if (const auto* s = std::get_if<SignedDistanceSigmaPlane>(&d)) {
    return {{s->params.x0().vec(), s->params.y0().vec()}, s->params.a};
  }
  return {{Vec2::Zero()}, 0.0};
}

bool admissible(const ProbeRegion& region, const Point& p, double margin, double window) {
  const auto* pp = std::get_if<PlanePoint>(&p);
  if (!pp) return true;
  return std::all_of(region.centers.begin(), region.centers.end(),
                     [&](const Vec2& c) { return (pp->vec() - c).norm() + margin + region.slack <= window; });
}

// Base-space ball of radius r about y, as an interval of offsets from y.
std::pair<double, double> ball_offsets(const Space1D& base, double y, double r) {
  return std::visit(overloaded{
                        [&](const Line&) { return std::pair{-r, r}; },
                        [&](const HalfLine& h) { return std::pair{std::max(h.origin - y, -r), r}; },
                        [&](const Segment& s) { return std::pair{std::max(s.lo - y, -r), std::min(s.hi - y, r)}; },
                        [&](const Circle& c) {
                          const double rr = std::min(r, c.length / 2);
                          return std::pair{-rr, rr};
                        },
                    },
                    base);
}

double offset_in_base(const Space1D& base, double y, double v) {
  if (const auto* c = std::get_if<Circle>(&base)) {
    double d = std::fmod(v - y, c->length);
    if (d > c->length / 2) d -= c->length;
    if (d <= -c->length / 2) d += c->length;
    return d;
  }
  return v - y;
}

constexpr int kWalkSteps = 2000;

// Point at fraction s of the shortest geodesic from p to q.
Point interpolate(const Point& p, const Point& q, double s) {
  if (const auto* pp = std::get_if<PlanePoint>(&p)) {
    const Vec2 v = (1 - s) * pp->vec() + s * std::get<PlanePoint>(q).vec();
    return PlanePoint(v.x(), v.y());
  }
  const Vec3& a = std::get<SpherePoint>(p).v;
  const Vec3& b = std::get<SpherePoint>(q).v;
  const double theta = std::atan2(a.cross(b).norm(), a.dot(b));
  if (theta < 1e-15) return p;
  return SpherePoint::normalized((std::sin((1 - s) * theta) * a + std::sin(s * theta) * b) / std::sin(theta));
}

// Largest gap left uncovered in [lo, hi] by the sorted values.
double coverage_gap(std::vector<double> values, double lo, double hi) {
  std::sort(values.begin(), values.end());
  double gap = 0.0;
  double prev = lo;
  for (double v : values) {
    if (v < lo || v > hi) continue;
    gap = std::max(gap, v - prev);
    prev = v;
  }
  return std::max(gap, hi - prev);
}

// --- reach probes ----------------------------------------------------------

struct ReachViolation {
  double switch_distance = kInf;
  Point witness = PlanePoint(0, 0);
  bool focal = false;
};

bool foot_holds(const FiberSet& f, const UnitTangent& ray, double t, double tol_metric) {
  return nearest_on(f, move_along(ray, t)).distance >= t - tol_metric;
}

// Bisects the normal ray for the last distance at which its foot is nearest.
double bisect_switch(const FiberSet& f, const UnitTangent& ray, double t_bad, double tol_metric) {
  double lo = 0.0;
  double hi = t_bad;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (foot_holds(f, ray, mid, tol_metric)) lo = mid;
    else hi = mid;
  }
  return lo;
}

// Points that are also piece endpoints only have normals pointing away from
// the pieces leaving them; reflect other directions across the tangent line.
UnitTangent restrict_to_normal_cone(const FiberSet& f, UnitTangent ray) {
  const Point base = std::visit([](const auto& t) -> Point { return t.base; }, ray);
  for (const auto& piece : f.pieces) {
    const EndpointData e = piece_endpoint_data(piece);
    for (const auto& [p, t] : {std::pair{e.start, e.start_tangent}, std::pair{e.end, negate(e.end_tangent)}}) {
      if (distance(p, base) > kEndpointTol) continue;
      if (auto* pr = std::get_if<PlaneTangent>(&ray)) {
        const Vec2& out = std::get<PlaneTangent>(t).dir;
        if (pr->dir.dot(out) > 0) pr->dir -= 2 * pr->dir.dot(out) * out;
      } else {
        auto& sr = std::get<SphereTangent>(ray);
        const Vec3& out = std::get<SphereTangent>(t).dir;
        if (sr.dir.dot(out) > 0) sr.dir -= 2 * sr.dir.dot(out) * out;
      }
    }
  }
  return ray;
}

void consider(std::optional<ReachViolation>& worst, const ReachViolation& v, double tol_metric) {
  if (!worst) {
    worst = v;
    return;
  }
  const double diff = v.switch_distance - worst->switch_distance;
  if (diff < -tol_metric || (std::abs(diff) <= tol_metric && v.focal && !worst->focal)) worst = v;
}

struct FocalProbe {
  Point point;
  double distance;
  CurvePiece piece;
};

std::vector<FocalProbe> focal_probes(const FiberSet& f, double probe_dist) {
  std::vector<FocalProbe> out;
  for (const auto& piece : f.pieces) {
    if (const auto* arc = std::get_if<CircularArc>(&piece)) {
      if (arc->radius < probe_dist) out.push_back({arc->center, arc->radius, piece});
    } else if (const auto* sarc = std::get_if<SphericalArc>(&piece)) {
      if (sarc->angular_radius < probe_dist) out.push_back({sarc->center, sarc->angular_radius, piece});
      if (kPi - sarc->angular_radius < probe_dist) {
        out.push_back({SpherePoint(-sarc->center.v), kPi - sarc->angular_radius, piece});
      }
    }
  }
  return out;
}

std::optional<ReachViolation> scan_reach(const FiberSet& f, double probe_dist, const ToleranceProfile& tol,
                                         long& probes) {
  std::optional<ReachViolation> worst;
  std::mt19937_64 rng(tol.rng_seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<double> cumulative;
  double total = 0.0;
  for (const auto& piece : f.pieces) {
    total += piece_length(piece);
    cumulative.push_back(total);
  }
  const std::size_t n_points = f.singular_points.size();
  probes = 0;
  for (long i = 0; i < tol.samples; ++i) {
    UnitTangent ray = PlaneTangent{PlanePoint(0, 0), Vec2::UnitX()};
    // Isolated points get a share of probes proportional to their count.
    const bool use_point =
        n_points > 0 && (f.pieces.empty() || unit(rng) < static_cast<double>(n_points) / (n_points + f.pieces.size()));
    double t = probe_dist * unit(rng);
    if (use_point) {
      const std::size_t j = std::min<std::size_t>(n_points - 1, static_cast<std::size_t>(unit(rng) * n_points));
      ray = restrict_to_normal_cone(f, random_direction(f.singular_points[j], rng));
    } else if (!f.pieces.empty()) {
      const double target = unit(rng) * total;
      const std::size_t j = std::min<std::size_t>(
          f.pieces.size() - 1,
          static_cast<std::size_t>(std::lower_bound(cumulative.begin(), cumulative.end(), target) - cumulative.begin()));
      ray = left_normal_on_piece(f.pieces[j], unit(rng));
      if (unit(rng) < 0.5) ray = negate(ray);
    } else {
      break;
    }
    ++probes;
    if (foot_holds(f, ray, t, tol.tol_metric)) continue;
    const double s = bisect_switch(f, ray, t, tol.tol_metric);
    consider(worst, {s, move_along(ray, s), false}, tol.tol_metric);
  }

  for (const FocalProbe& fp : focal_probes(f, probe_dist)) {
    ++probes;
    const Nearest n = nearest_on(f, fp.point);
    if (n.distance >= fp.distance - tol.tol_metric) {
      consider(worst, {fp.distance, fp.point, true}, tol.tol_metric);
    } else {
      UnitTangent ray = left_normal_on_piece(fp.piece, 0.5);
      const Point inward = move_along(ray, 1e-6);
      if (distance(inward, fp.point) > distance(point_on_piece(fp.piece, 0.5), fp.point)) ray = negate(ray);
      const double s = bisect_switch(f, ray, fp.distance, tol.tol_metric);
      consider(worst, {s, move_along(ray, s), false}, tol.tol_metric);
    }
  }
  return worst;
}

// --- horizontal traces -------------------------------------------------------

Point geodesic_point(const UnitTangent& dir, double t) { return move_along(dir, t); }

// Parameter of closest approach to q and the distance there.
std::pair<double, double> closest_approach(const UnitTangent& dir, const Point& q) {
  if (const auto* pt = std::get_if<PlaneTangent>(&dir)) {
    const Vec2 rel = std::get<PlanePoint>(q).vec() - pt->base.vec();
    const double t = std::max(0.0, rel.dot(pt->dir));
    return {t, (rel - t * pt->dir).norm()};
  }
  const auto& st = std::get<SphereTangent>(dir);
  const Vec3& v = std::get<SpherePoint>(q).v;
  const double c = st.base.v.dot(v);
  const double s = st.dir.dot(v);
  double t = std::atan2(s, c);
  if (t < 0) t += 2 * kPi;
  const double off_plane = std::abs(st.base.v.cross(st.dir).dot(v));
  return {t, std::asin(std::min(1.0, off_plane))};
}

}  // namespace

void ToleranceProfile::validate() const {
  if (!(tol_pos > 0 && tol_tan > 0 && tol_metric > 0 && oracle_chords > 0 && samples > 0)) {
    throw InvalidInput("tolerance profile entries must be positive");
  }
}

Ambient submetry_ambient(const AnySubmetry& s) { return ambient_of(inner_descriptor(s)); }

double submetry_evaluate(const AnySubmetry& s, const Point& p) {
  if (const auto* d = std::get_if<SubmetryDescriptor>(&s)) return evaluate(*d, p);
  return evaluate_composed(std::get<ComposedSubmetry>(s), p);
}

FiberSet submetry_fiber(const AnySubmetry& s, double y, double window_radius) {
  if (const auto* d = std::get_if<SubmetryDescriptor>(&s)) return fiber(*d, y, window_radius);
  return fiber_composed(std::get<ComposedSubmetry>(s), y, window_radius);
}

Space1D submetry_base(const AnySubmetry& s) {
  if (const auto* d = std::get_if<SubmetryDescriptor>(&s)) return base_space(*d);
  return codomain_of(std::get<ComposedSubmetry>(s).outer);
}

std::string submetry_describe(const AnySubmetry& s) {
  if (const auto* d = std::get_if<SubmetryDescriptor>(&s)) return describe(*d);
  const auto& c = std::get<ComposedSubmetry>(s);
  return std::string(kind_name(c.outer)) + " o " + describe(c.inner);
}

std::vector<Point> sample_fiber(const FiberSet& f, long count, std::mt19937_64& rng) {
  std::vector<Point> out(f.singular_points.begin(), f.singular_points.end());
  if (f.pieces.empty()) return out;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> cumulative;
  double total = 0.0;
  for (const auto& piece : f.pieces) {
    total += piece_length(piece);
    cumulative.push_back(total);
  }
  for (long i = 0; i < count; ++i) {
    const double target = unit(rng) * total;
    const std::size_t j = std::min<std::size_t>(
        f.pieces.size() - 1,
        static_cast<std::size_t>(std::lower_bound(cumulative.begin(), cumulative.end(), target) - cumulative.begin()));
    out.push_back(point_on_piece(f.pieces[j], unit(rng)));
  }
  return out;
}

Point sample_ball(const Point& x, double r, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const UnitTangent dir = random_direction(x, rng);
  if (std::holds_alternative<PlanePoint>(x)) return move_along(dir, r * std::sqrt(unit(rng)));
  const double rr = std::min(r, kPi);
  const double c = 1.0 - unit(rng) * (1.0 - std::cos(rr));
  return move_along(dir, std::acos(std::clamp(c, -1.0, 1.0)));
}

VerificationReport check_junctions_c1(const LeafCurve& curve, const ToleranceProfile& tol) {
  tol.validate();
  VerificationReport r = make_report("junctions_c1", tol);
  r.tolerance = std::min(tol.tol_pos, tol.tol_tan);
  double max_gap = 0.0;
  double max_angle = 0.0;
  for (const Junction& j : curve.junctions) {
    if (j.from >= curve.pieces.size() || j.to >= curve.pieces.size()) {
      throw InvalidInput("junction refers to a missing piece");
    }
    const EndpointData a = piece_endpoint_data(curve.pieces[j.from]);
    const EndpointData b = piece_endpoint_data(curve.pieces[j.to]);
    // Arriving along `from`, leaving along `to`, whatever the stored orientation.
    const bool a_end = distance(a.end, j.point) <= distance(a.start, j.point);
    const bool b_start = distance(b.start, j.point) <= distance(b.end, j.point);
    const Point& pa = a_end ? a.end : a.start;
    const Point& pb = b_start ? b.start : b.end;
    const UnitTangent ta = a_end ? a.end_tangent : negate(a.start_tangent);
    const UnitTangent tb = b_start ? b.start_tangent : negate(b.end_tangent);
    const double gap = distance(pa, pb);
    const double angle = tangent_mismatch(ta, tb);
    if (std::max(gap, angle) >= r.max_deviation) {
      r.max_deviation = std::max(gap, angle);
      r.witness = {j.point};
    }
    max_gap = std::max(max_gap, gap);
    max_angle = std::max(max_angle, angle);
  }
  if (curve.junctions.empty()) r.events.push_back("curve has no junctions");
  r.parameters = {{"junctions", curve.junctions.size()},
                  {"max_gap", max_gap},
                  {"max_tangent_angle", max_angle},
                  {"tol_pos", tol.tol_pos},
                  {"tol_tan", tol.tol_tan}};
  r.pass = max_gap <= tol.tol_pos && max_angle <= tol.tol_tan;
  return r;
}

VerificationReport check_equidistance(const AnySubmetry& s, double level1, double level2,
                                      const ToleranceProfile& tol, double window_radius) {
  tol.validate();
  VerificationReport r = make_report("equidistance", tol);
  r.tolerance = tol.tol_metric;
  const Space1D base = submetry_base(s);
  if (!contains(base, level1) || !contains(base, level2)) throw InvalidInput("equidistance: level outside the base");
  const double expected = base_distance(base, level1, level2);
  if (!(expected > 0)) throw InvalidInput("equidistance: levels must differ");

  const FiberSet f1 = submetry_fiber(s, level1, window_radius);
  const FiberSet f2 = submetry_fiber(s, level2, window_radius);
  const ProbeRegion region = probe_region(inner_descriptor(s));
  r.parameters = {{"descriptor", submetry_describe(s)},
                  {"level1", level1},
                  {"level2", level2},
                  {"expected", expected},
                  {"window_radius", window_radius}};
  if (f2.pieces.empty() && f2.singular_points.empty()) {
    r.max_deviation = kInf;
    r.events.push_back("target fiber is empty inside the window");
    finish(r);
    return r;
  }

  std::mt19937_64 rng(tol.rng_seed);
  long used = 0;
  long attempts = 0;
  const long max_attempts = 50 * tol.samples;
  while (used < tol.samples && attempts < max_attempts) {
    const long batch = std::min(tol.samples - used, max_attempts - attempts);
    for (const Point& p : sample_fiber(f1, batch, rng)) {
      ++attempts;
      if (used >= tol.samples) break;
      if (!admissible(region, p, expected, window_radius)) continue;
      ++used;
      const double dev = std::abs(nearest_on(f2, p).distance - expected);
      if (dev >= r.max_deviation) {
        r.max_deviation = dev;
        r.witness = {p};
      }
    }
    if (f1.pieces.empty()) break;
  }
  r.parameters["probes"] = used;
  if (used == 0) {
    r.max_deviation = kInf;
    r.events.push_back("no admissible probes on the source fiber");
  }
  finish(r);
  return r;
}

VerificationReport check_lipschitz_and_ball(const AnySubmetry& s, const Point& x, double r_ball,
                                            const ToleranceProfile& tol) {
  tol.validate();
  if (!(r_ball > 0)) throw InvalidInput("ball radius must be positive");
  VerificationReport r = make_report("lipschitz_and_ball", tol);
  const Space1D base = submetry_base(s);
  const double y = submetry_evaluate(s, x);
  const auto [lo, hi] = ball_offsets(base, y, r_ball);
  const double gap_tol = 2 * r_ball / std::sqrt(static_cast<double>(tol.samples));
  r.tolerance = gap_tol;

  std::mt19937_64 rng(tol.rng_seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> offsets{0.0};
  offsets.reserve(tol.samples + 4 * kWalkSteps);
  long violations = 0;
  double worst_excess = 0.0;
  std::optional<Point> prev_point;
  double prev_value = 0.0;
  Point low = x, high = x;
  double low_offset = 0.0, high_offset = 0.0;
  const auto take = [&](const Point& z) {
    const double v = submetry_evaluate(s, z);
    double excess = base_distance(base, v, y) - distance(x, z);
    if (prev_point) excess = std::max(excess, base_distance(base, v, prev_value) - distance(*prev_point, z));
    if (excess > tol.tol_metric) {
      ++violations;
      if (excess > worst_excess) {
        worst_excess = excess;
        r.witness = {z};
      }
    }
    const double o = offset_in_base(base, y, v);
    offsets.push_back(o);
    prev_point = z;
    prev_value = v;
    return o;
  };
  const double reach = std::min(r_ball, kPi);
  for (long i = 0; i < tol.samples; ++i) {
    // Every other sample sits on the bounding sphere, where the extreme base
    // values are attained.
    const Point z = i % 2 == 0 ? sample_ball(x, r_ball, rng) : move_along(random_direction(x, rng), reach);
    const double o = take(z);
    if (o < low_offset) low = z, low_offset = o;
    if (o > high_offset) high = z, high_offset = o;
  }
  // Extremes inside the ball (cone points of the level function) are hit by
  // uniform samples only with probability ~gap^2, so the lowest and highest
  // samples are refined by local search. The 1-Lipschitz bound then makes a
  // dense walk from x to each of them cover everything in between.
  for (auto [best, best_offset, sign] : {std::tuple{low, low_offset, -1.0}, std::tuple{high, high_offset, 1.0}}) {
    double rho = r_ball / 8;
    for (int round = 0; round < 200 && rho > 1e-12 * r_ball; ++round) {
      bool improved = false;
      for (int c = 0; c < 8; ++c) {
        const Point z = sample_ball(best, rho, rng);
        if (distance(x, z) > r_ball) continue;
        const double o = take(z);
        if (sign * (o - best_offset) > 0) best = z, best_offset = o, improved = true;
      }
      if (!improved) rho *= 0.5;
    }
    for (int i = 1; i < kWalkSteps; ++i) take(interpolate(x, best, static_cast<double>(i) / kWalkSteps));
  }
  const double gap = coverage_gap(std::move(offsets), lo, hi);
  r.max_deviation = violations > 0 ? std::max(gap, gap_tol + worst_excess) : gap;
  if (violations == 0 && r.witness.empty()) r.witness = {x};
  r.parameters = {{"descriptor", submetry_describe(s)},
                  {"center_value", y},
                  {"radius", r_ball},
                  {"ball_lo", y + lo},
                  {"ball_hi", y + hi},
                  {"coverage_gap", gap},
                  {"lipschitz_violations", violations},
                  {"worst_lipschitz_excess", worst_excess}};
  finish(r);
  return r;
}

VerificationReport check_map_submetry(const DiscreteMap1D& m, const ToleranceProfile& tol, double resolution) {
  tol.validate();
  validate(m);
  VerificationReport r = make_report("map_submetry", tol);
  r.tolerance = resolution;
  const Space1D domain = domain_of(m);
  const Space1D codomain = codomain_of(m);

  double scale = 1.0;
  if (const auto* s = std::get_if<Segment>(&codomain)) scale = s->hi - s->lo;
  if (const auto* c = std::get_if<Circle>(&codomain)) scale = c->length;
  const double r_max = std::min(scale / 2, 1.0);

  std::mt19937_64 rng(tol.rng_seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto sample_domain = [&]() {
    return std::visit(overloaded{
                          [&](const Line&) { return (2 * unit(rng) - 1) * 10 * scale; },
                          [&](const HalfLine& h) { return h.origin + unit(rng) * 10 * scale; },
                          [&](const Segment& s) { return s.lo + unit(rng) * (s.hi - s.lo); },
                          [&](const Circle& c) { return std::min(unit(rng) * c.length, std::nextafter(c.length, 0.0)); },
                      },
                      domain);
  };

  const double h = resolution / 2;
  long violations = 0;
  double worst_excess = 0.0;
  double worst_gap = 0.0;
  for (long i = 0; i < tol.samples; ++i) {
    const double x = sample_domain();
    const double rad = r_max * (0.01 + 0.99 * unit(rng));
    const double y = apply_map(m, x);
    const auto [lo, hi] = ball_offsets(codomain, y, rad);
    const long steps = static_cast<long>(std::ceil(2 * rad / h));
    std::vector<double> offsets;
    offsets.reserve(steps + 1);
    double prev_t = 0.0;
    double prev_v = 0.0;
    bool have_prev = false;
    for (long j = 0; j <= steps; ++j) {
      const double raw = x - rad + 2 * rad * j / steps;
      double t = raw;
      if (std::holds_alternative<Circle>(domain)) t = clamp_to(domain, raw);
      else if (!contains(domain, raw, 0.0)) continue;
      const double v = apply_map(m, t);
      double excess = base_distance(codomain, v, y) - base_distance(domain, t, x);
      if (have_prev) excess = std::max(excess, base_distance(codomain, v, prev_v) - base_distance(domain, t, prev_t));
      if (excess > tol.tol_metric) {
        ++violations;
        worst_excess = std::max(worst_excess, excess);
      }
      offsets.push_back(offset_in_base(codomain, y, v));
      prev_t = t;
      prev_v = v;
      have_prev = true;
    }
    worst_gap = std::max(worst_gap, coverage_gap(std::move(offsets), lo, hi));
  }
  r.max_deviation = violations > 0 ? std::max(worst_gap, resolution + worst_excess) : worst_gap;
  r.parameters = {{"map", kind_name(m)},
                  {"coverage_gap", worst_gap},
                  {"lipschitz_violations", violations},
                  {"worst_lipschitz_excess", worst_excess},
                  {"resolution", resolution}};
  finish(r);
  return r;
}

TraceResult trace_horizontal(const SubmetryDescriptor& d, const Point& start, bool outward, double t_max, double dt,
                             const ToleranceProfile& tol) {
  tol.validate();
  validate(d);
  if (!(t_max > 0 && dt > 0)) throw InvalidInput("trace needs positive t_max and dt");
  if (ambient_of(start) != ambient_of(d)) throw InvalidInput("trace start lives on the wrong ambient space");
  const Space1D base = base_space(d);
  const double middle = middle_level(d).value_or(0.0);
  const double y0 = evaluate(d, start);
  if (std::abs(y0 - middle) > 1e-9) throw InvalidInput("trace start is not on the middle fiber");

  double window = 10.0;
  if (const auto* pp = std::get_if<PlanePoint>(&start)) window = std::max(10.0, 2 * pp->vec().norm() + 1);
  if (const auto* s = std::get_if<SignedDistanceSigmaPlane>(&d)) {
    window = std::max(window, 2 * s->params.center_distance() + 2 * std::get<PlanePoint>(start).vec().norm() + 1);
  }
  const FiberSet leaf = fiber(d, middle, window);
  const CurvePiece* host = nullptr;
  FootPoint foot;
  foot.distance = kInf;
  for (const auto& piece : leaf.pieces) {
    const FootPoint fp = distance_to_piece(start, piece);
    if (fp.distance < foot.distance) {
      foot = fp;
      host = &piece;
    }
  }
  if (!host || foot.distance > 1e-9) throw InvalidInput("trace start does not lie on a piece of the middle fiber");

  UnitTangent dir = left_normal_on_piece(*host, foot.param);
  if (const auto* pt = std::get_if<PlaneTangent>(&dir)) {
    const Vec2 p = std::get<PlanePoint>(start).vec();
    Vec2 ref = Vec2::Zero();
    if (const auto* arc = std::get_if<CircularArc>(host)) ref = arc->center.vec();
    const double away = pt->dir.dot(p - ref);
    const bool flip = std::abs(away) > 1e-12 && ((away > 0) != outward);
    if (flip) dir = negate(dir);
  } else {
    const auto& st = std::get<SphereTangent>(dir);
    Vec3 center = Vec3::UnitZ();
    if (const auto* arc = std::get_if<SphericalArc>(host)) center = arc->center.v;
    const double away = -st.dir.dot(center);
    const bool flip = std::abs(away) > 1e-12 && ((away > 0) != outward);
    if (flip) dir = negate(dir);
  }

  TraceResult out;
  out.report = make_report("trace_horizontal", tol);
  out.report.tolerance = tol.tol_metric;

  double t_stop = t_max;
  const double hit_tol = 10 * tol.tol_pos;
  for (const Point& q : singular_set(d).points) {
    const auto [t_star, dist] = closest_approach(dir, q);
    if (dist <= hit_tol && t_star > 0 && t_star <= t_max && (!out.singular_hit || t_star < *out.singular_hit)) {
      out.singular_hit = t_star;
      t_stop = t_star;
      out.report.witness = {q};
    }
  }

  const double probe = std::min(dt, 1e-4);
  const double sigma = evaluate(d, geodesic_point(dir, probe)) >= y0 ? 1.0 : -1.0;
  const long steps = static_cast<long>(std::floor(t_max / dt + 1e-9));
  double worst = 0.0;
  for (long i = 0; i <= steps + 1; ++i) {
    const double t = i <= steps ? i * dt : t_max;
    if (i == steps + 1 && std::abs(t - steps * dt) < 1e-12) break;
    if (out.singular_hit && t >= t_stop - hit_tol) break;
    const Point p = geodesic_point(dir, t);
    const double value = evaluate(d, p);
    const double predicted = reflect_into(base, y0 + sigma * t);
    out.t.push_back(t);
    out.path.push_back(p);
    out.profile.push_back(value);
    out.predicted.push_back(predicted);
    const double dev = base_distance(base, value, predicted);
    if (dev > worst) {
      worst = dev;
      if (!out.singular_hit) out.report.witness = {p};
    }
  }
  double lip_excess = 0.0;
  for (std::size_t i = 1; i < out.t.size(); ++i) {
    const double excess = base_distance(base, out.profile[i], out.profile[i - 1]) - (out.t[i] - out.t[i - 1]);
    lip_excess = std::max(lip_excess, excess);
  }
  out.report.max_deviation = std::max(worst, lip_excess);
  if (out.singular_hit) {
    out.report.events.push_back("singular hit at t=" + std::to_string(*out.singular_hit) + " near " +
                                point_text(out.report.witness.front()) + "; fold identity checked on [0, t_hit)");
  }
  out.report.parameters = {{"descriptor", describe(d)},
                           {"start", point_text(start)},
                           {"outward", outward},
                           {"t_max", t_max},
                           {"dt", dt},
                           {"samples", out.t.size()},
                           {"profile_lipschitz_excess", lip_excess},
                           {"flagged", out.singular_hit.has_value()}};
  if (out.singular_hit) out.report.parameters["singular_hit"] = *out.singular_hit;
  finish(out.report);
  return out;
}

VerificationReport check_positive_reach(const FiberSet& f, double probe_dist, const ToleranceProfile& tol) {
  tol.validate();
  if (!(probe_dist > 0)) throw InvalidInput("probe distance must be positive");
  VerificationReport r = make_report("positive_reach", tol);
  r.tolerance = tol.tol_metric;
  long probes = 0;
  const auto worst = scan_reach(f, probe_dist, tol, probes);
  r.parameters = {{"probe_dist", probe_dist}, {"level", f.level}, {"probes", probes}};
  if (worst) {
    r.max_deviation = std::max(0.0, probe_dist - worst->switch_distance);
    r.witness = {worst->witness};
    r.parameters["reach_bound"] = worst->switch_distance;
    r.parameters["focal_witness"] = worst->focal;
    r.events.push_back("nearest point not unique at distance " + std::to_string(worst->switch_distance) + " near " +
                       point_text(worst->witness));
  }
  finish(r);
  return r;
}

double estimate_reach(const FiberSet& f, double probe_max, const ToleranceProfile& tol) {
  long probes = 0;
  const auto worst = scan_reach(f, probe_max, tol, probes);
  return worst ? worst->switch_distance : probe_max;
}

std::size_t check_connectivity(const FiberSet& f, double tol_pos) {
  return connected_components(f.pieces, f.singular_points, tol_pos).size();
}

std::size_t check_connectivity(const LeafCurve& curve, double tol_pos) {
  return connected_components(curve.pieces, std::span<const Point>{}, tol_pos).size();
}

// --- chord oracle ------------------------------------------------------------

struct ChordOracle::Impl {
  struct Leaf {
    std::size_t piece;
    long j0;
    long j1;
  };
  struct Node {
    Eigen::AlignedBox3d box;
    int left = -1;
    int right = -1;
    int leaf = -1;
  };

  std::vector<CurvePiece> pieces;
  std::vector<int> orientation;
  long n = 0;
  bool sphere = false;
  std::vector<Leaf> leaves;
  std::vector<Node> nodes;

  Vec3 sample(std::size_t piece, long j) const { return embed(point_on_piece(pieces[piece], double(j) / n)); }

  int build(std::size_t lo, std::size_t hi, const std::vector<Eigen::AlignedBox3d>& boxes) {
    Node node;
    if (hi - lo == 1) {
      node.box = boxes[lo];
      node.leaf = static_cast<int>(lo);
      nodes.push_back(node);
      return static_cast<int>(nodes.size() - 1);
    }
    const std::size_t mid = (lo + hi) / 2;
    const int l = build(lo, mid, boxes);
    const int r = build(mid, hi, boxes);
    node.left = l;
    node.right = r;
    node.box = nodes[l].box.merged(nodes[r].box);
    nodes.push_back(node);
    return static_cast<int>(nodes.size() - 1);
  }

  // Distance from p to one chord plus the side of the chord's left normal.
  std::pair<double, double> chord(const Vec3& p, const Vec3& a, const Vec3& b) const {
    if (!sphere) {
      const Vec2 p2 = p.head<2>();
      const Vec2 a2 = a.head<2>();
      const Vec2 b2 = b.head<2>();
      const Vec2 ab = b2 - a2;
      const double len2 = ab.squaredNorm();
      const double t = len2 > 0 ? std::clamp((p2 - a2).dot(ab) / len2, 0.0, 1.0) : 0.0;
      const Vec2 foot = a2 + t * ab;
      const Vec2 normal(-ab.y(), ab.x());
      return {(p2 - foot).norm(), (p2 - foot).dot(normal)};
    }
    Vec3 normal = a.cross(b);
    const double nn = normal.norm();
    if (nn < 1e-300) return {angle_between(p, a), 0.0};
    normal /= nn;
    const double off = p.dot(normal);
    const Vec3 proj = p - off * normal;
    const double pn = proj.norm();
    if (pn > 0) {
      const Vec3 f = proj / pn;
      if (a.cross(f).dot(normal) >= 0 && f.cross(b).dot(normal) >= 0) return {std::atan2(std::abs(off), pn), off};
    }
    return {std::min(angle_between(p, a), angle_between(p, b)), off};
  }
};

ChordOracle::ChordOracle(const LeafCurve& curve, long chords_per_piece) : impl_(std::make_unique<Impl>()) {
  if (chords_per_piece < 1) throw InvalidInput("chord oracle needs at least one chord per piece");
  if (curve.orientation.size() != curve.pieces.size()) throw InvalidInput("chord oracle needs orientation flags");
  if (curve.pieces.empty()) throw InvalidInput("chord oracle needs a non-empty curve");
  Impl& m = *impl_;
  m.pieces = curve.pieces;
  m.orientation = curve.orientation;
  m.n = chords_per_piece;
  m.sphere = curve.ambient == Ambient::Sphere;
  constexpr long kLeafChords = 16;
  std::vector<Eigen::AlignedBox3d> boxes;
  for (std::size_t i = 0; i < m.pieces.size(); ++i) {
    for (long j0 = 0; j0 < m.n; j0 += kLeafChords) {
      const long j1 = std::min(m.n, j0 + kLeafChords);
      Eigen::AlignedBox3d box;
      for (long j = j0; j <= j1; ++j) box.extend(m.sample(i, j));
      // Great-circle chords bulge outside the hull of their endpoints by at
      // most chord^2 / 8.
      const double chord = (m.sample(i, j0) - m.sample(i, std::min(j0 + 1, m.n))).norm();
      const double pad = m.sphere ? chord * chord + 1e-15 : 1e-15;
      box.min().array() -= pad;
      box.max().array() += pad;
      m.leaves.push_back({i, j0, j1});
      boxes.push_back(box);
    }
  }
  m.build(0, boxes.size(), boxes);
}

ChordOracle::~ChordOracle() = default;
ChordOracle::ChordOracle(ChordOracle&&) noexcept = default;
ChordOracle& ChordOracle::operator=(ChordOracle&&) noexcept = default;

double ChordOracle::signed_distance(const Point& p) const {
  const Impl& m = *impl_;
  if ((ambient_of(p) == Ambient::Sphere) != m.sphere) throw InvalidInput("chord oracle: point on the wrong ambient space");
  const Vec3 q = embed(p);
  double best = kInf;
  double best_side = 0.0;
  std::size_t best_piece = 0;
  auto bound_of = [&](double geo) { return m.sphere ? 2 * std::sin(std::min(geo, kPi) / 2) : geo; };

  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  const int root = static_cast<int>(m.nodes.size() - 1);
  queue.push({m.nodes[root].box.squaredExteriorDistance(q), root});
  while (!queue.empty()) {
    const auto [key, idx] = queue.top();
    queue.pop();
    const double limit = bound_of(best);
    if (key > limit * limit) break;
    const Impl::Node& node = m.nodes[idx];
    if (node.leaf >= 0) {
      const Impl::Leaf& leaf = m.leaves[node.leaf];
      Vec3 prev = m.sample(leaf.piece, leaf.j0);
      for (long j = leaf.j0 + 1; j <= leaf.j1; ++j) {
        const Vec3 next = m.sample(leaf.piece, j);
        const auto [d, side] = m.chord(q, prev, next);
        if (d < best) {
          best = d;
          best_side = side;
          best_piece = leaf.piece;
        }
        prev = next;
      }
      continue;
    }
    queue.push({m.nodes[node.left].box.squaredExteriorDistance(q), node.left});
    queue.push({m.nodes[node.right].box.squaredExteriorDistance(q), node.right});
  }
  const double sign = best_side >= 0 ? 1.0 : -1.0;
  return m.orientation[best_piece] * sign * best;
}

double brute_force_signed_distance(const LeafCurve& curve, const Point& p, long n_chords) {
  return ChordOracle(curve, n_chords).signed_distance(p);
}

}  // namespace submetry
