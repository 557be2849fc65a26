// Prints one PASS/FAIL line per acceptance criterion; exit code 0 iff all pass.

#include "oracle.hpp"

#include "submetry/render.hpp"
#include "submetry/serialize.hpp"
#include "submetry/suite.hpp"

#include <chrono>
#include <cstdio>
#include <iostream>
#include <map>
#include <numeric>
#include <regex>
#include <set>
#include <sstream>

using namespace submetry;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int n, const std::string& title, const Outcome& o, double seconds) {
  if (!o.pass) ++failures;
  std::printf("%s criterion %d: %s (%s) [%.1fs]\n", o.pass ? "PASS" : "FAIL", n, title.c_str(), o.detail.c_str(),
              seconds);
  std::fflush(stdout);
}

template <class F>
void run(int n, const std::string& title, F&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  report(n, title, o, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

const std::vector<double> kA{0.5, 1.0, 2.0};
const std::vector<double> kH{0.0, 1.0, 3.0};

std::vector<SphereSigmaParams> sphere_params(int kmax) {
  std::vector<SphereSigmaParams> out;
  for (int k = 2; k <= kmax; ++k) {
    for (int s = 1; s < 2 * k; s += 2) {
      if (std::gcd(s, k) == 1) out.push_back({k, s});
    }
  }
  return out;
}

std::vector<SubmetryDescriptor> sigma_descriptors() {
  std::vector<SubmetryDescriptor> out;
  for (double a : kA) {
    for (double h : kH) out.push_back(SignedDistanceSigmaPlane{{a, h}});
  }
  for (const auto& p : sphere_params(8)) out.push_back(SignedDistanceSigmaSphere{p});
  return out;
}

double half_width(const SubmetryDescriptor& d) {
  const auto seg = std::get<Segment>(base_space(d));
  return (seg.hi - seg.lo) / 2;
}

Point random_probe(Ambient amb, double radius, std::mt19937_64& rng) {
  if (amb == Ambient::Sphere) return SpherePoint(oracle::random_unit(rng));
  std::uniform_real_distribution<double> u(-1, 1);
  while (true) {
    const Vec2 v(u(rng), u(rng));
    if (v.squaredNorm() <= 1) return PlanePoint(radius * v.x(), radius * v.y());
  }
}

// ---- 1 ---------------------------------------------------------------------

Outcome junctions() {
  ToleranceProfile tol;
  double gap = 0, angle = 0;
  int curves = 0;
  bool ok = true;
  auto take = [&](const LeafCurve& c) {
    const auto r = check_junctions_c1(c, tol);
    gap = std::max(gap, r.parameters.value("max_gap", 0.0));
    angle = std::max(angle, r.parameters.value("max_tangent_angle", 0.0));
    ok = ok && r.pass && !c.junctions.empty();
    ++curves;
  };
  for (double a : kA) {
    for (double h : kH) take(build_sigma_plane({a, h}, 10));
  }
  for (const auto& p : sphere_params(8)) take(build_sigma_sphere(p));
  ok = ok && gap < 1e-10 && angle < 1e-10;
  return {ok, std::to_string(curves) + " curves, max gap " + fmt(gap) + ", max tangent mismatch " + fmt(angle)};
}

// ---- 2 ---------------------------------------------------------------------

Outcome oracle_equivalence() {
  constexpr long kChords = 100000;
  constexpr int kProbes = 10000;
  constexpr double kProbeRadius = 5.0;
  std::mt19937_64 rng(2);
  double worst_off = 0, worst_on = 0;
  for (const auto& d : sigma_descriptors()) {
    const Ambient amb = ambient_of(d);
    LeafCurve curve;
    if (const auto* p = std::get_if<SignedDistanceSigmaPlane>(&d)) {
      // every nearest point of a probe lies inside the window
      const double reach = kProbeRadius + p->params.a + std::hypot(2 * p->params.a, p->params.h / 2) + 1;
      curve = build_sigma_plane(p->params, reach);
    } else {
      curve = build_sigma_sphere(std::get<SignedDistanceSigmaSphere>(d).params);
    }
    const ChordOracle brute(curve, kChords);
    for (int i = 0; i < kProbes; ++i) {
      const Point p = random_probe(amb, kProbeRadius, rng);
      worst_off = std::max(worst_off, std::abs(evaluate(d, p) - brute.signed_distance(p)));
    }
    std::uniform_real_distribution<double> param(0, 1);
    for (int i = 0; i < 1000; ++i) {
      const Point p = point_on_piece(curve.pieces[rng() % curve.pieces.size()], param(rng));
      worst_on = std::max({worst_on, std::abs(evaluate(d, p)), std::abs(brute.signed_distance(p))});
    }
  }
  return {worst_off < 1e-4 && worst_on < 1e-8,
          "max |analytic - brute| " + fmt(worst_off) + " off the curve, " + fmt(worst_on) + " on it"};
}

// ---- 3 ---------------------------------------------------------------------

Outcome equidistance() {
  ToleranceProfile tol;
  tol.tol_metric = 1e-6;
  tol.samples = 10000;
  std::mt19937_64 rng(3);
  double worst = 0;
  int checks = 0;
  bool ok = true;
  for (const auto& d : sigma_descriptors()) {
    const double a = half_width(d);
    std::uniform_real_distribution<double> level(-a, a);
    for (int i = 0; i < 10; ++i) {
      tol.rng_seed = rng();
      const auto r = check_equidistance(d, level(rng), level(rng), tol);
      ok = ok && r.pass && r.parameters.value("probes", 0L) > 0;
      worst = std::max(worst, r.max_deviation);
      ++checks;
    }
  }
  return {ok && worst < 1e-6, std::to_string(checks) + " level pairs, max deviation " + fmt(worst)};
}

// ---- 4 ---------------------------------------------------------------------

Outcome balls() {
  ToleranceProfile tol;
  tol.samples = 10000;
  std::mt19937_64 rng(4);
  long violations = 0;
  double worst_ratio = 0;
  int checks = 0;
  bool ok = true;
  for (const auto& d : sigma_descriptors()) {
    const double a = half_width(d);
    std::vector<Point> centers = singular_set(d).points;
    while (centers.size() < 100) centers.push_back(random_probe(ambient_of(d), 5.0, rng));
    std::uniform_real_distribution<double> radius(0.05 * a, 3 * a);
    for (const Point& x : centers) {
      tol.rng_seed = rng();
      const double r = radius(rng);
      const auto rep = check_lipschitz_and_ball(d, x, r, tol);
      violations += rep.parameters.value("lipschitz_violations", 0L);
      const double gap = rep.parameters.value("coverage_gap", 1.0);
      worst_ratio = std::max(worst_ratio, gap / (2 * r / 100));
      ok = ok && rep.pass && gap < 2 * r / 100;
      ++checks;
    }
  }
  return {ok && violations == 0, std::to_string(checks) + " balls, " + std::to_string(violations) +
                                     " Lipschitz violations, worst gap " + fmt(worst_ratio) + " of 2r/100"};
}

// ---- 5 ---------------------------------------------------------------------

Outcome traces() {
  ToleranceProfile tol;
  tol.tol_metric = 1e-9;
  std::mt19937_64 rng(5);
  double worst_plane = 0, worst_sphere = 0;
  int outward = 0, flagged = 0, inward = 0, truncated = 0;
  double shortest = 1e300;
  bool ok = true;
  const auto ds = sigma_descriptors();
  for (int i = 0; i < 100; ++i) {
    // 50 plane and 50 sphere starts
    const bool sphere = i % 2 == 1;
    std::vector<SubmetryDescriptor> pool;
    for (const auto& d : ds) {
      if ((ambient_of(d) == Ambient::Sphere) == sphere) pool.push_back(d);
    }
    const SubmetryDescriptor& d = pool[rng() % pool.size()];
    const double scale = 2 * half_width(d);
    const FiberSet middle = fiber(d, 0.0, 10.0);
    const Point start = sample_fiber(middle, 1, rng).front();
    const auto out = trace_horizontal(d, start, true, 3 * scale, scale / 200, tol);
    ok = ok && out.report.pass;
    if (out.singular_hit) {
      // sphere geodesics normal to a circle reach its antipodal center
      ++truncated;
      shortest = std::min(shortest, *out.singular_hit / half_width(d));
    }
    (sphere ? worst_sphere : worst_plane) = std::max(sphere ? worst_sphere : worst_plane, out.report.max_deviation);
    ++outward;

    const auto in = trace_horizontal(d, start, false, 3 * scale, scale / 200, tol);
    ++inward;
    if (in.singular_hit) {
      ++flagged;
      const auto pts = singular_set(d).points;
      const Point hit = in.report.witness.front();
      const bool near = std::any_of(pts.begin(), pts.end(), [&](const Point& q) { return distance(hit, q) < 1e-6; });
      ok = ok && near && !in.report.events.empty() && in.report.parameters.value("flagged", false);
    } else {
      ok = ok && in.report.pass;
    }
  }
  return {ok && worst_plane < 1e-9 && worst_sphere < 1e-9 && flagged > 0,
          std::to_string(outward) + " outward traces, max deviation " + fmt(worst_plane) + " plane / " +
              fmt(worst_sphere) + " sphere, " + std::to_string(truncated) + " stopped at an antipodal singular point after >= " +
              fmt(shortest) + "a; " + std::to_string(flagged) + " of " + std::to_string(inward) +
              " inward traces flagged at singular points"};
}

// ---- 6 ---------------------------------------------------------------------

Outcome reach() {
  ToleranceProfile tol;
  std::string detail;
  bool ok = true;
  for (double a : kA) {
    for (double h : kH) {
      const PlaneSigmaParams p{a, h};
      const FiberSet f = fiber_plane(p, 0.0, 10);
      const auto inside = check_positive_reach(f, 0.95 * a, tol);
      const auto outside = check_positive_reach(f, 1.05 * a, tol);
      double witness_gap = 1e300;
      for (const Point& w : outside.witness) {
        for (const Point& q : singular_set(SignedDistanceSigmaPlane{p}).points) {
          witness_gap = std::min(witness_gap, distance(w, q));
        }
      }
      const bool row = inside.pass && !outside.pass && witness_gap < 1e-3;
      ok = ok && row;
      if (!row) detail += " a=" + fmt(a) + ",h=" + fmt(h) + " witness " + fmt(witness_gap);
    }
  }
  return {ok, "9 curves pass at 0.95a, fail at 1.05a" + (detail.empty() ? "" : ";" + detail)};
}

// ---- 7 ---------------------------------------------------------------------

Outcome connectivity() {
  int rows = 0, mismatches = 0;
  for (int k = 2; k <= 12; ++k) {
    for (int s = 1; s < 2 * k; s += 2) {
      const bool connected = check_connectivity(build_sigma_sphere({k, s}, true)) == 1;
      if (connected != (std::gcd(s, k) == 1)) ++mismatches;
      ++rows;
    }
  }
  return {mismatches == 0, std::to_string(rows) + " (k, s) pairs, " + std::to_string(mismatches) + " mismatches"};
}

// ---- 8 ---------------------------------------------------------------------

Outcome rotation() {
  ToleranceProfile tol;
  std::mt19937_64 rng(8);
  bool ok = true;
  std::string failed;
  auto need = [&](bool cond, const char* what) {
    if (!cond && ok) failed = std::string(", first failure: ") + what;
    ok = ok && cond;
  };
  const std::vector<SpherePoint> poles{SpherePoint(Vec3::UnitZ()), SpherePoint::normalized(Vec3(1, -2, 0.5))};
  for (const auto& pole : poles) {
    const SubmetryDescriptor d = SphereRotation{pole};
    const auto base = std::get<Segment>(base_space(d));
    need(base.lo == 0.0 && std::abs(base.hi - kPi) < 1e-15, "base");
    std::uniform_real_distribution<double> level(0, kPi);
    for (int i = 0; i < 10; ++i) {
      const double y = level(rng);
      const FiberSet f = fiber(d, y);
      for (const auto& piece : f.pieces) {
        const auto* arc = std::get_if<SphericalArc>(&piece);
        need(arc && (arc->center.v - pole.v).norm() < 1e-12 && std::abs(arc->angular_radius - y) < 1e-12, "arc");
      }
      for (const Point& p : sample_fiber(f, 200, rng)) {
        need(std::abs(oracle::angle(std::get<SpherePoint>(p).v, pole.v) - y) < 1e-12, "latitude");
      }
      tol.rng_seed = rng();
      need(check_equidistance(d, y, level(rng), tol).pass, "equidistance");
      need(check_lipschitz_and_ball(d, random_probe(Ambient::Sphere, 1, rng), 0.1 + level(rng) / 2, tol).pass, "ball");
    }
    need(fiber(d, 0.0).pieces.empty() && fiber(d, kPi).singular_points.size() == 1, "poles");
  }
  const auto table = enumerate_sphere(1);
  need(table.size() == 1 && std::holds_alternative<SphereRotation>(table[0]), "catalog");
  return {ok, "latitude circles, equidistance and balls for 2 poles; base [0, pi]" + failed};
}

// ---- 9 ---------------------------------------------------------------------

Outcome quotients() {
  ToleranceProfile tol;
  tol.samples = 10000;
  int maps = 0;
  bool ok = true;
  std::string failed;
  const std::vector<Space1D> domains{Line{}, HalfLine{0.5}, Segment{-1, 2}, Circle{3}};
  for (const Space1D& dom : domains) {
    for (const auto& family : enumerate_maps(dom)) {
      for (int k = 1; k <= 4; ++k) {
        std::map<std::string, double> params{{"k", k}, {"L", 0.4 * k}, {"c", 1.5 * k}, {"b", 0.3 * k}, {"phase", 0}};
        const DiscreteMap1D m = instantiate(family, params);
        const auto r = check_map_submetry(m, tol);
        if (!r.pass) failed += " " + family.kind;
        ok = ok && r.pass;
        ++maps;
      }
    }
  }
  const ComposedSubmetry c =
      compose(SignedDistanceSigmaSphere{{2, 1}}, FoldSegmentToSegment{-kPi / 4, kPi / 4, 2, kPi / 4});
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> level(0, kPi / 4);
  int interior = 0;
  for (int i = 0; i < 10; ++i) {
    const double y1 = level(rng), y2 = level(rng);
    tol.rng_seed = rng();
    ok = ok && check_equidistance(AnySubmetry{c}, y1, y2, tol).pass;
    ok = ok && fiber_composed(c, y1).components.size() == 2;
    ++interior;
  }
  return {ok, std::to_string(maps) + " maps pass" + (failed.empty() ? "" : ", failed:" + failed) +
                  "; folded sphere: equidistance and 2 components at " + std::to_string(interior) + " levels"};
}

// ---- 10 --------------------------------------------------------------------

struct Item {
  std::string kind;
  double level;
  std::vector<double> center;
  double radius;  // segments: x of the first endpoint
  bool operator<(const Item& o) const {
    return std::tie(kind, level, center, radius) < std::tie(o.kind, o.level, o.center, o.radius);
  }
};

std::vector<double> numbers(const std::string& s) {
  std::vector<double> out;
  std::istringstream in(s);
  for (double v; in >> v;) out.push_back(v);
  return out;
}

std::map<std::string, std::string> attributes(const std::string& element) {
  static const std::regex attr(R"re(([a-z-]+)="([^"]*)")re");
  std::map<std::string, std::string> out;
  for (std::sregex_iterator it(element.begin(), element.end(), attr), end; it != end; ++it) out[(*it)[1]] = (*it)[2];
  return out;
}

std::vector<Item> inventory_from_svg(const std::string& svg) {
  static const std::regex element(R"(<(path|circle)[^>]*data-kind="[^>]*>)");
  std::vector<Item> out;
  std::set<std::pair<std::string, std::string>> seen;
  for (std::sregex_iterator it(svg.begin(), svg.end(), element), end; it != end; ++it) {
    auto at = attributes(it->str());
    // sphere pieces and equator points show up on both disks
    const std::string key = at.count("data-piece") ? "piece " + at["data-piece"] : "point " + at["data-center"];
    if (at.count("data-hemisphere") && !seen.insert({at["data-level"], key}).second) continue;
    Item item{at["data-kind"], std::stod(at["data-level"]), {}, 0};
    if (item.kind == "segment") {
      item.center = numbers(at["data-p"]);
      const auto q = numbers(at["data-q"]);
      item.center.insert(item.center.end(), q.begin(), q.end());
    } else {
      item.center = numbers(at["data-center"]);
      if (at.count("data-radius")) item.radius = std::stod(at["data-radius"]);
    }
    out.push_back(item);
  }
  return out;
}

bool same(const Item& x, const Item& y) {
  if (x.kind != y.kind || x.center.size() != y.center.size()) return false;
  if (std::abs(x.level - y.level) > 1e-12 || std::abs(x.radius - y.radius) > 1e-12) return false;
  for (std::size_t i = 0; i < x.center.size(); ++i) {
    if (std::abs(x.center[i] - y.center[i]) > 1e-12) return false;
  }
  return true;
}

// Greedy one-to-one matching; both sides must be used up.
bool match(std::vector<Item> got, const std::vector<Item>& want, std::string& why) {
  for (const Item& w : want) {
    const auto it = std::find_if(got.begin(), got.end(), [&](const Item& g) { return same(g, w); });
    if (it == got.end()) {
      why += " missing " + w.kind + "@" + fmt(w.level) + " r=" + fmt(w.radius);
      return false;
    }
    got.erase(it);
  }
  if (!got.empty()) why += " extra " + got.front().kind + "@" + fmt(got.front().level);
  return got.empty();
}

std::vector<Item> plane_inventory(double a, double h, double window, const std::vector<double>& levels) {
  const Vec2 x0(0, h / 2), y0(2 * a, -h / 2);
  std::vector<Item> out;
  for (double e : levels) {
    for (double r : oracle::roots(e, a, window)) {
      if (r == 0) out.push_back({"point", e, {x0.x(), x0.y()}, 0});
      else out.push_back({"arc", e, {x0.x(), x0.y()}, r});
    }
    for (double r : oracle::roots(-e, a, window)) {
      if (r == 0) out.push_back({"point", e, {y0.x(), y0.y()}, 0});
      else out.push_back({"arc", e, {y0.x(), y0.y()}, r});
    }
    if (h > 0) {
      std::set<double> xs;
      for (double u : oracle::roots(e, a, window)) xs.insert({u, -u});
      for (double x : xs) {
        if (std::abs(x - 2 * a) <= window) out.push_back({"segment", e, {x, h / 2, x, -h / 2}, 0});
      }
    }
  }
  return out;
}

std::vector<Item> sphere_inventory(int k, int s, const std::vector<double>& levels) {
  const double a = oracle::pi / (2 * k);
  const Vec3 x0 = oracle::sphere_x0(), y0 = oracle::sphere_y0(k, s);
  std::vector<Item> out;
  for (double e : levels) {
    for (const auto& [c, lv] : {std::pair{x0, e}, std::pair{y0, -e}}) {
      for (double r : oracle::roots(lv, a, oracle::pi)) {
        if (std::abs(r) < 1e-12 || std::abs(r - oracle::pi) < 1e-12) {
          const Vec3 p = r < 1 ? c : Vec3(-c);
          out.push_back({"point", e, {p.x(), p.y(), p.z()}, 0});
        } else {
          out.push_back({"spherical_arc", e, {c.x(), c.y(), c.z()}, r});
        }
      }
    }
  }
  return out;
}

Outcome figures() {
  std::string why;
  const std::vector<double> plane_levels{-1, 0, 1};
  const std::string plane_svg = render_svg(SubmetryDescriptor{SignedDistanceSigmaPlane{{1, 2}}}, plane_levels);
  const auto plane_got = inventory_from_svg(plane_svg);
  const bool plane_ok = match(plane_got, plane_inventory(1, 2, 10, plane_levels), why);

  const double a = kPi / 8;
  const std::vector<double> sphere_levels{-a, 0, a};
  const std::string sphere_svg = render_svg(SubmetryDescriptor{SignedDistanceSigmaSphere{{4, 1}}}, sphere_levels);
  const auto sphere_got = inventory_from_svg(sphere_svg);
  const bool sphere_ok = match(sphere_got, sphere_inventory(4, 1, sphere_levels), why);
  const bool panels = sphere_svg.find("data-hemisphere=\"upper\"") != std::string::npos &&
                      sphere_svg.find("data-hemisphere=\"lower\"") != std::string::npos;
  return {plane_ok && sphere_ok && panels, std::to_string(plane_got.size()) + " plane and " +
                                               std::to_string(sphere_got.size()) + " sphere elements match" + why};
}

}  // namespace

int main() {
  run(1, "C1 junctions of every sigma curve", junctions);
  run(2, "analytic signed distance matches the chord oracle", oracle_equivalence);
  run(3, "fibers are equidistant", equidistance);
  run(4, "balls map onto balls", balls);
  run(5, "horizontal traces fold into the triangle wave", traces);
  run(6, "positive reach of the middle fiber", reach);
  run(7, "connectivity iff gcd(s, k) = 1", connectivity);
  run(8, "rotation submetry", rotation);
  run(9, "quotient maps and composition", quotients);
  run(10, "figure inventories", figures);
  std::printf("%s: %d of 10 criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
