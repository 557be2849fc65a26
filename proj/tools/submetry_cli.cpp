#include "submetry/render.hpp"
#include "submetry/serialize.hpp"
#include "submetry/suite.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

using namespace submetry;

namespace {

std::string num(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(text);
  while (std::getline(is, cur, sep)) {
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw InvalidInput("not a number: '" + s + "'");
  }
  if (used != s.size()) throw InvalidInput("not a number: '" + s + "'");
  return v;
}

std::vector<double> parse_list(const std::string& text, std::size_t expected = 0) {
  std::vector<double> out;
  for (const auto& tok : split(text, ',')) out.push_back(parse_double(tok));
  if (expected && out.size() != expected) {
    throw InvalidInput("expected " + std::to_string(expected) + " comma-separated values in '" + text + "'");
  }
  return out;
}

// "a=1 h=0" or "a=1,h=0"
std::map<std::string, double> parse_keyvals(const std::vector<std::string>& tokens) {
  std::map<std::string, double> out;
  for (const auto& token : tokens) {
    for (const auto& kv : split(token, ',')) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw InvalidInput("expected key=value, got '" + kv + "'");
      out[kv.substr(0, eq)] = parse_double(kv.substr(eq + 1));
    }
  }
  return out;
}

double need(const std::map<std::string, double>& kv, const std::string& key, const char* flag) {
  const auto it = kv.find(key);
  if (it == kv.end()) throw InvalidInput(std::string(flag) + " needs " + key + "=...");
  return it->second;
}

int as_int(double v, const char* what) {
  if (v != std::floor(v) || std::abs(v) > 1e9) throw InvalidInput(std::string(what) + " must be an integer");
  return static_cast<int>(v);
}

Point parse_point(const std::string& text) {
  const auto v = parse_list(text);
  if (v.size() == 2) return PlanePoint(v[0], v[1]);
  if (v.size() == 3) return SpherePoint::normalized(Vec3(v[0], v[1], v[2]));
  throw InvalidInput("a point needs 2 (plane) or 3 (sphere) coordinates: '" + text + "'");
}

struct Options {
  std::vector<std::string> plane_sigma;
  std::vector<std::string> sphere_sigma;
  std::string rotation;
  std::string projection;
  std::string convex_point;
  std::string convex_segment;
  std::string convex_half_line;
  std::string descriptor_file;
  int fold = 0;
  double fold_phase = 0.0;
  bool bypass = false;

  std::uint64_t seed = ToleranceProfile{}.rng_seed;
  double tol_metric = ToleranceProfile{}.tol_metric;
  double tol_pos = ToleranceProfile{}.tol_pos;
  double tol_tan = ToleranceProfile{}.tol_tan;
  long samples = ToleranceProfile{}.samples;
  long oracle_chords = ToleranceProfile{}.oracle_chords;
  double window = 10.0;
  std::string out;

  double level = 0.0;
  std::string csv;
  long csv_samples = 1000;
  std::string point;
  std::string start;
  bool inward = false;
  double t_max = 0.0;
  double dt = 0.0;
  std::string suite = "full";
  std::string curve_file;
  int kmax = 6;
  std::string levels;
  int size_px = 800;
  double stroke_middle = RenderOptions{}.stroke_middle;
  double stroke_boundary = RenderOptions{}.stroke_boundary;
  double stroke_other = RenderOptions{}.stroke_other;
};

ToleranceProfile tolerance_of(const Options& o) {
  ToleranceProfile t;
  t.rng_seed = o.seed;
  t.tol_metric = o.tol_metric;
  t.tol_pos = o.tol_pos;
  t.tol_tan = o.tol_tan;
  t.samples = o.samples;
  t.oracle_chords = o.oracle_chords;
  t.validate();
  return t;
}

std::optional<SphereSigmaParams> sphere_params(const Options& o) {
  if (o.sphere_sigma.empty()) return std::nullopt;
  const auto kv = parse_keyvals(o.sphere_sigma);
  SphereSigmaParams p;
  p.k = as_int(need(kv, "k", "--sphere-sigma"), "k");
  p.s = as_int(need(kv, "s", "--sphere-sigma"), "s");
  return p;
}

std::optional<PlaneSigmaParams> plane_params(const Options& o) {
  if (o.plane_sigma.empty()) return std::nullopt;
  const auto kv = parse_keyvals(o.plane_sigma);
  PlaneSigmaParams p;
  p.a = need(kv, "a", "--plane-sigma");
  p.h = kv.count("h") ? kv.at("h") : 0.0;
  return p;
}

AnySubmetry descriptor_of(const Options& o) {
  std::vector<SubmetryDescriptor> found;
  std::optional<AnySubmetry> from_file;
  if (auto p = plane_params(o)) found.push_back(SignedDistanceSigmaPlane{*p});
  if (auto p = sphere_params(o)) found.push_back(SignedDistanceSigmaSphere{*p});
  if (!o.rotation.empty()) found.push_back(SphereRotation{std::get<SpherePoint>(parse_point(o.rotation))});
  if (!o.projection.empty()) found.push_back(OrthogonalProjection{parse_double(o.projection)});
  if (!o.convex_point.empty()) {
    const auto v = parse_list(o.convex_point, 2);
    found.push_back(DistanceToConvex{PointSeed{{v[0], v[1]}}});
  }
  if (!o.convex_segment.empty()) {
    const auto v = parse_list(o.convex_segment, 4);
    found.push_back(DistanceToConvex{SegmentSeed{{v[0], v[1]}, {v[2], v[3]}}});
  }
  if (!o.convex_half_line.empty()) {
    const auto v = parse_list(o.convex_half_line, 4);
    const Vec2 dir(v[2], v[3]);
    if (!(dir.norm() > 0)) throw InvalidInput("--convex-half-line needs a nonzero direction");
    found.push_back(DistanceToConvex{HalfLineSeed{{v[0], v[1]}, dir.normalized()}});
  }
  if (!o.descriptor_file.empty()) from_file = decode_any_submetry(read_json_file(o.descriptor_file));

  const std::size_t count = found.size() + (from_file ? 1 : 0);
  if (count == 0) throw InvalidInput("no submetry given (use --plane-sigma, --sphere-sigma, --rotation, ...)");
  if (count > 1) throw InvalidInput("give exactly one submetry");

  AnySubmetry s = from_file ? *from_file : AnySubmetry{found.front()};
  if (auto* d = std::get_if<SubmetryDescriptor>(&s)) validate(*d);
  if (o.fold != 0) {
    const auto* d = std::get_if<SubmetryDescriptor>(&s);
    if (!d) throw InvalidInput("--fold applies to a plain descriptor");
    const Space1D base = base_space(*d);
    const auto* seg = std::get_if<Segment>(&base);
    if (!seg) throw InvalidInput("--fold needs a segment base");
    s = compose(*d, FoldSegmentToSegment{seg->lo, seg->hi, o.fold, o.fold_phase});
  }
  return s;
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) std::cout << text;
  else write_text_file(o.out, text);
}

int cmd_build(const Options& o) {
  LeafCurve curve;
  if (auto p = plane_params(o)) {
    if (!sphere_params(o) && o.bypass) throw InvalidInput("--bypass applies to --sphere-sigma");
    curve = build_sigma_plane(*p, o.window);
  } else if (auto p = sphere_params(o)) {
    curve = build_sigma_sphere(*p, o.bypass);
  } else {
    throw InvalidInput("build needs --plane-sigma or --sphere-sigma");
  }
  emit(o, canonical_dump(encode(curve)));
  const VerificationReport c1 = check_junctions_c1(curve, tolerance_of(o));
  std::cerr << "pieces: " << curve.pieces.size() << "\njunctions: " << curve.junctions.size()
            << "\ncomponents: " << check_connectivity(curve) << "\nmax junction gap: "
            << num(c1.parameters.value("max_gap", 0.0)) << "\nmax tangent mismatch: "
            << num(c1.parameters.value("max_tangent_angle", 0.0)) << "\n";
  return 0;
}

void write_fiber_csv(const std::string& path, const FiberSet& f, long count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::ostringstream os;
  const bool sphere = f.ambient == Ambient::Sphere;
  os << (sphere ? "x,y,z,level\n" : "x,y,level\n");
  for (const Point& p : sample_fiber(f, count, rng)) {
    const Vec3 v = embed(p);
    os << num(v.x()) << "," << num(v.y()) << ",";
    if (sphere) os << num(v.z()) << ",";
    os << num(f.level) << "\n";
  }
  write_text_file(path, os.str());
}

int cmd_fiber(const Options& o) {
  const AnySubmetry s = descriptor_of(o);
  if (!contains(submetry_base(s), o.level)) throw InvalidInput("level " + num(o.level) + " is outside the base");
  const FiberSet f = submetry_fiber(s, o.level, o.window);
  emit(o, canonical_dump(encode(f)));
  if (!o.csv.empty()) write_fiber_csv(o.csv, f, o.csv_samples, o.seed);
  return 0;
}

int cmd_eval(const Options& o) {
  const AnySubmetry s = descriptor_of(o);
  if (o.point.empty()) throw InvalidInput("eval needs --point");
  const Point p = parse_point(o.point);
  if (ambient_of(p) != submetry_ambient(s)) throw InvalidInput("point does not live in the ambient space");
  std::cout << num(submetry_evaluate(s, p)) << "\n";
  return 0;
}

int cmd_trace(const Options& o) {
  const AnySubmetry s = descriptor_of(o);
  const auto* d = std::get_if<SubmetryDescriptor>(&s);
  if (!d) throw InvalidInput("trace needs a plain descriptor");
  if (o.start.empty()) throw InvalidInput("trace needs --start");
  const Point start = parse_point(o.start);
  if (ambient_of(start) != ambient_of(*d)) throw InvalidInput("start does not live in the ambient space");
  const Space1D base = base_space(*d);
  double scale = 2.0;
  if (const auto* seg = std::get_if<Segment>(&base)) scale = seg->hi - seg->lo;
  const double t_max = o.t_max > 0 ? o.t_max : 3 * scale;
  const double dt = o.dt > 0 ? o.dt : scale / 200;
  const TraceResult r = trace_horizontal(*d, start, !o.inward, t_max, dt, tolerance_of(o));
  if (!o.csv.empty()) {
    std::ostringstream os;
    const bool sphere = ambient_of(*d) == Ambient::Sphere;
    os << (sphere ? "t,x,y,z,level\n" : "t,x,y,level\n");
    for (std::size_t i = 0; i < r.t.size(); ++i) {
      const Vec3 v = embed(r.path[i]);
      os << num(r.t[i]) << "," << num(v.x()) << "," << num(v.y()) << ",";
      if (sphere) os << num(v.z()) << ",";
      os << num(r.profile[i]) << "\n";
    }
    write_text_file(o.csv, os.str());
  }
  emit(o, canonical_dump(encode(r.report)));
  std::cerr << "fold identity: " << (r.report.pass ? "PASS" : "FAIL")
            << " max_deviation=" << num(r.report.max_deviation);
  if (r.singular_hit) std::cerr << " singular_hit=" << num(*r.singular_hit);
  std::cerr << "\n";
  return r.report.pass ? 0 : 1;
}

int cmd_verify(const Options& o) {
  const ToleranceProfile tol = tolerance_of(o);
  std::vector<VerificationReport> reports;
  if (!o.curve_file.empty()) {
    reports = run_curve_suite(decode_leaf_curve(read_json_file(o.curve_file)), o.suite, tol);
  } else {
    reports = run_suite(descriptor_of(o), o.suite, tol, o.window);
  }
  emit(o, canonical_dump(report_bundle(o.suite, reports, tol)));
  for (const auto& r : reports) {
    std::cerr << (r.pass ? "PASS " : "FAIL ") << r.check_name << " max_deviation=" << num(r.max_deviation)
              << " tolerance=" << num(r.tolerance) << "\n";
  }
  return all_pass(reports) ? 0 : 1;
}

int cmd_enumerate(const Options& o) {
  if (o.kmax < 1) throw InvalidInput("--kmax must be at least 1");
  std::ostringstream os;
  os << "k\ts\ttype\ta\tbase\tpieces\n";
  for (const auto& d : enumerate_sphere(o.kmax)) {
    const auto seg = std::get<Segment>(base_space(d));
    if (std::holds_alternative<SphereRotation>(d)) {
      os << "1\t-\trotation\t" << num(seg.hi) << "\t[0, " << num(seg.hi) << "]\t-\n";
      continue;
    }
    const auto& p = std::get<SignedDistanceSigmaSphere>(d).params;
    os << p.k << "\t" << p.s << "\tsigma\t" << num(p.a()) << "\t[" << num(seg.lo) << ", " << num(seg.hi) << "]\t"
       << build_sigma_sphere(p).pieces.size() << "\n";
  }
  emit(o, os.str());
  return 0;
}

int cmd_render(const Options& o) {
  const AnySubmetry s = descriptor_of(o);
  if (o.levels.empty()) throw InvalidInput("render needs --levels");
  const auto levels = parse_list(o.levels);
  const Space1D base = submetry_base(s);
  for (double y : levels) {
    if (!contains(base, y, 1e-12)) throw InvalidInput("level " + num(y) + " is outside the base");
  }
  RenderOptions r;
  r.window_radius = o.window;
  r.size_px = o.size_px;
  r.stroke_middle = o.stroke_middle;
  r.stroke_boundary = o.stroke_boundary;
  r.stroke_other = o.stroke_other;
  emit(o, render_svg(s, levels, r));
  return 0;
}

void add_descriptor_flags(CLI::App& app, Options& o) {
  app.add_option("--plane-sigma", o.plane_sigma, "sigma curve in the plane: a=.. h=..")->expected(1, 2);
  app.add_option("--sphere-sigma", o.sphere_sigma, "sigma curve on the sphere: k=.. s=..")->expected(1, 2);
  app.add_option("--rotation", o.rotation, "rotation about the pole x,y,z");
  app.add_option("--projection", o.projection, "orthogonal projection onto the axis at this angle");
  app.add_option("--convex-point", o.convex_point, "distance to the point x,y");
  app.add_option("--convex-segment", o.convex_segment, "distance to the segment x1,y1,x2,y2");
  app.add_option("--convex-half-line", o.convex_half_line, "distance to the half-line x,y,dx,dy");
  app.add_option("--descriptor", o.descriptor_file, "descriptor JSON file");
  app.add_option("--fold", o.fold, "compose with the degree-K fold of the base segment");
  app.add_option("--fold-phase", o.fold_phase, "phase of the fold");
  app.add_flag("--bypass", o.bypass, "build disconnected sphere curves (gcd(s,k) > 1)");
}

void add_global_flags(CLI::App& app, Options& o) {
  app.add_option("--seed", o.seed, "RNG seed");
  app.add_option("--tol-metric", o.tol_metric, "metric tolerance");
  app.add_option("--tol-pos", o.tol_pos, "position tolerance");
  app.add_option("--tol-tan", o.tol_tan, "tangent tolerance (rad)");
  app.add_option("--samples", o.samples, "random samples per check");
  app.add_option("--oracle-chords", o.oracle_chords, "chords for brute-force distance");
  app.add_option("--window", o.window, "plane window radius");
  app.add_option("--out", o.out, "output file (default stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equidistant decompositions of the plane and the sphere"};
  app.require_subcommand(1);
  Options o;
  add_global_flags(app, o);
  add_descriptor_flags(app, o);

  auto* build = app.add_subcommand("build", "write the sigma curve as JSON");
  auto* fib = app.add_subcommand("fiber", "write one fiber as JSON");
  fib->add_option("--level", o.level, "base value")->required();
  fib->add_option("--csv", o.csv, "CSV of sampled fiber points");
  fib->add_option("--csv-samples", o.csv_samples, "number of CSV samples");
  auto* ev = app.add_subcommand("eval", "print the base value of a point");
  ev->add_option("--point", o.point, "x,y or x,y,z")->required();
  auto* tr = app.add_subcommand("trace", "follow a horizontal geodesic");
  tr->add_option("--start", o.start, "start point on a fiber")->required();
  tr->add_flag("--inward", o.inward, "launch against the outward normal");
  tr->add_option("--t-max", o.t_max, "trace length");
  tr->add_option("--dt", o.dt, "step");
  tr->add_option("--csv", o.csv, "CSV of t,x,y[,z],level");
  auto* ver = app.add_subcommand("verify", "run a verification suite");
  ver->add_option("--suite", o.suite, "full, c1, connectivity, equidistance, ball, trace, reach");
  ver->add_option("--curve", o.curve_file, "verify a curve file written by build");
  auto* en = app.add_subcommand("enumerate", "list the sphere catalog");
  en->add_option("--kmax", o.kmax, "largest k");
  auto* ren = app.add_subcommand("render", "write an SVG figure");
  ren->add_option("--levels", o.levels, "comma-separated base values")->required();
  ren->add_option("--size", o.size_px, "panel size in px");
  ren->add_option("--stroke-middle", o.stroke_middle);
  ren->add_option("--stroke-boundary", o.stroke_boundary);
  ren->add_option("--stroke-other", o.stroke_other);
  for (auto* sub : {build, fib, ev, tr, ver, en, ren}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (build->parsed()) return cmd_build(o);
    if (fib->parsed()) return cmd_fiber(o);
    if (ev->parsed()) return cmd_eval(o);
    if (tr->parsed()) return cmd_trace(o);
    if (ver->parsed()) return cmd_verify(o);
    if (en->parsed()) return cmd_enumerate(o);
    if (ren->parsed()) return cmd_render(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
