#include "submetry/serialize.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace submetry {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

const json& field(const json& j, const char* key) {
  if (!j.is_object()) throw InvalidInput(std::string("expected a JSON object holding '") + key + "'");
  const auto it = j.find(key);
  if (it == j.end()) throw InvalidInput(std::string("missing field '") + key + "'");
  return *it;
}

const json& array_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_array()) throw InvalidInput(std::string("field '") + key + "' must be an array");
  return v;
}

double number(const json& j, const char* key) {
  const json& v = field(j, key);
  if (v.is_null()) return std::numeric_limits<double>::infinity();
  if (!v.is_number()) throw InvalidInput(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

double number_or(const json& j, const char* key, double fallback) {
  return j.is_object() && j.contains(key) ? number(j, key) : fallback;
}

long integer(const json& j, const char* key) {
  const json& v = field(j, key);
  if (v.is_number_integer()) return v.get<long>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d == std::floor(d) && std::abs(d) < 1e15) return static_cast<long>(d);
  }
  throw InvalidInput(std::string("field '") + key + "' must be an integer");
}

std::string text(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_string()) throw InvalidInput(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

json encode_number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json vec_json(const Vec2& v) { return json::array({v.x(), v.y()}); }
json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

std::vector<double> number_array(const json& j, std::size_t n, const char* what) {
  if (!j.is_array() || j.size() != n) {
    throw InvalidInput(std::string(what) + " must be an array of " + std::to_string(n) + " numbers");
  }
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw InvalidInput(std::string(what) + " must contain numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

PlanePoint plane_point(const json& j, const char* what) {
  const auto v = number_array(j, 2, what);
  return PlanePoint(v[0], v[1]);
}

Vec3 vec3(const json& j, const char* what) {
  const auto v = number_array(j, 3, what);
  const Vec3 out(v[0], v[1], v[2]);
  if (!out.allFinite()) throw InvalidInput(std::string(what) + " must be finite");
  return out;
}

Ambient ambient_from(const std::string& s) {
  if (s == "plane") return Ambient::Plane;
  if (s == "sphere") return Ambient::Sphere;
  throw InvalidInput("unknown ambient '" + s + "'");
}

json encode_params(const CurveMetadata& m) {
  return std::visit(overloaded{
                        [](const std::monostate&) { return json(nullptr); },
                        [](const PlaneSigmaParams& p) { return json{{"type", "sigma_plane"}, {"a", p.a}, {"h", p.h}}; },
                        [](const SphereSigmaParams& p) { return json{{"type", "sigma_sphere"}, {"k", p.k}, {"s", p.s}}; },
                    },
                    m.params);
}

std::vector<std::size_t> index_array(const json& j, const char* what) {
  if (!j.is_array()) throw InvalidInput(std::string(what) + " must be an array");
  std::vector<std::size_t> out;
  for (const auto& v : j) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long>() >= 0)) {
      throw InvalidInput(std::string(what) + " must hold non-negative integers");
    }
    out.push_back(v.get<std::size_t>());
  }
  return out;
}

ConvexSeed decode_seed(const json& j) {
  const std::string type = text(j, "type");
  if (type == "point") return PointSeed{plane_point(field(j, "p"), "seed point")};
  if (type == "segment") {
    return SegmentSeed{plane_point(field(j, "p"), "segment start"), plane_point(field(j, "q"), "segment end")};
  }
  if (type == "half_line") {
    const auto d = number_array(field(j, "dir"), 2, "half-line direction");
    const Vec2 dir(d[0], d[1]);
    if (!(dir.allFinite() && dir.norm() > 0)) throw InvalidInput("half-line direction must be nonzero");
    return HalfLineSeed{plane_point(field(j, "origin"), "half-line origin"), dir.normalized()};
  }
  if (type == "line") {
    throw InvalidInput("a full line is not a valid convex seed: the other level sets of its distance are disconnected");
  }
  throw InvalidInput("unknown convex seed type '" + type + "'");
}

json encode_seed(const ConvexSeed& seed) {
  return std::visit(overloaded{
                        [](const PointSeed& s) { return json{{"type", "point"}, {"p", vec_json(s.p.vec())}}; },
                        [](const SegmentSeed& s) {
                          return json{{"type", "segment"}, {"p", vec_json(s.p.vec())}, {"q", vec_json(s.q.vec())}};
                        },
                        [](const HalfLineSeed& s) {
                          return json{{"type", "half_line"}, {"origin", vec_json(s.origin.vec())}, {"dir", vec_json(s.dir)}};
                        },
                    },
                    seed);
}

int checked_int(long v, const char* what) {
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw InvalidInput(std::string(what) + " out of range");
  }
  return static_cast<int>(v);
}

}  // namespace

json encode(const Point& p) {
  if (const auto* pp = std::get_if<PlanePoint>(&p)) return vec_json(pp->vec());
  return vec_json(std::get<SpherePoint>(p).v);
}

Point decode_point(const json& j) {
  if (j.is_array() && j.size() == 2) return plane_point(j, "point");
  if (j.is_array() && j.size() == 3) return SpherePoint(vec3(j, "point"));
  throw InvalidInput("a point must be an array of 2 (plane) or 3 (sphere) numbers");
}

json encode(const CurvePiece& piece) {
  return std::visit(overloaded{
                        [](const LineSegment& s) {
                          return json{{"type", "segment"}, {"p", vec_json(s.p.vec())}, {"q", vec_json(s.q.vec())}};
                        },
                        [](const CircularArc& a) {
                          return json{{"type", "arc"},
                                      {"center", vec_json(a.center.vec())},
                                      {"radius", a.radius},
                                      {"start_angle", a.start_angle},
                                      {"sweep", a.sweep}};
                        },
                        [](const SphericalArc& a) {
                          return json{{"type", "spherical_arc"},
                                      {"center", vec_json(a.center.v)},
                                      {"angular_radius", a.angular_radius},
                                      {"start_dir", vec_json(a.start_dir)},
                                      {"sweep", a.sweep}};
                        },
                    },
                    piece);
}

CurvePiece decode_piece(const json& j) {
  const std::string type = text(j, "type");
  if (type == "segment") {
    LineSegment s{plane_point(field(j, "p"), "segment start"), plane_point(field(j, "q"), "segment end")};
    if (distance(s.p, s.q) == 0) throw InvalidInput("segment endpoints must differ");
    return s;
  }
  if (type == "arc") {
    CircularArc a{plane_point(field(j, "center"), "arc center"), number(j, "radius"), number(j, "start_angle"),
                  number(j, "sweep")};
    if (!(std::isfinite(a.radius) && a.radius > 0)) throw InvalidInput("arc radius must be positive");
    if (!(std::isfinite(a.start_angle) && std::isfinite(a.sweep) && std::abs(a.sweep) <= 2 * kPi + 1e-12)) {
      throw InvalidInput("arc angles must be finite with |sweep| <= 2 pi");
    }
    return a;
  }
  if (type == "spherical_arc") {
    SphericalArc a{SpherePoint(vec3(field(j, "center"), "arc center")), number(j, "angular_radius"),
                   vec3(field(j, "start_dir"), "arc start direction"), number(j, "sweep")};
    if (!(a.angular_radius > 0 && a.angular_radius < kPi)) throw InvalidInput("angular radius must lie in (0, pi)");
    if (std::abs(a.start_dir.norm() - 1) > 1e-12 || std::abs(a.start_dir.dot(a.center.v)) > 1e-12) {
      throw InvalidInput("start direction must be unit and orthogonal to the center");
    }
    if (!(std::isfinite(a.sweep) && std::abs(a.sweep) <= 2 * kPi + 1e-12)) {
      throw InvalidInput("arc sweep must be finite with |sweep| <= 2 pi");
    }
    return a;
  }
  throw InvalidInput("unknown piece type '" + type + "'");
}

json encode(const LeafCurve& curve) {
  json pieces = json::array();
  for (const auto& p : curve.pieces) pieces.push_back(encode(p));
  json junctions = json::array();
  for (const auto& jn : curve.junctions) {
    junctions.push_back({{"from", jn.from}, {"to", jn.to}, {"point", encode(jn.point)}});
  }
  return {{"ambient", to_string(curve.ambient)},
          {"pieces", pieces},
          {"junctions", junctions},
          {"orientation", curve.orientation},
          {"metadata",
           {{"params", encode_params(curve.metadata)},
            {"window_radius", curve.metadata.window_radius},
            {"bypass", curve.metadata.bypass}}}};
}

LeafCurve decode_leaf_curve(const json& j) {
  LeafCurve c;
  c.ambient = ambient_from(text(j, "ambient"));
  for (const auto& p : array_field(j, "pieces")) {
    c.pieces.push_back(decode_piece(p));
    if (ambient_of(c.pieces.back()) != c.ambient) throw InvalidInput("piece does not match the curve ambient");
  }
  for (const auto& jn : array_field(j, "junctions")) {
    const long from = integer(jn, "from");
    const long to = integer(jn, "to");
    if (from < 0 || to < 0 || static_cast<std::size_t>(from) >= c.pieces.size() ||
        static_cast<std::size_t>(to) >= c.pieces.size()) {
      throw InvalidInput("junction index out of range");
    }
    c.junctions.push_back({static_cast<std::size_t>(from), static_cast<std::size_t>(to), decode_point(field(jn, "point"))});
  }
  for (const auto& o : array_field(j, "orientation")) {
    if (!o.is_number_integer() || (o.get<int>() != 1 && o.get<int>() != -1)) {
      throw InvalidInput("orientation entries must be +1 or -1");
    }
    c.orientation.push_back(o.get<int>());
  }
  if (!c.orientation.empty() && c.orientation.size() != c.pieces.size()) {
    throw InvalidInput("orientation length must match the piece count");
  }
  if (j.contains("metadata")) {
    const json& m = j["metadata"];
    c.metadata.window_radius = number_or(m, "window_radius", 0.0);
    c.metadata.bypass = m.contains("bypass") && m["bypass"].is_boolean() && m["bypass"].get<bool>();
    if (m.contains("params") && !m["params"].is_null()) {
      const json& p = m["params"];
      const std::string type = text(p, "type");
      if (type == "sigma_plane") c.metadata.params = PlaneSigmaParams{number(p, "a"), number(p, "h")};
      else if (type == "sigma_sphere")
        c.metadata.params = SphereSigmaParams{checked_int(integer(p, "k"), "k"), checked_int(integer(p, "s"), "s")};
      else throw InvalidInput("unknown curve parameter type '" + type + "'");
    }
  }
  return c;
}

json encode(const FiberSet& fiber) {
  json pieces = json::array();
  for (const auto& p : fiber.pieces) pieces.push_back(encode(p));
  json points = json::array();
  for (const auto& p : fiber.singular_points) points.push_back(encode(p));
  json comps = json::array();
  for (const auto& c : fiber.components) comps.push_back({{"pieces", c.pieces}, {"points", c.points}});
  return {{"ambient", to_string(fiber.ambient)},
          {"level", fiber.level},
          {"pieces", pieces},
          {"singular_points", points},
          {"components", comps}};
}

FiberSet decode_fiber_set(const json& j) {
  FiberSet f;
  f.ambient = ambient_from(text(j, "ambient"));
  f.level = number(j, "level");
  for (const auto& p : array_field(j, "pieces")) f.pieces.push_back(decode_piece(p));
  for (const auto& p : array_field(j, "singular_points")) f.singular_points.push_back(decode_point(p));
  for (const auto& c : array_field(j, "components")) {
    Component comp{index_array(field(c, "pieces"), "component pieces"), index_array(field(c, "points"), "component points")};
    for (auto i : comp.pieces)
      if (i >= f.pieces.size()) throw InvalidInput("component piece index out of range");
    for (auto i : comp.points)
      if (i >= f.singular_points.size()) throw InvalidInput("component point index out of range");
    f.components.push_back(std::move(comp));
  }
  return f;
}

json encode(const Space1D& space) {
  return std::visit(overloaded{
                        [](const Line&) { return json{{"type", "line"}}; },
                        [](const HalfLine& h) { return json{{"type", "half_line"}, {"origin", h.origin}}; },
                        [](const Segment& s) { return json{{"type", "segment"}, {"lo", s.lo}, {"hi", s.hi}}; },
                        [](const Circle& c) { return json{{"type", "circle"}, {"length", c.length}}; },
                    },
                    space);
}

Space1D decode_space(const json& j) {
  const std::string type = text(j, "type");
  Space1D s;
  if (type == "line") s = Line{};
  else if (type == "half_line") s = HalfLine{number_or(j, "origin", 0.0)};
  else if (type == "segment") s = Segment{number(j, "lo"), number(j, "hi")};
  else if (type == "circle") s = Circle{number(j, "length")};
  else throw InvalidInput("unknown space type '" + type + "'");
  validate(s);
  return s;
}

json encode(const DiscreteMap1D& map) {
  json j = std::visit(
      overloaded{
          [](const Identity& i) { return json{{"space", encode(i.space)}}; },
          [](const CoverLineToCircle& c) { return json{{"c", c.c}}; },
          [](const FoldLineToHalfLine& f) { return json{{"b", f.b}}; },
          [](const FoldLineToSegment& f) { return json{{"length", f.length}, {"phase", f.phase}}; },
          [](const FoldHalfLineToSegment& f) { return json{{"origin", f.origin}, {"length", f.length}}; },
          [](const CoverCircleToCircle& c) { return json{{"c", c.c}, {"k", c.k}}; },
          [](const FoldCircleToSegment& f) { return json{{"c", f.c}, {"k", f.k}, {"phase", f.phase}}; },
          [](const FoldSegmentToSegment& f) { return json{{"lo", f.lo}, {"hi", f.hi}, {"k", f.k}, {"phase", f.phase}}; },
      },
      map);
  j["kind"] = kind_name(map);
  return j;
}

DiscreteMap1D decode_map(const json& j) {
  const std::string kind = text(j, "kind");
  DiscreteMap1D m = Identity{Line{}};
  if (kind == "identity") m = Identity{decode_space(field(j, "space"))};
  else if (kind == "cover_line_to_circle") m = CoverLineToCircle{number(j, "c")};
  else if (kind == "fold_line_to_half_line") m = FoldLineToHalfLine{number_or(j, "b", 0.0)};
  else if (kind == "fold_line_to_segment") m = FoldLineToSegment{number(j, "length"), number_or(j, "phase", 0.0)};
  else if (kind == "fold_half_line_to_segment")
    m = FoldHalfLineToSegment{number_or(j, "origin", 0.0), number(j, "length")};
  else if (kind == "cover_circle_to_circle") m = CoverCircleToCircle{number(j, "c"), checked_int(integer(j, "k"), "k")};
  else if (kind == "fold_circle_to_segment")
    m = FoldCircleToSegment{number(j, "c"), checked_int(integer(j, "k"), "k"), number_or(j, "phase", 0.0)};
  else if (kind == "fold_segment_to_segment")
    m = FoldSegmentToSegment{number(j, "lo"), number(j, "hi"), checked_int(integer(j, "k"), "k"),
                             number_or(j, "phase", 0.0)};
  else throw InvalidInput("unknown map kind '" + kind + "'");
  validate(m);
  return m;
}

json encode(const SubmetryDescriptor& d) {
  return std::visit(overloaded{
                        [](const OrthogonalProjection& o) {
                          return json{{"type", "orthogonal_projection"}, {"axis_angle", o.axis_angle}};
                        },
                        [](const DistanceToConvex& c) {
                          return json{{"type", "distance_to_convex"}, {"seed", encode_seed(c.seed)}};
                        },
                        [](const SignedDistanceSigmaPlane& s) {
                          return json{{"type", "sigma_plane"}, {"a", s.params.a}, {"h", s.params.h}};
                        },
                        [](const SphereRotation& r) {
                          return json{{"type", "sphere_rotation"}, {"pole", vec_json(r.pole.v)}};
                        },
                        [](const SignedDistanceSigmaSphere& s) {
                          return json{{"type", "sigma_sphere"}, {"k", s.params.k}, {"s", s.params.s}};
                        },
                    },
                    d);
}

SubmetryDescriptor decode_descriptor(const json& j) {
  const std::string type = text(j, "type");
  SubmetryDescriptor d = OrthogonalProjection{};
  if (type == "orthogonal_projection") {
    d = OrthogonalProjection{number_or(j, "axis_angle", 0.0)};
  } else if (type == "distance_to_convex") {
    d = DistanceToConvex{decode_seed(field(j, "seed"))};
  } else if (type == "sigma_plane") {
    d = SignedDistanceSigmaPlane{{number(j, "a"), number_or(j, "h", 0.0)}};
  } else if (type == "sphere_rotation") {
    Vec3 pole = Vec3::UnitZ();
    if (j.contains("pole")) pole = vec3(j["pole"], "pole");
    if (!(pole.norm() > 0)) throw InvalidInput("pole must be nonzero");
    d = SphereRotation{SpherePoint::normalized(pole)};
  } else if (type == "sigma_sphere") {
    d = SignedDistanceSigmaSphere{{checked_int(integer(j, "k"), "k"), checked_int(integer(j, "s"), "s")}};
  } else {
    throw InvalidInput("unknown descriptor type '" + type + "'");
  }
  validate(d);
  return d;
}

json encode(const ComposedSubmetry& c) {
  return {{"type", "composed"}, {"inner", encode(c.inner)}, {"outer", encode(c.outer)}};
}

json encode(const AnySubmetry& s) {
  if (const auto* d = std::get_if<SubmetryDescriptor>(&s)) return encode(*d);
  return encode(std::get<ComposedSubmetry>(s));
}

AnySubmetry decode_any_submetry(const json& j) {
  if (text(j, "type") == "composed") {
    return compose(decode_descriptor(field(j, "inner")), decode_map(field(j, "outer")));
  }
  return decode_descriptor(j);
}

json encode(const ToleranceProfile& tol) {
  return {{"tol_pos", tol.tol_pos},
          {"tol_tan", tol.tol_tan},
          {"tol_metric", tol.tol_metric},
          {"oracle_chords", tol.oracle_chords},
          {"samples", tol.samples},
          {"rng_seed", tol.rng_seed}};
}

ToleranceProfile decode_tolerance(const json& j) {
  ToleranceProfile t;
  t.tol_pos = number_or(j, "tol_pos", t.tol_pos);
  t.tol_tan = number_or(j, "tol_tan", t.tol_tan);
  t.tol_metric = number_or(j, "tol_metric", t.tol_metric);
  if (j.contains("oracle_chords")) t.oracle_chords = integer(j, "oracle_chords");
  if (j.contains("samples")) t.samples = integer(j, "samples");
  if (j.contains("rng_seed")) {
    if (!j["rng_seed"].is_number_unsigned() && !(j["rng_seed"].is_number_integer() && j["rng_seed"].get<long>() >= 0)) {
      throw InvalidInput("rng_seed must be a non-negative integer");
    }
    t.rng_seed = j["rng_seed"].get<std::uint64_t>();
  }
  t.validate();
  return t;
}

json encode(const VerificationReport& r) {
  json witness = json::array();
  for (const auto& p : r.witness) witness.push_back(encode(p));
  return {{"check_name", r.check_name},
          {"pass", r.pass},
          {"max_deviation", encode_number(r.max_deviation)},
          {"tolerance", encode_number(r.tolerance)},
          {"witness", witness},
          {"parameters", r.parameters},
          {"seed", r.seed},
          {"events", r.events}};
}

VerificationReport decode_report(const json& j) {
  VerificationReport r;
  r.check_name = text(j, "check_name");
  const json& pass = field(j, "pass");
  if (!pass.is_boolean()) throw InvalidInput("field 'pass' must be a boolean");
  r.pass = pass.get<bool>();
  r.max_deviation = number(j, "max_deviation");
  r.tolerance = number(j, "tolerance");
  for (const auto& p : array_field(j, "witness")) r.witness.push_back(decode_point(p));
  r.parameters = field(j, "parameters");
  r.seed = field(j, "seed").get<std::uint64_t>();
  for (const auto& e : array_field(j, "events")) r.events.push_back(e.get<std::string>());
  return r;
}

std::string canonical_dump(const json& j) { return j.dump(2) + "\n"; }

json parse_json_text(const std::string& s) {
  try {
    return json::parse(s);
  } catch (const json::parse_error& e) {
    throw InvalidInput(std::string("malformed JSON: ") + e.what());
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str());
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << contents;
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace submetry
