#include "submetry/quotient.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace submetry {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kDedupTol = 1e-12;

double wrap(double u, double period) {
  const double w = u - period * std::floor(u / period);
  return w >= period ? 0.0 : w;
}

// Values in [0, L], zero at t = 0, period 2L.
double triangle(double t, double length) { return length - std::abs(wrap(t, 2 * length) - length); }

// All t in [t_lo, t_hi] with triangle(t, L) == y.
std::vector<double> triangle_preimages(double y, double length, double t_lo, double t_hi) {
  std::vector<double> out;
  const double period = 2 * length;
  for (double base : {y, -y}) {
    const double n0 = std::ceil((t_lo - base) / period - 1e-12);
    for (double n = n0;; n += 1) {
      const double t = base + n * period;
      if (t > t_hi + kDedupTol) break;
      if (t >= t_lo - kDedupTol) out.push_back(std::clamp(t, t_lo, t_hi));
    }
  }
  return out;
}

void sort_unique(std::vector<double>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end(), [](double x, double y) { return std::abs(x - y) <= 1e-10; }), v.end());
}

void require_positive(double v, const char* what) {
  if (!(std::isfinite(v) && v > 0)) throw InvalidInput(std::string(what) + " must be positive");
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw InvalidInput(std::string(what) + " must be finite");
}

void require_degree(int k) {
  if (k < 1) throw InvalidInput("degree must be a positive integer");
}

void require_in_domain(const DiscreteMap1D& m, double x) {
  if (!contains(domain_of(m), x, 1e-12)) {
    std::ostringstream os;
    os << "point " << x << " is not in the " << kind_name(domain_of(m)) << " domain of " << kind_name(m);
    throw InvalidInput(os.str());
  }
}

double param(const std::map<std::string, double>& params, const std::string& name) {
  const auto it = params.find(name);
  if (it == params.end()) throw InvalidInput("missing parameter '" + name + "'");
  return it->second;
}

double param_or(const std::map<std::string, double>& params, const std::string& name, double fallback) {
  const auto it = params.find(name);
  return it == params.end() ? fallback : it->second;
}

int degree_param(const std::map<std::string, double>& params) {
  const double k = param_or(params, "k", 1.0);
  if (k != std::floor(k) || k < 1) throw InvalidInput("degree k must be a positive integer");
  return static_cast<int>(k);
}

}  // namespace

Space1D quotient_space(const IsometryGroup1D& g) {
  return std::visit(overloaded{
                        [](const Trivial&) -> Space1D { return Line{}; },
                        [](const Translation& t) -> Space1D {
                          require_positive(t.a, "translation length");
                          return Circle{t.a};
                        },
                        [](const Reflection& r) -> Space1D {
                          require_finite(r.b, "reflection point");
                          return HalfLine{r.b};
                        },
                        [](const TranslationReflection& tr) -> Space1D {
                          require_finite(tr.a, "a");
                          require_finite(tr.b, "b");
                          if (!(tr.a < tr.b)) throw InvalidInput("translation-reflection group needs a < b");
                          return Segment{tr.a, tr.b};
                        },
                    },
                    g);
}

double project_to_quotient(const IsometryGroup1D& g, double x) {
  quotient_space(g);
  return std::visit(overloaded{
                        [&](const Trivial&) { return x; },
                        [&](const Translation& t) { return wrap(x, t.a); },
                        [&](const Reflection& r) { return r.b + std::abs(x - r.b); },
                        [&](const TranslationReflection& tr) { return tr.a + triangle(x - tr.a, tr.b - tr.a); },
                    },
                    g);
}

void validate(const DiscreteMap1D& m) {
  std::visit(overloaded{
                 [](const Identity& i) { validate(i.space); },
                 [](const CoverLineToCircle& c) { require_positive(c.c, "circumference"); },
                 [](const FoldLineToHalfLine& f) { require_finite(f.b, "pivot"); },
                 [](const FoldLineToSegment& f) {
                   require_positive(f.length, "fold length");
                   require_finite(f.phase, "phase");
                 },
                 [](const FoldHalfLineToSegment& f) {
                   require_finite(f.origin, "origin");
                   require_positive(f.length, "fold length");
                 },
                 [](const CoverCircleToCircle& c) {
                   require_positive(c.c, "circumference");
                   require_degree(c.k);
                 },
                 [](const FoldCircleToSegment& f) {
                   require_positive(f.c, "circumference");
                   require_degree(f.k);
                   require_finite(f.phase, "phase");
                 },
                 [](const FoldSegmentToSegment& f) {
                   validate(Space1D{Segment{f.lo, f.hi}});
                   require_degree(f.k);
                   require_finite(f.phase, "phase");
                   const double step = (f.hi - f.lo) / f.k;
                   const double q = f.phase / step;
                   if (std::abs(q - std::round(q)) > 1e-9) {
                     throw InvalidInput("segment fold phase must be a multiple of the folded length");
                   }
                 },
             },
             m);
}

Space1D domain_of(const DiscreteMap1D& m) {
  return std::visit(overloaded{
                        [](const Identity& i) -> Space1D { return i.space; },
                        [](const CoverLineToCircle&) -> Space1D { return Line{}; },
                        [](const FoldLineToHalfLine&) -> Space1D { return Line{}; },
                        [](const FoldLineToSegment&) -> Space1D { return Line{}; },
                        [](const FoldHalfLineToSegment& f) -> Space1D { return HalfLine{f.origin}; },
                        [](const CoverCircleToCircle& c) -> Space1D { return Circle{c.c}; },
                        [](const FoldCircleToSegment& f) -> Space1D { return Circle{f.c}; },
                        [](const FoldSegmentToSegment& f) -> Space1D { return Segment{f.lo, f.hi}; },
                    },
                    m);
}

Space1D codomain_of(const DiscreteMap1D& m) {
  return std::visit(overloaded{
                        [](const Identity& i) -> Space1D { return i.space; },
                        [](const CoverLineToCircle& c) -> Space1D { return Circle{c.c}; },
                        [](const FoldLineToHalfLine&) -> Space1D { return HalfLine{0.0}; },
                        [](const FoldLineToSegment& f) -> Space1D { return Segment{0.0, f.length}; },
                        [](const FoldHalfLineToSegment& f) -> Space1D { return Segment{0.0, f.length}; },
                        [](const CoverCircleToCircle& c) -> Space1D { return Circle{c.c / c.k}; },
                        [](const FoldCircleToSegment& f) -> Space1D { return Segment{0.0, f.c / (2 * f.k)}; },
                        [](const FoldSegmentToSegment& f) -> Space1D { return Segment{0.0, (f.hi - f.lo) / f.k}; },
                    },
                    m);
}

const char* kind_name(const DiscreteMap1D& m) {
  static constexpr const char* names[] = {
      "identity",
      "cover_line_to_circle",
      "fold_line_to_half_line",
      "fold_line_to_segment",
      "fold_half_line_to_segment",
      "cover_circle_to_circle",
      "fold_circle_to_segment",
      "fold_segment_to_segment",
  };
  return names[m.index()];
}

double apply_map(const DiscreteMap1D& m, double x) {
  validate(m);
  require_in_domain(m, x);
  return std::visit(overloaded{
                        [&](const Identity& i) { return clamp_to(i.space, x); },
                        [&](const CoverLineToCircle& c) { return wrap(x, c.c); },
                        [&](const FoldLineToHalfLine& f) { return std::abs(x - f.b); },
                        [&](const FoldLineToSegment& f) { return triangle(x - f.phase, f.length); },
                        [&](const FoldHalfLineToSegment& f) { return triangle(x - f.origin, f.length); },
                        [&](const CoverCircleToCircle& c) { return wrap(x, c.c / c.k); },
                        [&](const FoldCircleToSegment& f) { return triangle(x - f.phase, f.c / (2 * f.k)); },
                        [&](const FoldSegmentToSegment& f) {
                          return triangle(x - f.lo - f.phase, (f.hi - f.lo) / f.k);
                        },
                    },
                    m);
}

std::vector<double> preimages(const DiscreteMap1D& m, double y, double bound) {
  validate(m);
  if (!contains(codomain_of(m), y, 1e-12)) {
    std::ostringstream os;
    os << "value " << y << " is not in the codomain of " << kind_name(m);
    throw InvalidInput(os.str());
  }
  y = clamp_to(codomain_of(m), y);
  std::vector<double> out = std::visit(
      overloaded{
          [&](const Identity&) { return std::vector<double>{y}; },
          [&](const CoverLineToCircle& c) {
            std::vector<double> v;
            for (double n = std::ceil((-bound - y) / c.c); y + n * c.c <= bound; n += 1) v.push_back(y + n * c.c);
            return v;
          },
          [&](const FoldLineToHalfLine& f) {
            std::vector<double> v;
            for (double x : {f.b - y, f.b + y}) {
              if (std::abs(x) <= bound) v.push_back(x);
            }
            return v;
          },
          [&](const FoldLineToSegment& f) {
            auto v = triangle_preimages(y, f.length, -bound - f.phase, bound - f.phase);
            for (double& t : v) t += f.phase;
            return v;
          },
          [&](const FoldHalfLineToSegment& f) {
            std::vector<double> v;
            if (bound < f.origin) return v;
            v = triangle_preimages(y, f.length, 0.0, bound - f.origin);
            for (double& t : v) t += f.origin;
            return v;
          },
          [&](const CoverCircleToCircle& c) {
            std::vector<double> v;
            for (int j = 0; j < c.k; ++j) v.push_back(wrap(y + j * c.c / c.k, c.c));
            return v;
          },
          [&](const FoldCircleToSegment& f) {
            auto v = triangle_preimages(y, f.c / (2 * f.k), -f.phase, f.c - f.phase);
            for (double& t : v) t = wrap(t + f.phase, f.c);
            return v;
          },
          [&](const FoldSegmentToSegment& f) {
            auto v = triangle_preimages(y, (f.hi - f.lo) / f.k, -f.phase, f.hi - f.lo - f.phase);
            for (double& t : v) t = std::clamp(t + f.lo + f.phase, f.lo, f.hi);
            return v;
          },
      },
      m);
  sort_unique(out);
  if (std::holds_alternative<Circle>(domain_of(m)) && out.size() > 1) {
    // 0 and c - tiny are the same circle point.
    const double c = std::get<Circle>(domain_of(m)).length;
    if (out.front() + c - out.back() <= 1e-10) out.pop_back();
  }
  return out;
}

std::vector<MapFamily> enumerate_maps(const Space1D& domain) {
  validate(domain);
  std::vector<MapFamily> out;
  out.push_back({"identity", domain, {}, "the domain itself"});
  std::visit(overloaded{
                 [&](const Line&) {
                   out.push_back({"cover_line_to_circle", domain, {"c"}, "circle of length c"});
                   out.push_back({"fold_line_to_half_line", domain, {"b"}, "half-line [0, inf)"});
                   out.push_back({"fold_line_to_segment", domain, {"L", "phase"}, "segment [0, L]"});
                 },
                 [&](const HalfLine&) {
                   out.push_back({"fold_half_line_to_segment", domain, {"L"}, "segment [0, L]"});
                 },
                 [&](const Segment& s) {
                   std::ostringstream os;
                   os << "segment of length " << (s.hi - s.lo) << "/k";
                   out.push_back({"fold_segment_to_segment", domain, {"k", "phase"}, os.str()});
                 },
                 [&](const Circle& c) {
                   std::ostringstream cover, fold;
                   cover << "circle of length " << c.length << "/k";
                   fold << "segment of length " << c.length << "/2k";
                   out.push_back({"cover_circle_to_circle", domain, {"k"}, cover.str()});
                   out.push_back({"fold_circle_to_segment", domain, {"k", "phase"}, fold.str()});
                 },
             },
             domain);
  return out;
}

DiscreteMap1D instantiate(const MapFamily& family, const std::map<std::string, double>& params) {
  DiscreteMap1D m = Identity{family.domain};
  const std::string& kind = family.kind;
  if (kind == "identity") {
    m = Identity{family.domain};
  } else if (kind == "cover_line_to_circle") {
    m = CoverLineToCircle{param(params, "c")};
  } else if (kind == "fold_line_to_half_line") {
    m = FoldLineToHalfLine{param_or(params, "b", 0.0)};
  } else if (kind == "fold_line_to_segment") {
    m = FoldLineToSegment{param(params, "L"), param_or(params, "phase", 0.0)};
  } else if (kind == "fold_half_line_to_segment") {
    m = FoldHalfLineToSegment{std::get<HalfLine>(family.domain).origin, param(params, "L")};
  } else if (kind == "cover_circle_to_circle") {
    m = CoverCircleToCircle{std::get<Circle>(family.domain).length, degree_param(params)};
  } else if (kind == "fold_circle_to_segment") {
    m = FoldCircleToSegment{std::get<Circle>(family.domain).length, degree_param(params),
                            param_or(params, "phase", 0.0)};
  } else if (kind == "fold_segment_to_segment") {
    const auto& s = std::get<Segment>(family.domain);
    m = FoldSegmentToSegment{s.lo, s.hi, degree_param(params), param_or(params, "phase", 0.0)};
  } else {
    throw InvalidInput("unknown map family '" + kind + "'");
  }
  validate(m);
  return m;
}

ComposedSubmetry compose(const SubmetryDescriptor& inner, const DiscreteMap1D& outer) {
  validate(inner);
  validate(outer);
  const Space1D base = base_space(inner);
  const Space1D domain = domain_of(outer);
  if (same_space(base, domain, 1e-12)) return {inner, outer};

  DiscreteMap1D shifted = outer;
  bool ok = false;
  if (const auto* s = std::get_if<Segment>(&base)) {
    if (auto* f = std::get_if<FoldSegmentToSegment>(&shifted)) {
      if (std::abs((f->hi - f->lo) - (s->hi - s->lo)) <= 1e-12) {
        f->lo = s->lo;
        f->hi = s->hi;
        ok = true;
      }
    } else if (auto* i = std::get_if<Identity>(&shifted)) {
      if (const auto* t = std::get_if<Segment>(&i->space); t && std::abs((t->hi - t->lo) - (s->hi - s->lo)) <= 1e-12) {
        i->space = *s;
        ok = true;
      }
    }
  } else if (const auto* h = std::get_if<HalfLine>(&base)) {
    if (auto* f = std::get_if<FoldHalfLineToSegment>(&shifted)) {
      f->origin = h->origin;
      ok = true;
    } else if (auto* i = std::get_if<Identity>(&shifted); i && std::holds_alternative<HalfLine>(i->space)) {
      i->space = *h;
      ok = true;
    }
  }
  if (!ok) {
    std::ostringstream os;
    os << "cannot compose " << describe(inner) << " (base " << kind_name(base) << ") with " << kind_name(outer)
       << " (domain " << kind_name(domain) << ")";
    throw InvalidInput(os.str());
  }
  return {inner, shifted};
}

double evaluate_composed(const ComposedSubmetry& c, const Point& p) {
  return apply_map(c.outer, clamp_to(domain_of(c.outer), evaluate(c.inner, p)));
}

FiberSet fiber_composed(const ComposedSubmetry& c, double y, double window_radius) {
  FiberSet out;
  out.ambient = ambient_of(c.inner);
  out.level = y;
  for (double x : preimages(c.outer, y, window_radius)) {
    if (out.ambient == Ambient::Plane && std::holds_alternative<Line>(base_space(c.inner)) &&
        !(std::abs(x) < window_radius)) {
      continue;
    }
    FiberSet part = fiber(c.inner, x, window_radius);
    const std::size_t piece_offset = out.pieces.size();
    const std::size_t point_offset = out.singular_points.size();
    out.pieces.insert(out.pieces.end(), part.pieces.begin(), part.pieces.end());
    out.singular_points.insert(out.singular_points.end(), part.singular_points.begin(), part.singular_points.end());
    for (Component comp : part.components) {
      for (auto& i : comp.pieces) i += piece_offset;
      for (auto& i : comp.points) i += point_offset;
      out.components.push_back(std::move(comp));
    }
  }
  return out;
}

}  // namespace submetry
