#include "submetry/render.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace submetry {

namespace {

std::string num(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string pair_text(double x, double y) { return num(x) + " " + num(y); }

struct Style {
  std::string cls;
  std::string color;
  double width;
};

Style style_for(const std::string& cls, const RenderOptions& o) {
  if (cls == "middle") return {cls, o.color_middle, o.stroke_middle};
  if (cls == "boundary-plus") return {cls, o.color_plus, o.stroke_boundary};
  if (cls == "boundary-minus") return {cls, o.color_minus, o.stroke_boundary};
  return {cls, o.color_other, o.stroke_other};
}

std::string common_attrs(const Style& st, double level, std::size_t component) {
  std::ostringstream os;
  os << "class=\"fiber " << st.cls << "\" data-level=\"" << num(level) << "\" data-component=\"" << component
     << "\" fill=\"none\" stroke=\"" << st.color << "\" stroke-width=\"" << num(st.width)
     << "\" vector-effect=\"non-scaling-stroke\"";
  return os.str();
}

std::vector<std::size_t> component_of_pieces(const FiberSet& f) {
  std::vector<std::size_t> out(f.pieces.size(), 0);
  for (std::size_t c = 0; c < f.components.size(); ++c) {
    for (auto i : f.components[c].pieces) out[i] = c;
  }
  return out;
}

std::vector<std::size_t> component_of_points(const FiberSet& f) {
  std::vector<std::size_t> out(f.singular_points.size(), 0);
  for (std::size_t c = 0; c < f.components.size(); ++c) {
    for (auto i : f.components[c].points) out[i] = c;
  }
  return out;
}

// Arc path in world coordinates, split into parts of at most pi so the SVG
// arc flags stay unambiguous.
std::string arc_path(const CircularArc& a) {
  const int parts = std::max(1, static_cast<int>(std::ceil(std::abs(a.sweep) / kPi - 1e-12)));
  const Vec2 c = a.center.vec();
  auto at = [&](double ang) { return c + a.radius * Vec2(std::cos(ang), std::sin(ang)); };
  std::ostringstream os;
  const Vec2 p0 = at(a.start_angle);
  os << "M " << pair_text(p0.x(), p0.y());
  for (int i = 1; i <= parts; ++i) {
    const Vec2 p = at(a.start_angle + a.sweep * i / parts);
    os << " A " << num(a.radius) << " " << num(a.radius) << " 0 0 " << (a.sweep > 0 ? 1 : 0) << " "
       << pair_text(p.x(), p.y());
  }
  return os.str();
}

void render_plane(std::ostringstream& os, const std::vector<FiberSet>& fibers, const AnySubmetry& s,
                  const RenderOptions& o) {
  const double w = o.window_radius;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << o.size_px << "\" height=\"" << o.size_px
     << "\" viewBox=\"" << num(-w) << " " << num(-w) << " " << num(2 * w) << " " << num(2 * w) << "\">\n";
  os << "<rect x=\"" << num(-w) << "\" y=\"" << num(-w) << "\" width=\"" << num(2 * w) << "\" height=\"" << num(2 * w)
     << "\" fill=\"white\"/>\n";
  os << "<g transform=\"scale(1,-1)\">\n";
  for (const FiberSet& f : fibers) {
    const Style st = style_for(level_class(s, f.level), o);
    const auto piece_comp = component_of_pieces(f);
    const auto point_comp = component_of_points(f);
    for (std::size_t i = 0; i < f.pieces.size(); ++i) {
      const std::string attrs = common_attrs(st, f.level, piece_comp[i]);
      if (const auto* seg = std::get_if<LineSegment>(&f.pieces[i])) {
        os << "<path " << attrs << " data-kind=\"segment\" data-p=\"" << pair_text(seg->p.x, seg->p.y)
           << "\" data-q=\"" << pair_text(seg->q.x, seg->q.y) << "\" d=\"M " << pair_text(seg->p.x, seg->p.y)
           << " L " << pair_text(seg->q.x, seg->q.y) << "\"/>\n";
      } else {
        const auto& arc = std::get<CircularArc>(f.pieces[i]);
        os << "<path " << attrs << " data-kind=\"arc\" data-center=\"" << pair_text(arc.center.x, arc.center.y)
           << "\" data-radius=\"" << num(arc.radius) << "\" data-start-angle=\"" << num(arc.start_angle)
           << "\" data-sweep=\"" << num(arc.sweep) << "\" d=\"" << arc_path(arc) << "\"/>\n";
      }
    }
    for (std::size_t i = 0; i < f.singular_points.size(); ++i) {
      const auto& p = std::get<PlanePoint>(f.singular_points[i]);
      os << "<circle class=\"point " << st.cls << "\" data-level=\"" << num(f.level) << "\" data-component=\""
         << point_comp[i] << "\" data-kind=\"point\" data-center=\"" << pair_text(p.x, p.y) << "\" cx=\""
         << num(p.x) << "\" cy=\"" << num(p.y) << "\" r=\"" << num(w / 150) << "\" fill=\"" << st.color
         << "\"/>\n";
    }
  }
  os << "</g>\n</svg>\n";
}

struct Panel {
  double cx;
  double cy;
  double radius;
};

std::string project(const Panel& p, const Vec3& v) { return pair_text(p.cx + p.radius * v.x(), p.cy - p.radius * v.y()); }

void render_sphere(std::ostringstream& os, const std::vector<FiberSet>& fibers, const AnySubmetry& s,
                   const RenderOptions& o) {
  const double size = o.size_px;
  const double margin = 0.05 * size;
  const Panel upper{size / 2, size / 2, size / 2 - margin};
  const Panel lower{size * 1.5, size / 2, size / 2 - margin};
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(2 * size) << "\" height=\"" << num(size)
     << "\" viewBox=\"0 0 " << num(2 * size) << " " << num(size) << "\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << num(2 * size) << "\" height=\"" << num(size) << "\" fill=\"white\"/>\n";
  for (const auto& [panel, name] : {std::pair{upper, "upper"}, std::pair{lower, "lower"}}) {
    os << "<circle class=\"frame equator\" data-hemisphere=\"" << name << "\" cx=\"" << num(panel.cx) << "\" cy=\""
       << num(panel.cy) << "\" r=\"" << num(panel.radius) << "\" fill=\"none\" stroke=\"#cccccc\"/>\n";
  }
  for (const FiberSet& f : fibers) {
    const Style st = style_for(level_class(s, f.level), o);
    const auto piece_comp = component_of_pieces(f);
    const auto point_comp = component_of_points(f);
    for (std::size_t i = 0; i < f.pieces.size(); ++i) {
      const auto& arc = std::get<SphericalArc>(f.pieces[i]);
      const int n = std::max(2, static_cast<int>(std::ceil(std::abs(arc.sweep) / kPi * o.samples_per_pi)));
      std::vector<Vec3> pts;
      for (int j = 0; j <= n; ++j) pts.push_back(embed(point_on_piece(f.pieces[i], double(j) / n)));
      // Split into runs that stay in one hemisphere; equator points end one
      // run and start the next.
      std::ostringstream upper_d, lower_d;
      int current = 0;  // +1 upper, -1 lower
      for (std::size_t j = 0; j < pts.size(); ++j) {
        const double z = pts[j].z();
        const int side = z > 1e-12 ? 1 : (z < -1e-12 ? -1 : 0);
        if (side != 0 && side != current) {
          std::ostringstream& d = side > 0 ? upper_d : lower_d;
          const Panel& panel = side > 0 ? upper : lower;
          d << (d.tellp() > 0 ? " " : "") << "M " << project(panel, j > 0 ? pts[j - 1] : pts[j]);
          current = side;
        }
        if (current != 0) {
          std::ostringstream& d = current > 0 ? upper_d : lower_d;
          d << " L " << project(current > 0 ? upper : lower, pts[j]);
        }
      }
      const std::string attrs = common_attrs(st, f.level, piece_comp[i]);
      for (const auto& [d, name] : {std::pair{upper_d.str(), "upper"}, std::pair{lower_d.str(), "lower"}}) {
        if (d.empty()) continue;
        os << "<path " << attrs << " data-piece=\"" << i << "\" data-hemisphere=\"" << name
           << "\" data-kind=\"spherical_arc\" data-center=\"" << num(arc.center.v.x()) << " " << num(arc.center.v.y())
           << " " << num(arc.center.v.z()) << "\" data-radius=\"" << num(arc.angular_radius) << "\" data-sweep=\""
           << num(arc.sweep) << "\" d=\"" << d << "\"/>\n";
      }
    }
    for (std::size_t i = 0; i < f.singular_points.size(); ++i) {
      const Vec3 v = std::get<SpherePoint>(f.singular_points[i]).v;
      for (const auto& [panel, name, show] :
           {std::tuple{upper, "upper", v.z() >= -1e-12}, std::tuple{lower, "lower", v.z() <= 1e-12}}) {
        if (!show) continue;
        os << "<circle class=\"point " << st.cls << "\" data-level=\"" << num(f.level) << "\" data-component=\""
           << point_comp[i] << "\" data-hemisphere=\"" << name << "\" data-kind=\"point\" data-center=\""
           << num(v.x()) << " " << num(v.y()) << " " << num(v.z()) << "\" cx=\""
           << num(panel.cx + panel.radius * v.x()) << "\" cy=\"" << num(panel.cy - panel.radius * v.y())
           << "\" r=\"4\" fill=\"" << st.color << "\"/>\n";
      }
    }
  }
  os << "</svg>\n";
}

}  // namespace

std::string level_class(const AnySubmetry& s, double level) {
  const Space1D base = submetry_base(s);
  std::optional<double> middle;
  if (std::holds_alternative<Line>(base)) middle = 0.0;
  if (const auto* seg = std::get_if<Segment>(&base)) {
    middle = 0.5 * (seg->lo + seg->hi);
    if (std::abs(level - seg->hi) <= 1e-12) return "boundary-plus";
    if (std::abs(level - seg->lo) <= 1e-12) return "boundary-minus";
  }
  if (const auto* h = std::get_if<HalfLine>(&base); h && std::abs(level - h->origin) <= 1e-12) return "boundary-minus";
  if (middle && std::abs(level - *middle) <= 1e-12) return "middle";
  return "level";
}

std::string render_svg(const AnySubmetry& s, const std::vector<double>& levels, const RenderOptions& options) {
  if (levels.empty()) throw InvalidInput("render needs at least one level");
  if (!(options.window_radius > 0 && options.size_px > 0 && options.samples_per_pi > 0)) {
    throw InvalidInput("render options must be positive");
  }
  std::vector<FiberSet> fibers;
  for (double y : levels) fibers.push_back(submetry_fiber(s, y, options.window_radius));
  std::ostringstream os;
  if (submetry_ambient(s) == Ambient::Plane) render_plane(os, fibers, s, options);
  else render_sphere(os, fibers, s, options);
  return os.str();
}

}  // namespace submetry
