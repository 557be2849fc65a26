#include "submetry/space1d.hpp"

#include "submetry/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace submetry {

namespace {

double wrap(double u, double period) { return u - period * std::floor(u / period); }

}  // namespace

void validate(const Space1D& space) {
  if (const auto* s = std::get_if<Segment>(&space)) {
    if (!(std::isfinite(s->lo) && std::isfinite(s->hi) && s->hi > s->lo)) throw InvalidInput("segment needs hi > lo");
  } else if (const auto* c = std::get_if<Circle>(&space)) {
    if (!(std::isfinite(c->length) && c->length > 0)) throw InvalidInput("circle length must be positive");
  } else if (const auto* h = std::get_if<HalfLine>(&space)) {
    if (!std::isfinite(h->origin)) throw InvalidInput("half-line origin must be finite");
  }
}

bool contains(const Space1D& space, double y, double tol) {
  if (!std::isfinite(y)) return false;
  if (const auto* h = std::get_if<HalfLine>(&space)) return y >= h->origin - tol;
  if (const auto* s = std::get_if<Segment>(&space)) return y >= s->lo - tol && y <= s->hi + tol;
  if (const auto* c = std::get_if<Circle>(&space)) return y >= -tol && y < c->length + tol;
  return true;
}

double base_distance(const Space1D& space, double y1, double y2) {
  if (const auto* c = std::get_if<Circle>(&space)) {
    const double d = wrap(y1 - y2, c->length);
    return std::min(d, c->length - d);
  }
  return std::abs(y1 - y2);
}

double clamp_to(const Space1D& space, double y) {
  if (const auto* h = std::get_if<HalfLine>(&space)) return std::max(y, h->origin);
  if (const auto* s = std::get_if<Segment>(&space)) return std::clamp(y, s->lo, s->hi);
  if (const auto* c = std::get_if<Circle>(&space)) return wrap(y, c->length);
  return y;
}

double reflect_into(const Space1D& space, double y) {
  if (const auto* h = std::get_if<HalfLine>(&space)) return h->origin + std::abs(y - h->origin);
  if (const auto* s = std::get_if<Segment>(&space)) {
    const double len = s->hi - s->lo;
    return s->lo + len - std::abs(wrap(y - s->lo, 2 * len) - len);
  }
  if (const auto* c = std::get_if<Circle>(&space)) return wrap(y, c->length);
  return y;
}

bool same_space(const Space1D& a, const Space1D& b, double tol) {
  if (a.index() != b.index()) return false;
  if (const auto* h = std::get_if<HalfLine>(&a)) return std::abs(h->origin - std::get<HalfLine>(b).origin) <= tol;
  if (const auto* s = std::get_if<Segment>(&a)) {
    const auto& t = std::get<Segment>(b);
    return std::abs(s->lo - t.lo) <= tol && std::abs(s->hi - t.hi) <= tol;
  }
  if (const auto* c = std::get_if<Circle>(&a)) return std::abs(c->length - std::get<Circle>(b).length) <= tol;
  return true;
}

const char* kind_name(const Space1D& space) {
  switch (space.index()) {
    case 0: return "line";
    case 1: return "half_line";
    case 2: return "segment";
    default: return "circle";
  }
}

}  // namespace submetry
