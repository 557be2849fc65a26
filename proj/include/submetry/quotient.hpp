#pragma once

#include "submetry/catalog.hpp"
#include "submetry/leaf.hpp"
#include "submetry/space1d.hpp"

#include <map>
#include <string>
#include <variant>
#include <vector>

namespace submetry {

struct Trivial {};
struct Translation {
  double a = 1.0;
};
struct Reflection {
  double b = 0.0;
};
/// Group generated by the reflections about a and b (a < b); it contains the
/// translation by 2(b - a).
struct TranslationReflection {
  double a = 0.0;
  double b = 1.0;
};

using IsometryGroup1D = std::variant<Trivial, Translation, Reflection, TranslationReflection>;

Space1D quotient_space(const IsometryGroup1D& g);

/// Orbit representative of x in quotient_space(g).
double project_to_quotient(const IsometryGroup1D& g, double x);

struct Identity {
  Space1D space;
};
/// Line -> Circle{c}.
struct CoverLineToCircle {
  double c = 1.0;
};
/// Line -> HalfLine{0}, x -> |x - b|.
struct FoldLineToHalfLine {
  double b = 0.0;
};
/// Line -> Segment[0, L], triangle wave of period 2L vanishing at `phase`.
struct FoldLineToSegment {
  double length = 1.0;
  double phase = 0.0;
};
/// HalfLine{origin} -> Segment[0, L], origin maps to 0.
struct FoldHalfLineToSegment {
  double origin = 0.0;
  double length = 1.0;
};
/// Circle{c} -> Circle{c / k}.
struct CoverCircleToCircle {
  double c = 1.0;
  int k = 1;
};
/// Circle{c} -> Segment[0, c / 2k], triangle wave vanishing at `phase`.
struct FoldCircleToSegment {
  double c = 1.0;
  int k = 1;
  double phase = 0.0;
};
/// Segment[lo, hi] -> Segment[0, (hi - lo) / k]. The wave vanishes at
/// lo + phase; phase must be a multiple of (hi - lo) / k.
struct FoldSegmentToSegment {
  double lo = 0.0;
  double hi = 1.0;
  int k = 1;
  double phase = 0.0;
};

using DiscreteMap1D = std::variant<Identity, CoverLineToCircle, FoldLineToHalfLine, FoldLineToSegment,
                                   FoldHalfLineToSegment, CoverCircleToCircle, FoldCircleToSegment,
                                   FoldSegmentToSegment>;

void validate(const DiscreteMap1D& m);
Space1D domain_of(const DiscreteMap1D& m);
Space1D codomain_of(const DiscreteMap1D& m);
const char* kind_name(const DiscreteMap1D& m);

double apply_map(const DiscreteMap1D& m, double x);

/// Sorted preimages of y. Unbounded domains are clipped to |x| <= bound.
std::vector<double> preimages(const DiscreteMap1D& m, double y, double bound = 100.0);

struct MapFamily {
  std::string kind;
  Space1D domain;
  std::vector<std::string> parameters;  // free parameters beyond the domain
  std::string codomain;                 // symbolic description of the target
};

std::vector<MapFamily> enumerate_maps(const Space1D& domain);

/// Fixes the free parameters of a family. Missing integer degrees default to 1,
/// missing phases to 0; missing lengths are an error.
DiscreteMap1D instantiate(const MapFamily& family, const std::map<std::string, double>& params);

struct ComposedSubmetry {
  SubmetryDescriptor inner;
  DiscreteMap1D outer;
};

/// Checks that base_space(inner) is the domain of outer. Segment domains of the
/// same length and half-line domains are shifted onto the inner base.
ComposedSubmetry compose(const SubmetryDescriptor& inner, const DiscreteMap1D& outer);

double evaluate_composed(const ComposedSubmetry& c, const Point& p);

/// Union of the inner fibers over the preimages of y; components are
/// concatenated.
FiberSet fiber_composed(const ComposedSubmetry& c, double y, double window_radius = 10.0);

}  // namespace submetry
