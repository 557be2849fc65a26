#pragma once

#include "submetry/catalog.hpp"
#include "submetry/leaf.hpp"
#include "submetry/quotient.hpp"
#include "submetry/space1d.hpp"
#include "submetry/verify.hpp"

#include <json.hpp>

#include <string>

namespace submetry {

using json = nlohmann::json;

json encode(const Point& p);
json encode(const CurvePiece& piece);
json encode(const LeafCurve& curve);
json encode(const FiberSet& fiber);
json encode(const Space1D& space);
json encode(const DiscreteMap1D& map);
json encode(const SubmetryDescriptor& d);
json encode(const ComposedSubmetry& c);
json encode(const AnySubmetry& s);
json encode(const ToleranceProfile& tol);
json encode(const VerificationReport& report);

// Decoders throw InvalidInput on malformed or out-of-range input.
Point decode_point(const json& j);
CurvePiece decode_piece(const json& j);
LeafCurve decode_leaf_curve(const json& j);
FiberSet decode_fiber_set(const json& j);
Space1D decode_space(const json& j);
DiscreteMap1D decode_map(const json& j);
SubmetryDescriptor decode_descriptor(const json& j);
AnySubmetry decode_any_submetry(const json& j);
ToleranceProfile decode_tolerance(const json& j);
VerificationReport decode_report(const json& j);

/// Sorted keys, two-space indent, shortest round-trip doubles.
std::string canonical_dump(const json& j);

json parse_json_text(const std::string& text);
json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace submetry
