#pragma once

#include "submetry/verify.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace submetry {

/// Suites: "full", "c1", "connectivity", "equidistance", "ball", "trace",
/// "reach". Checks that do not apply to the submetry are skipped.
std::vector<VerificationReport> run_suite(const AnySubmetry& s, const std::string& suite, const ToleranceProfile& tol,
                                          double window_radius = 10.0);

/// Checks that need only the curve: "full", "c1" or "connectivity".
std::vector<VerificationReport> run_curve_suite(const LeafCurve& curve, const std::string& suite,
                                                const ToleranceProfile& tol);

VerificationReport connectivity_report(std::size_t components, const ToleranceProfile& tol);

nlohmann::json report_bundle(const std::string& suite, const std::vector<VerificationReport>& reports,
                             const ToleranceProfile& tol);

bool all_pass(const std::vector<VerificationReport>& reports);

}  // namespace submetry
