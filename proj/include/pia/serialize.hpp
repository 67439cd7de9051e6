#pragma once

#include <memory>
#include <string>

#include <json.hpp>

#include "pia/bounds.hpp"
#include "pia/curves.hpp"
#include "pia/mechanisms.hpp"
#include "pia/search.hpp"

namespace pia {

// Machine outputs carry 12 significant digits (margins as small as 5e-9 must
// survive serialization); human tables use 6.
std::string format_sig(double x, int digits);

// --- curves ---------------------------------------------------------------
// {"family": "triangle" | "uniform" | "exponential" | "truncated_equal_revenue"
//            | "piecewise_linear",
//  "params": {...}}  with piecewise-linear knots as an array of [q, R] pairs.

std::unique_ptr<RevenueCurve> curve_from_json(const nlohmann::json& j);
nlohmann::json curve_to_json(const RevenueCurve& curve);

// Accepts shorthand ("uniform", "triangle:0.3", "exponential:2",
// "trunc_er:1,10", "uniform:0,2"), inline JSON, or a path to a JSON file.
std::unique_ptr<RevenueCurve> curve_from_text(const std::string& text);

// --- mechanisms -------------------------------------------------------------
// {"mechanism": "spa" | "reserve_spa" | "inflated_spa" | "mixed_inflated_spa"
//              | "post_the_sample" | "randomized_pts",
//  "params": {...}}

MechanismSpec mechanism_from_json(const nlohmann::json& j);
nlohmann::json mechanism_to_json(const MechanismSpec& spec);

// Accepts shorthand ("spa", "reserve_spa:0.5", "inflated_spa:1",
// "mixed:0.15,1", "pts:alpha=1", "randomized_pts:8e-7,0.01,2e-7,1"),
// inline JSON, or a path to a JSON file.
MechanismSpec mechanism_from_text(const std::string& text);

// --- reports ------------------------------------------------------------------

// CSV: header "q_star,ratio,<bound columns>"; blank cells where a bound is
// inadmissible at that grid point. Byte-stable across reruns.
std::string scan_to_csv(const ScanResult& scan);
nlohmann::json scan_to_json(const ScanResult& scan);

// JSON-lines, one BoundReport per line.
std::string bound_reports_to_jsonl(const std::vector<BoundReport>& reports);
nlohmann::json bound_report_to_json(const BoundReport& report);

} // namespace pia
