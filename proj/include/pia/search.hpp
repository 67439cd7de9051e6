#pragma once

#include <cstdint>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "pia/analytic.hpp"
#include "pia/curves.hpp"
#include "pia/mechanisms.hpp"

namespace pia {

struct ScanConfig {
    double q_min = 1e-3;
    double q_max = 0.999;
    double q_step = 1e-3;
    int threads = 0;
};

struct ScanPoint {
    double q_star = 0.0;
    double ratio = 0.0;
    // (name, value) pairs, fixed order per mechanism; empty where inadmissible
    std::vector<std::pair<std::string, double>> bounds;
};

struct ScanResult {
    MechanismSpec spec;
    int n = 1;
    std::vector<ScanPoint> points;
    double min_ratio = 0.0;
    double argmin_q_star = 0.0;
};

// Exact mechanism-to-optimal ratio on TriangleCurve(q*, 1) over a q* grid,
// with every applicable closed-form bound evaluated alongside. The reported
// minimum is re-evaluated from a freshly built curve and must reproduce
// within 1e-8. Triangle minima are family minima, not a proof of a global
// worst case.
ScanResult scan_triangles(const MechanismSpec& spec, int n, const ScanConfig& scan = {},
                          const QuadratureConfig& cfg = {});

struct SearchConfig {
    int iterations = 200;
    int restarts = 4;
    double initial_step = 0.25; // knot nudge, fraction of R*; decays geometrically
    std::uint64_t seed = 1;
    int threads = 0;
};

struct PerturbResult {
    PiecewiseLinearCurve curve;
    double ratio = 0.0;
    int accepted_moves = 0;
};

// Local adversarial search over knot revenues of a concave polyline: nudge a
// single knot, clip into the concavity-feasible interval (endpoints stay 0),
// renormalize to R* = 1, keep the move when the ratio drops. Never returns a
// curve with a higher ratio than the start.
PerturbResult perturb_search(const MechanismSpec& spec, int n, const PiecewiseLinearCurve& start,
                             const SearchConfig& search = {}, const QuadratureConfig& cfg = {});

struct OptimizeResult {
    double epsilon = 0.0;
    double delta = 0.0;
    double worst_ratio = 0.0; // min over the triangle q* grid at the optimum
    // full (epsilon, delta) -> worst ratio grid for audit
    std::vector<std::tuple<double, double, double>> grid;
};

// Maximizes over (epsilon, delta) the worst-case exact ratio of the mixed
// inflated SPA over the triangle family.
OptimizeResult optimize_params(int n, const std::vector<double>& epsilon_grid,
                               const std::vector<double>& delta_grid, const ScanConfig& scan = {},
                               const QuadratureConfig& cfg = {});

} // namespace pia
