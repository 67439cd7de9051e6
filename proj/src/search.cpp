#include "pia/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pia/bounds.hpp"
#include "pia/parallel.hpp"

namespace pia {

namespace {

// Bounds reported along a triangle scan, in a fixed column order.
std::vector<std::pair<std::string, double>> scan_bounds(const MechanismSpec& spec, double q,
                                                        int n, const QuadratureConfig& cfg) {
    std::vector<std::pair<std::string, double>> out;
    struct Collector {
        double q;
        int n;
        const QuadratureConfig& cfg;
        std::vector<std::pair<std::string, double>>& out;

        void operator()(const SpaSpec&) {
            out.emplace_back("bound_bk_ratio", bk_ratio(n));
            out.emplace_back("bound_spa_ratio_lb", spa_ratio_lb(q, n));
        }
        void operator()(const ReserveSpaSpec&) {}
        void operator()(const InflatedSpaSpec& s) {
            if (q < 1.0 / static_cast<double>(n))
                out.emplace_back("bound_inflated_rev_lb_over_n",
                                 inflated_spa_rev_lb(q, 1.0, n, s.delta, cfg) /
                                     static_cast<double>(n));
        }
        void operator()(const MixedInflatedSpaSpec& s) {
            if (q < 1.0 / static_cast<double>(n))
                out.emplace_back("bound_composite_mixed_ratio_lb",
                                 composite_mixed_ratio_lb(q, n, s.epsilon, s.delta, cfg));
        }
        void operator()(const PostTheSampleSpec& s) {
            // On a triangle, posting above the top value never sells, so beta = 0.
            if (s.alpha == 1.0) out.emplace_back("bound_pts_rev_lb", pts_rev_lb(q, 0.0, 0.01));
            if (s.alpha == 2.0 && q <= 0.5)
                out.emplace_back("bound_inflated_pts_ratio_lb", inflated_pts_ratio_lb(q));
            if (s.alpha < 1.0)
                out.emplace_back("bound_shaded_pts_rev_lb",
                                 shaded_pts_rev_lb(q, 0.0, 1.0 - s.alpha));
        }
        void operator()(const RandomizedPtsSpec& s) {
            double lb = (1.0 - s.zeta - s.epsilon) * pts_rev_lb(q, 0.0, s.rho) +
                        s.zeta * std::max(0.0, shaded_pts_rev_lb(q, 0.0, s.rho));
            if (s.delta == 1.0 && q <= 0.5)
                lb += s.epsilon * std::max(0.0, inflated_pts_ratio_lb(q));
            out.emplace_back("bound_randomized_pts_lb", lb);
        }
    };
    std::visit(Collector{q, n, cfg, out}, spec);
    return out;
}

double triangle_ratio(const MechanismSpec& spec, double q, int n, const QuadratureConfig& cfg) {
    const TriangleCurve curve(q, 1.0);
    const int opt_n = is_sample_based(spec) ? 1 : n;
    return revenue_ratio(mechanism_revenue(spec, curve, opt_n, cfg),
                         optimal_revenue(curve, opt_n, cfg));
}

} // namespace

ScanResult scan_triangles(const MechanismSpec& spec, int n, const ScanConfig& scan,
                          const QuadratureConfig& cfg) {
    validate(spec);
    if (!(scan.q_step > 0.0)) throw std::invalid_argument("scan_triangles: step must be > 0");
    if (!(scan.q_min > 0.0 && scan.q_max < 1.0 && scan.q_min <= scan.q_max))
        throw std::invalid_argument("scan_triangles: grid must lie inside (0,1)");

    const auto count =
        static_cast<std::size_t>(std::floor((scan.q_max - scan.q_min) / scan.q_step + 1e-9)) + 1;
    ScanResult result;
    result.spec = spec;
    result.n = is_sample_based(spec) ? 1 : n;
    result.points.resize(count);

    par::parallel_for(static_cast<std::int64_t>(count), scan.threads, [&](std::int64_t i) {
        const double q = std::min(scan.q_max, scan.q_min + static_cast<double>(i) * scan.q_step);
        ScanPoint& p = result.points[static_cast<std::size_t>(i)];
        p.q_star = q;
        p.ratio = triangle_ratio(spec, q, result.n, cfg);
        p.bounds = scan_bounds(spec, q, result.n, cfg);
    });

    std::size_t argmin = 0;
    for (std::size_t i = 1; i < result.points.size(); ++i)
        if (result.points[i].ratio < result.points[argmin].ratio) argmin = i;
    result.argmin_q_star = result.points[argmin].q_star;
    result.min_ratio = result.points[argmin].ratio;

    // Witness check: rebuild the argmin curve from scratch and reproduce.
    const double replay = triangle_ratio(spec, result.argmin_q_star, result.n, cfg);
    if (std::abs(replay - result.min_ratio) > 1e-8)
        throw std::runtime_error("scan_triangles: witness ratio failed to reproduce");
    return result;
}

namespace {

double pwl_ratio(const MechanismSpec& spec, const PiecewiseLinearCurve& curve, int n,
                 const QuadratureConfig& cfg) {
    return revenue_ratio(mechanism_revenue(spec, curve, n, cfg), optimal_revenue(curve, n, cfg));
}

// Feasible revenue interval for knot i so that slopes stay non-increasing;
// neighbors fixed. Lower bound: the chord of the two neighbors; upper bounds:
// extensions of the two outer segments.
std::pair<double, double> feasible_interval(const std::vector<PiecewiseLinearCurve::Knot>& ks,
                                            std::size_t i) {
    const double qi = ks[i].first;
    const auto& [ql, rl] = ks[i - 1];
    const auto& [qr, rr] = ks[i + 1];
    double lo = rl + (rr - rl) * (qi - ql) / (qr - ql);
    double hi = std::numeric_limits<double>::infinity();
    if (i >= 2) {
        const double s = (rl - ks[i - 2].second) / (ql - ks[i - 2].first);
        hi = std::min(hi, rl + s * (qi - ql));
    }
    if (i + 2 < ks.size()) {
        const double s = (ks[i + 2].second - rr) / (ks[i + 2].first - qr);
        hi = std::min(hi, rr - s * (qr - qi));
    }
    return {std::max(lo, 0.0), hi};
}

PiecewiseLinearCurve renormalized(std::vector<PiecewiseLinearCurve::Knot> ks) {
    double peak = 0.0;
    for (const auto& k : ks) peak = std::max(peak, k.second);
    for (auto& k : ks) k.second /= peak;
    return PiecewiseLinearCurve(std::move(ks));
}

} // namespace

PerturbResult perturb_search(const MechanismSpec& spec, int n, const PiecewiseLinearCurve& start,
                             const SearchConfig& search, const QuadratureConfig& cfg) {
    validate(spec);
    if (is_sample_based(spec)) n = 1;
    if (!check_concavity(start, 1001).empty())
        throw std::invalid_argument("perturb_search: start curve is not concave");

    PiecewiseLinearCurve best = renormalized(start.knots());
    double best_ratio = pwl_ratio(spec, best, n, cfg);
    int accepted = 0;

    for (int restart = 0; restart < std::max(1, search.restarts); ++restart) {
        RandomSource rand(RandomSource::derive(search.seed, static_cast<std::uint64_t>(restart)));
        std::vector<PiecewiseLinearCurve::Knot> ks = best.knots();
        double cur_ratio = best_ratio;
        double step = search.initial_step;
        for (int it = 0; it < search.iterations; ++it) {
            const std::size_t i = 1 + rand.pick(ks.size() - 2); // interior knot
            const double nudge = (2.0 * rand.next_unit() - 1.0) * step;
            auto [lo, hi] = feasible_interval(ks, i);
            if (lo > hi) throw std::runtime_error("perturb_search: infeasible projection");
            std::vector<PiecewiseLinearCurve::Knot> cand = ks;
            cand[i].second = std::clamp(ks[i].second + nudge, lo, hi);
            double peak = 0.0;
            for (const auto& k : cand) peak = std::max(peak, k.second);
            if (!(peak > 1e-6)) { // do not collapse the curve to zero
                step *= 0.9;
                continue;
            }
            PiecewiseLinearCurve curve = renormalized(std::move(cand));
            const double r = pwl_ratio(spec, curve, n, cfg);
            if (r < cur_ratio) {
                ks = curve.knots();
                cur_ratio = r;
                ++accepted;
            } else {
                step *= 0.9;
            }
        }
        if (cur_ratio < best_ratio) {
            best = PiecewiseLinearCurve(ks);
            best_ratio = cur_ratio;
        }
    }

    // The search only improves the adversary; re-evaluate the witness.
    const double replay = pwl_ratio(spec, best, n, cfg);
    if (std::abs(replay - best_ratio) > 1e-8)
        throw std::runtime_error("perturb_search: witness ratio failed to reproduce");
    PerturbResult out{std::move(best), best_ratio, accepted};
    return out;
}

OptimizeResult optimize_params(int n, const std::vector<double>& epsilon_grid,
                               const std::vector<double>& delta_grid, const ScanConfig& scan,
                               const QuadratureConfig& cfg) {
    if (epsilon_grid.empty() || delta_grid.empty())
        throw std::invalid_argument("optimize_params: empty grid");
    const auto count =
        static_cast<std::size_t>(std::floor((scan.q_max - scan.q_min) / scan.q_step + 1e-9)) + 1;
    std::vector<double> qs(count);
    for (std::size_t i = 0; i < count; ++i)
        qs[i] = std::min(scan.q_max, scan.q_min + static_cast<double>(i) * scan.q_step);

    // SPA and OPT on triangles do not depend on (epsilon, delta); the inflated
    // revenue depends on delta only.
    std::vector<double> spa(count), opt(count);
    par::parallel_for(static_cast<std::int64_t>(count), scan.threads, [&](std::int64_t i) {
        const TriangleCurve curve(qs[static_cast<std::size_t>(i)], 1.0);
        spa[static_cast<std::size_t>(i)] = spa_revenue(curve, n, cfg);
        opt[static_cast<std::size_t>(i)] = optimal_revenue(curve, n, cfg);
    });

    OptimizeResult best;
    best.worst_ratio = -1.0;
    std::vector<double> inflated(count);
    for (double delta : delta_grid) {
        par::parallel_for(static_cast<std::int64_t>(count), scan.threads, [&](std::int64_t i) {
            const TriangleCurve curve(qs[static_cast<std::size_t>(i)], 1.0);
            inflated[static_cast<std::size_t>(i)] = inflated_spa_revenue(curve, n, delta, cfg);
        });
        for (double eps : epsilon_grid) {
            double worst = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < count; ++i)
                worst = std::min(worst, ((1.0 - eps) * spa[i] + eps * inflated[i]) / opt[i]);
            best.grid.emplace_back(eps, delta, worst);
            if (worst > best.worst_ratio) {
                best.worst_ratio = worst;
                best.epsilon = eps;
                best.delta = delta;
            }
        }
    }

    // Witness: the winning pair re-evaluated through the scan path.
    ScanResult replay = scan_triangles(MechanismSpec(MixedInflatedSpaSpec{best.epsilon, best.delta}),
                                       n, scan, cfg);
    if (std::abs(replay.min_ratio - best.worst_ratio) > 1e-8)
        throw std::runtime_error("optimize_params: witness ratio failed to reproduce");
    return best;
}

} // namespace pia
