#include "pia/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace pia {

namespace {

std::vector<double> interior_kinks(const RevenueCurve& curve, double lo = 0.0, double hi = 1.0) {
    std::vector<double> ks;
    for (double k : curve.kinks())
        if (k > lo && k < hi) ks.push_back(k);
    return ks;
}

// Split points for integrands composed with q -> quantile_of(c * v(q)):
// the curve's own kinks plus the preimages of every special price (kink
// values and the top of the support) under the scaled value map.
std::vector<double> composed_splits(const RevenueCurve& curve, double c) {
    std::vector<double> splits = interior_kinks(curve);
    std::vector<double> specials;
    for (double k : curve.kinks()) specials.push_back(curve.value_at(k));
    if (curve.bounded()) specials.push_back(curve.top_value());
    for (double w : specials) {
        if (!(w > 0.0) || !std::isfinite(w)) continue;
        const double q = curve.quantile_of(w / c);
        if (q > 0.0 && q < 1.0) splits.push_back(q);
    }
    return splits;
}

double powi(double x, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

} // namespace

double spa_revenue(const RevenueCurve& curve, int n, const QuadratureConfig& cfg) {
    if (n < 2) throw std::invalid_argument("spa_revenue: n must be >= 2");
    const auto splits = interior_kinks(curve);
    const double dn = n;

    const double by_parts =
        dn * (dn - 1.0) *
        integrate([&](double q) { return curve.revenue_at(q) * powi(1.0 - q, n - 2); }, 0.0, 1.0,
                  cfg, splits);
    const double direct =
        dn * integrate(
                 [&](double q) {
                     return curve.slope_at(q, Side::Right) * powi(1.0 - q, n - 1);
                 },
                 0.0, 1.0, cfg, splits);
    if (std::abs(by_parts - direct) > 10.0 * cfg.abs_tol)
        throw std::runtime_error("spa_revenue: integral forms disagree (" +
                                 std::to_string(by_parts) + " vs " + std::to_string(direct) + ")");
    return by_parts;
}

namespace {

// n * Int_0^q_sell R'(q) (1-q)^(n-1) dq, in integrated-by-parts form so that
// the slope is never evaluated near an endpoint singularity.
double threshold_auction_revenue(const RevenueCurve& curve, double q_sell, int n,
                                 const QuadratureConfig& cfg) {
    if (q_sell <= 0.0) return 0.0;
    const double dn = n;
    double rev = curve.revenue_at(q_sell) * powi(1.0 - q_sell, n - 1);
    if (n > 1) {
        rev += (dn - 1.0) *
               integrate([&](double q) { return curve.revenue_at(q) * powi(1.0 - q, n - 2); },
                         0.0, q_sell, cfg, interior_kinks(curve, 0.0, q_sell));
    }
    return dn * rev;
}

} // namespace

double reserve_spa_revenue(const RevenueCurve& curve, double reserve, int n,
                           const QuadratureConfig& cfg) {
    if (n < 1) throw std::invalid_argument("reserve_spa_revenue: n must be >= 1");
    if (!(reserve >= 0.0)) throw std::invalid_argument("reserve must be >= 0");
    return threshold_auction_revenue(curve, curve.quantile_of(reserve), n, cfg);
}

double optimal_revenue(const RevenueCurve& curve, int n, const QuadratureConfig& cfg) {
    if (n < 1) throw std::invalid_argument("optimal_revenue: n must be >= 1");
    const MonopolyPoint m = curve.monopoly();
    if (n == 1) return m.revenue;
    return threshold_auction_revenue(curve, m.q_star, n, cfg);
}

double inflated_spa_revenue(const RevenueCurve& curve, int n, double delta,
                            const QuadratureConfig& cfg) {
    if (n < 2) throw std::invalid_argument("inflated_spa_revenue: n must be >= 2");
    if (!(delta >= 0.0)) throw std::invalid_argument("delta must be >= 0");
    const double shrink = 1.0 / (1.0 + delta);
    auto win_prob = [&](double q) {
        // Probability that one opponent bids strictly below v(q)/(1+delta).
        return 1.0 - curve.quantile_of(curve.value_at(q) * shrink);
    };
    const auto splits = composed_splits(curve, shrink);
    return static_cast<double>(n) *
           integrate(
               [&](double q) {
                   return curve.slope_at(q, Side::Right) * powi(win_prob(q), n - 1);
               },
               0.0, 1.0, cfg, splits);
}

double mixed_inflated_spa_revenue(const RevenueCurve& curve, int n, double epsilon, double delta,
                                  const QuadratureConfig& cfg) {
    if (!(epsilon >= 0.0 && epsilon <= 1.0))
        throw std::invalid_argument("epsilon must lie in [0,1]");
    double rev = 0.0;
    if (epsilon < 1.0) rev += (1.0 - epsilon) * spa_revenue(curve, n, cfg);
    if (epsilon > 0.0) rev += epsilon * inflated_spa_revenue(curve, n, delta, cfg);
    return rev;
}

double pts_revenue(const RevenueCurve& curve, double alpha, const QuadratureConfig& cfg) {
    if (!(alpha > 0.0)) throw std::invalid_argument("pts_revenue: alpha must be > 0");
    const auto splits = composed_splits(curve, alpha);
    return integrate(
        [&](double q) { return curve.revenue_at(curve.quantile_of(alpha * curve.value_at(q))); },
        0.0, 1.0, cfg, splits);
}

double randomized_pts_revenue(const RevenueCurve& curve, double zeta, double rho, double epsilon,
                              double delta, const QuadratureConfig& cfg) {
    validate(MechanismSpec(RandomizedPtsSpec{zeta, rho, epsilon, delta}));
    double rev = 0.0;
    if (zeta > 0.0) rev += zeta * pts_revenue(curve, 1.0 - rho, cfg);
    if (epsilon > 0.0) rev += epsilon * pts_revenue(curve, 1.0 + delta, cfg);
    const double rest = 1.0 - zeta - epsilon;
    if (rest > 0.0) rev += rest * pts_revenue(curve, 1.0, cfg);
    return rev;
}

double curve_area(const RevenueCurve& curve, const QuadratureConfig& cfg) {
    return integrate([&](double q) { return curve.revenue_at(q); }, 0.0, 1.0, cfg,
                     interior_kinks(curve));
}

double revenue_ratio(double mech_revenue, double opt_revenue) {
    if (!(opt_revenue > 0.0))
        throw std::invalid_argument("revenue_ratio: optimal revenue must be positive");
    return mech_revenue / opt_revenue;
}

double mechanism_revenue(const MechanismSpec& spec, const RevenueCurve& curve, int n,
                         const QuadratureConfig& cfg) {
    validate(spec);
    if (is_sample_based(spec) && n != 1)
        throw std::invalid_argument("post-the-sample variants are single-bidder (n = 1)");
    struct Eval {
        const RevenueCurve& curve;
        int n;
        const QuadratureConfig& cfg;

        double operator()(const SpaSpec&) { return spa_revenue(curve, n, cfg); }
        double operator()(const ReserveSpaSpec& s) {
            return reserve_spa_revenue(curve, s.reserve, n, cfg);
        }
        double operator()(const InflatedSpaSpec& s) {
            return inflated_spa_revenue(curve, n, s.delta, cfg);
        }
        double operator()(const MixedInflatedSpaSpec& s) {
            return mixed_inflated_spa_revenue(curve, n, s.epsilon, s.delta, cfg);
        }
        double operator()(const PostTheSampleSpec& s) { return pts_revenue(curve, s.alpha, cfg); }
        double operator()(const RandomizedPtsSpec& s) {
            return randomized_pts_revenue(curve, s.zeta, s.rho, s.epsilon, s.delta, cfg);
        }
    };
    return std::visit(Eval{curve, n, cfg}, spec);
}

} // namespace pia
