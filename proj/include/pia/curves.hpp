#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace pia {

struct MonopolyPoint {
    double q_star;  // quantile of the monopoly price (smallest maximizer)
    double value;   // monopoly price v* = v(q*)
    double revenue; // peak revenue R* = R(q*)
};

enum class Side { Left, Right };

/// A concave revenue curve R : [0,1] -> R+ with R(0) = R(1) = 0, the quantile-
/// space representation of a regular value distribution. q is the probability
/// that a fresh draw is at least the corresponding value, so q is uniform on
/// [0,1] and v(q) = R(q)/q is the price that sells with probability q.
///
/// Conventions, shared with the mechanism implementations:
///  * quantile_of(p) = Pr[V >= p] = sup{q : v(q) >= p} (sale-inclusive at
///    point masses, so posting the monopoly price on a curve with an atom at
///    the top sells with probability exactly q*).
///  * value_at(0) is the right limit v(0+); +infinity for curves with
///    unbounded support (bounded() == false).
///  * slopes are one-sided; interior kinks are listed by kinks() and are
///    mandatory split points for integration.
class RevenueCurve {
public:
    virtual ~RevenueCurve() = default;

    virtual double revenue_at(double q) const = 0;
    virtual double value_at(double q) const = 0;
    virtual double quantile_of(double price) const = 0;
    virtual double slope_at(double q, Side side) const = 0;
    virtual MonopolyPoint monopoly() const = 0;
    virtual std::vector<double> kinks() const = 0;
    virtual bool bounded() const = 0;
    virtual double top_value() const = 0; // v(0+); +inf when unbounded
    virtual std::unique_ptr<RevenueCurve> scaled(double factor) const = 0;
    virtual std::string describe() const = 0;

    double posting_revenue(double price) const;
    double sample_value(double u) const { return value_at(u); }
};

struct ConcavityViolation {
    std::size_t index;
    double q;
    double deficit; // how far below the neighbor midpoint, relative to R*
};

// Midpoint-concavity check on a uniform grid; empty result means concave
// within 1e-12 relative tolerance.
std::vector<ConcavityViolation> check_concavity(const RevenueCurve& curve, std::size_t grid_size);

/// Piecewise-linear curve with a single apex at (q*, R*): the distribution
/// with an atom of mass q* at v* = R*/q* and a continuously decreasing tail.
/// Minimizes the area under the curve among concave curves with that peak.
class TriangleCurve final : public RevenueCurve {
public:
    TriangleCurve(double peak_quantile, double peak_revenue);

    double revenue_at(double q) const override;
    double value_at(double q) const override;
    double quantile_of(double price) const override;
    double slope_at(double q, Side side) const override;
    MonopolyPoint monopoly() const override { return {peak_q_, peak_rev_ / peak_q_, peak_rev_}; }
    std::vector<double> kinks() const override { return {peak_q_}; }
    bool bounded() const override { return true; }
    double top_value() const override { return peak_rev_ / peak_q_; }
    std::unique_ptr<RevenueCurve> scaled(double factor) const override;
    std::string describe() const override;

    double peak_quantile() const { return peak_q_; }
    double peak_revenue() const { return peak_rev_; }

private:
    double peak_q_, peak_rev_;
};

/// Uniform distribution on [0, high]. The lower endpoint is pinned at zero so
/// that R(1) = 0 holds exactly.
class UniformCurve final : public RevenueCurve {
public:
    UniformCurve(double low, double high);
    explicit UniformCurve(double high) : UniformCurve(0.0, high) {}

    double revenue_at(double q) const override;
    double value_at(double q) const override;
    double quantile_of(double price) const override;
    double slope_at(double q, Side side) const override;
    MonopolyPoint monopoly() const override { return {0.5, 0.5 * high_, 0.25 * high_}; }
    std::vector<double> kinks() const override { return {}; }
    bool bounded() const override { return true; }
    double top_value() const override { return high_; }
    std::unique_ptr<RevenueCurve> scaled(double factor) const override;
    std::string describe() const override;

    double high() const { return high_; }

private:
    double high_;
};

/// Exponential distribution with the given rate; unbounded support.
class ExponentialCurve final : public RevenueCurve {
public:
    explicit ExponentialCurve(double rate);

    double revenue_at(double q) const override;
    double value_at(double q) const override;
    double quantile_of(double price) const override;
    double slope_at(double q, Side side) const override;
    MonopolyPoint monopoly() const override;
    std::vector<double> kinks() const override { return {}; }
    bool bounded() const override { return false; }
    double top_value() const override;
    std::unique_ptr<RevenueCurve> scaled(double factor) const override;
    std::string describe() const override;

    double rate() const { return rate_; }

private:
    double rate_;
};

/// Equal-revenue body truncated at a top value `cap` (an atom there) and mixed
/// at the bottom with a uniform wedge on [0, floor] carrying probability
/// `mix`, so that both R(0) = 0 and R(1) = 0 hold exactly:
///
///     R(q) = q * cap                 on [0, (1-mix) floor/cap]   (top atom)
///     R(q) = (1-mix) * floor         on [.., 1-mix]              (plateau)
///     R(q) = floor * q(1-q) / mix    on [1-mix, 1]               (wedge)
class TruncatedEqualRevenueCurve final : public RevenueCurve {
public:
    TruncatedEqualRevenueCurve(double floor_value, double cap, double mix = 0.25);

    double revenue_at(double q) const override;
    double value_at(double q) const override;
    double quantile_of(double price) const override;
    double slope_at(double q, Side side) const override;
    MonopolyPoint monopoly() const override { return {atom_q_, cap_, level_}; }
    std::vector<double> kinks() const override { return {atom_q_, plateau_end_}; }
    bool bounded() const override { return true; }
    double top_value() const override { return cap_; }
    std::unique_ptr<RevenueCurve> scaled(double factor) const override;
    std::string describe() const override;

    double floor_value() const { return floor_; }
    double cap() const { return cap_; }
    double mix() const { return mix_; }

private:
    double floor_, cap_, mix_;
    double atom_q_;      // (1-mix) floor / cap
    double plateau_end_; // 1 - mix
    double level_;       // (1-mix) floor
};

/// General concave polyline through (0,0) and (1,0); the search space for
/// adversarial perturbation. The constructor checks endpoints, ordering and
/// nonnegativity only; concavity is enforced by validate_concave_knots (the
/// loaders call it), so non-concave knot sets can still be run through
/// check_concavity. Quantile queries assume a concave curve.
class PiecewiseLinearCurve final : public RevenueCurve {
public:
    using Knot = std::pair<double, double>; // (quantile, revenue)

    explicit PiecewiseLinearCurve(std::vector<Knot> knots);

    double revenue_at(double q) const override;
    double value_at(double q) const override;
    double quantile_of(double price) const override;
    double slope_at(double q, Side side) const override;
    MonopolyPoint monopoly() const override;
    std::vector<double> kinks() const override;
    bool bounded() const override { return true; }
    double top_value() const override { return slopes_.front(); }
    std::unique_ptr<RevenueCurve> scaled(double factor) const override;
    std::string describe() const override;

    const std::vector<Knot>& knots() const { return knots_; }

private:
    std::size_t segment_of(double q) const;

    std::vector<Knot> knots_;
    std::vector<double> slopes_; // per segment
};

// Throws naming the first knot where the slope increases.
void validate_concave_knots(const std::vector<PiecewiseLinearCurve::Knot>& knots);

} // namespace pia
