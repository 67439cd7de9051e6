#include "pia/curves.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace pia {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_quantile(double q) {
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile outside [0,1]");
}

void require_price(double p) {
    if (!(p >= 0.0)) throw std::invalid_argument("negative price");
}

std::string fmt(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

} // namespace

double RevenueCurve::posting_revenue(double price) const {
    require_price(price);
    return price * quantile_of(price);
}

std::vector<ConcavityViolation> check_concavity(const RevenueCurve& curve, std::size_t grid_size) {
    if (grid_size < 3) throw std::invalid_argument("check_concavity: grid_size must be >= 3");
    const double scale = std::max(curve.monopoly().revenue, 1e-300);
    std::vector<ConcavityViolation> out;
    const double h = 1.0 / static_cast<double>(grid_size - 1);
    double prev = curve.revenue_at(0.0);
    double cur = curve.revenue_at(h);
    for (std::size_t i = 1; i + 1 < grid_size; ++i) {
        const double q = static_cast<double>(i) * h;
        const double next = curve.revenue_at(std::min(1.0, q + h));
        const double mid = 0.5 * (prev + next);
        const double deficit = (mid - cur) / scale;
        if (deficit > 1e-12) out.push_back({i, q, deficit});
        prev = cur;
        cur = next;
    }
    return out;
}

// --- TriangleCurve ---------------------------------------------------------

TriangleCurve::TriangleCurve(double peak_quantile, double peak_revenue)
    : peak_q_(peak_quantile), peak_rev_(peak_revenue) {
    // peak_quantile = 1 would force R(1) = R* > 0, which the curve contract
    // excludes; the open interval is the admissible range.
    if (!(peak_q_ > 0.0 && peak_q_ < 1.0))
        throw std::invalid_argument("triangle: peak quantile must lie in (0,1)");
    if (!(peak_rev_ > 0.0)) throw std::invalid_argument("triangle: peak revenue must be positive");
}

double TriangleCurve::revenue_at(double q) const {
    require_quantile(q);
    if (q <= peak_q_) return peak_rev_ * q / peak_q_;
    return peak_rev_ * (1.0 - q) / (1.0 - peak_q_);
}

double TriangleCurve::value_at(double q) const {
    require_quantile(q);
    if (q <= peak_q_) return peak_rev_ / peak_q_; // atom at the top value
    return peak_rev_ * (1.0 - q) / (q * (1.0 - peak_q_));
}

double TriangleCurve::quantile_of(double price) const {
    require_price(price);
    if (price > peak_rev_ / peak_q_) return 0.0;
    // Right-branch inverse; at price = v* this lands exactly on q*.
    return peak_rev_ / (price * (1.0 - peak_q_) + peak_rev_);
}

double TriangleCurve::slope_at(double q, Side side) const {
    require_quantile(q);
    const double left_slope = peak_rev_ / peak_q_;
    const double right_slope = -peak_rev_ / (1.0 - peak_q_);
    if (q < peak_q_) return left_slope;
    if (q > peak_q_) return right_slope;
    return side == Side::Left ? left_slope : right_slope;
}

std::unique_ptr<RevenueCurve> TriangleCurve::scaled(double factor) const {
    return std::make_unique<TriangleCurve>(peak_q_, peak_rev_ * factor);
}

std::string TriangleCurve::describe() const {
    return "triangle(q*=" + fmt(peak_q_) + ", R*=" + fmt(peak_rev_) + ")";
}

// --- UniformCurve ----------------------------------------------------------

UniformCurve::UniformCurve(double low, double high) : high_(high) {
    if (low != 0.0)
        throw std::invalid_argument(
            "uniform: lower endpoint must be 0 (otherwise R(1) = low > 0)");
    if (!(high_ > 0.0)) throw std::invalid_argument("uniform: upper endpoint must be positive");
}

double UniformCurve::revenue_at(double q) const {
    require_quantile(q);
    return high_ * q * (1.0 - q);
}

double UniformCurve::value_at(double q) const {
    require_quantile(q);
    return high_ * (1.0 - q);
}

double UniformCurve::quantile_of(double price) const {
    require_price(price);
    if (price > high_) return 0.0;
    return 1.0 - price / high_;
}

double UniformCurve::slope_at(double q, Side) const {
    require_quantile(q);
    return high_ * (1.0 - 2.0 * q);
}

std::unique_ptr<RevenueCurve> UniformCurve::scaled(double factor) const {
    return std::make_unique<UniformCurve>(0.0, high_ * factor);
}

std::string UniformCurve::describe() const { return "uniform(0, " + fmt(high_) + ")"; }

// --- ExponentialCurve ------------------------------------------------------

ExponentialCurve::ExponentialCurve(double rate) : rate_(rate) {
    if (!(rate_ > 0.0)) throw std::invalid_argument("exponential: rate must be positive");
}

double ExponentialCurve::revenue_at(double q) const {
    require_quantile(q);
    if (q == 0.0) return 0.0; // limit of -q log q
    return -q * std::log(q) / rate_;
}

double ExponentialCurve::value_at(double q) const {
    require_quantile(q);
    if (q == 0.0) return kInf;
    return -std::log(q) / rate_;
}

double ExponentialCurve::quantile_of(double price) const {
    require_price(price);
    return std::exp(-rate_ * price);
}

double ExponentialCurve::slope_at(double q, Side) const {
    require_quantile(q);
    if (q == 0.0) return kInf;
    return -(std::log(q) + 1.0) / rate_;
}

MonopolyPoint ExponentialCurve::monopoly() const {
    const double qs = std::exp(-1.0);
    return {qs, 1.0 / rate_, qs / rate_};
}

double ExponentialCurve::top_value() const { return kInf; }

std::unique_ptr<RevenueCurve> ExponentialCurve::scaled(double factor) const {
    return std::make_unique<ExponentialCurve>(rate_ / factor);
}

std::string ExponentialCurve::describe() const { return "exponential(rate=" + fmt(rate_) + ")"; }

// --- TruncatedEqualRevenueCurve --------------------------------------------

TruncatedEqualRevenueCurve::TruncatedEqualRevenueCurve(double floor_value, double cap, double mix)
    : floor_(floor_value), cap_(cap), mix_(mix) {
    if (!(floor_ > 0.0)) throw std::invalid_argument("trunc_er: floor must be positive");
    if (!(cap_ > floor_)) throw std::invalid_argument("trunc_er: cap must exceed floor");
    if (!(mix_ > 0.0 && mix_ <= 0.5))
        throw std::invalid_argument("trunc_er: mix weight must lie in (0, 0.5]");
    atom_q_ = (1.0 - mix_) * floor_ / cap_;
    plateau_end_ = 1.0 - mix_;
    level_ = (1.0 - mix_) * floor_;
}

double TruncatedEqualRevenueCurve::revenue_at(double q) const {
    require_quantile(q);
    if (q <= atom_q_) return q * cap_;
    if (q <= plateau_end_) return level_;
    return floor_ * q * (1.0 - q) / mix_;
}

double TruncatedEqualRevenueCurve::value_at(double q) const {
    require_quantile(q);
    if (q <= atom_q_) return cap_;
    if (q <= plateau_end_) return level_ / q;
    return floor_ * (1.0 - q) / mix_;
}

double TruncatedEqualRevenueCurve::quantile_of(double price) const {
    require_price(price);
    if (price > cap_) return 0.0;
    if (price >= floor_) return level_ / price;
    return 1.0 - mix_ * price / floor_;
}

double TruncatedEqualRevenueCurve::slope_at(double q, Side side) const {
    require_quantile(q);
    if (q < atom_q_ || (q == atom_q_ && side == Side::Left)) return cap_;
    if (q < plateau_end_ || (q == plateau_end_ && side == Side::Left)) return 0.0;
    return floor_ * (1.0 - 2.0 * q) / mix_;
}

std::unique_ptr<RevenueCurve> TruncatedEqualRevenueCurve::scaled(double factor) const {
    return std::make_unique<TruncatedEqualRevenueCurve>(floor_ * factor, cap_ * factor, mix_);
}

std::string TruncatedEqualRevenueCurve::describe() const {
    return "trunc_er(floor=" + fmt(floor_) + ", cap=" + fmt(cap_) + ", mix=" + fmt(mix_) + ")";
}

// --- PiecewiseLinearCurve ---------------------------------------------------

PiecewiseLinearCurve::PiecewiseLinearCurve(std::vector<Knot> knots) : knots_(std::move(knots)) {
    if (knots_.size() < 3) throw std::invalid_argument("piecewise_linear: need at least 3 knots");
    if (knots_.front().first != 0.0 || knots_.front().second != 0.0)
        throw std::invalid_argument("piecewise_linear: knot 0 must be (0, 0)");
    if (knots_.back().first != 1.0 || knots_.back().second != 0.0)
        throw std::invalid_argument("piecewise_linear: knot " + std::to_string(knots_.size() - 1) +
                                    " must be (1, 0)");
    double peak = 0.0;
    for (std::size_t i = 0; i < knots_.size(); ++i) {
        if (knots_[i].second < 0.0)
            throw std::invalid_argument("piecewise_linear: negative revenue at knot " +
                                        std::to_string(i));
        peak = std::max(peak, knots_[i].second);
        if (i + 1 < knots_.size() && !(knots_[i].first < knots_[i + 1].first))
            throw std::invalid_argument("piecewise_linear: quantiles not increasing at knot " +
                                        std::to_string(i + 1));
    }
    if (!(peak > 0.0)) throw std::invalid_argument("piecewise_linear: curve is identically zero");
    slopes_.resize(knots_.size() - 1);
    for (std::size_t i = 0; i + 1 < knots_.size(); ++i)
        slopes_[i] = (knots_[i + 1].second - knots_[i].second) /
                     (knots_[i + 1].first - knots_[i].first);
    // Concavity is a loader invariant, checked by validate_concave_knots; a
    // curve built directly from increasing slopes is permitted so that
    // check_concavity has something to report.
}

void validate_concave_knots(const std::vector<PiecewiseLinearCurve::Knot>& knots) {
    double peak = 0.0;
    for (const auto& k : knots) peak = std::max(peak, k.second);
    for (std::size_t i = 0; i + 2 < knots.size(); ++i) {
        const double s0 =
            (knots[i + 1].second - knots[i].second) / (knots[i + 1].first - knots[i].first);
        const double s1 = (knots[i + 2].second - knots[i + 1].second) /
                          (knots[i + 2].first - knots[i + 1].first);
        if (s1 > s0 + 1e-12 * std::max(1.0, peak))
            throw std::invalid_argument("piecewise_linear: slope increases at knot " +
                                        std::to_string(i + 1));
    }
}

std::size_t PiecewiseLinearCurve::segment_of(double q) const {
    // Last segment whose start is <= q.
    auto it = std::upper_bound(knots_.begin(), knots_.end(), q,
                               [](double x, const Knot& k) { return x < k.first; });
    std::size_t idx = static_cast<std::size_t>(it - knots_.begin());
    if (idx == 0) return 0;
    if (idx >= knots_.size()) return knots_.size() - 2;
    return idx - 1;
}

double PiecewiseLinearCurve::revenue_at(double q) const {
    require_quantile(q);
    const std::size_t i = segment_of(q);
    // interpolation can round a hair below zero at the endpoints
    return std::max(0.0, knots_[i].second + slopes_[i] * (q - knots_[i].first));
}

double PiecewiseLinearCurve::value_at(double q) const {
    require_quantile(q);
    // The first segment starts at (0,0), so it is an atom at the top value;
    // return that value exactly so composed quantile maps see a constant.
    if (q <= knots_[1].first) return slopes_.front();
    return revenue_at(q) / q;
}

double PiecewiseLinearCurve::quantile_of(double price) const {
    require_price(price);
    if (price == 0.0) return 1.0;
    if (price > slopes_.front()) return 0.0;
    // Largest root of the concave function g(q) = R(q) - price*q, g(0) = 0.
    // Scan segments from the right; the first knot with g > 0 brackets it.
    for (std::size_t i = knots_.size() - 1; i-- > 0;) {
        const double g = knots_[i].second - price * knots_[i].first;
        if (g > 0.0) {
            return knots_[i].first + g / (price - slopes_[i]);
        }
        if (g == 0.0 && i > 0) {
            // Sitting exactly on a root: the atom's right end is the answer.
            return knots_[i].first;
        }
    }
    // price equals the top value: the first segment is the root set.
    return knots_[1].first;
}

double PiecewiseLinearCurve::slope_at(double q, Side side) const {
    require_quantile(q);
    if (q == 0.0) return slopes_.front();
    if (q == 1.0) return slopes_.back();
    const std::size_t i = segment_of(q);
    if (side == Side::Left && q == knots_[i].first && i > 0) return slopes_[i - 1];
    return slopes_[i];
}

MonopolyPoint PiecewiseLinearCurve::monopoly() const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < knots_.size(); ++i)
        if (knots_[i].second > knots_[best].second) best = i;
    const double qs = knots_[best].first;
    return {qs, knots_[best].second / qs, knots_[best].second};
}

std::vector<double> PiecewiseLinearCurve::kinks() const {
    std::vector<double> ks;
    for (std::size_t i = 1; i + 1 < knots_.size(); ++i) ks.push_back(knots_[i].first);
    return ks;
}

std::unique_ptr<RevenueCurve> PiecewiseLinearCurve::scaled(double factor) const {
    std::vector<Knot> ks = knots_;
    for (auto& k : ks) k.second *= factor;
    return std::make_unique<PiecewiseLinearCurve>(std::move(ks));
}

std::string PiecewiseLinearCurve::describe() const {
    return "piecewise_linear(" + std::to_string(knots_.size()) + " knots, R*=" +
           fmt(monopoly().revenue) + ")";
}

} // namespace pia
