#include "pia/mechanisms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace pia {

namespace {

void require_probability(double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument(std::string(name) + " must lie in [0,1]");
}

void require_bids(const std::vector<double>& bids, std::size_t min_n) {
    if (bids.size() < min_n)
        throw std::invalid_argument("bid profile needs at least " + std::to_string(min_n) +
                                    " bidders");
    for (double b : bids)
        if (!(b >= 0.0)) throw std::invalid_argument("bids must be nonnegative");
}

// Index of the highest bid with uniform tie-breaking, plus the second-highest
// bid value. The tie draw is consumed only when the maximum is shared.
std::pair<std::size_t, double> top_and_second(const std::vector<double>& bids,
                                              RandomSource& rand) {
    double top = -1.0;
    std::size_t ties = 0;
    for (double b : bids) {
        if (b > top) {
            top = b;
            ties = 1;
        } else if (b == top) {
            ++ties;
        }
    }
    std::size_t chosen = 0;
    if (ties > 1) chosen = rand.pick(ties);
    std::size_t winner = bids.size();
    std::size_t seen = 0;
    for (std::size_t i = 0; i < bids.size(); ++i) {
        if (bids[i] == top && seen++ == chosen) {
            winner = i;
            break;
        }
    }
    double second = 0.0;
    for (std::size_t i = 0; i < bids.size(); ++i)
        if (i != winner) second = std::max(second, bids[i]);
    return {winner, second};
}

Outcome no_sale(std::size_t n) {
    Outcome o;
    o.payments.assign(n, 0.0);
    return o;
}

Outcome sale(std::size_t n, std::size_t winner, double price) {
    Outcome o;
    o.winner = winner;
    o.price = price;
    o.payments.assign(n, 0.0);
    o.payments[winner] = price;
    return o;
}

} // namespace

void validate(const MechanismSpec& spec) {
    std::visit(
        [](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, ReserveSpaSpec>) {
                if (!(s.reserve >= 0.0)) throw std::invalid_argument("reserve must be >= 0");
            } else if constexpr (std::is_same_v<T, InflatedSpaSpec>) {
                if (!(s.delta >= 0.0)) throw std::invalid_argument("delta must be >= 0");
            } else if constexpr (std::is_same_v<T, MixedInflatedSpaSpec>) {
                require_probability(s.epsilon, "epsilon");
                if (!(s.delta >= 0.0)) throw std::invalid_argument("delta must be >= 0");
            } else if constexpr (std::is_same_v<T, PostTheSampleSpec>) {
                if (!(s.alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
            } else if constexpr (std::is_same_v<T, RandomizedPtsSpec>) {
                require_probability(s.zeta, "zeta");
                require_probability(s.epsilon, "epsilon");
                if (s.zeta + s.epsilon > 1.0)
                    throw std::invalid_argument("zeta + epsilon must be <= 1");
                if (!(s.rho >= 0.0 && s.rho < 1.0))
                    throw std::invalid_argument("rho must lie in [0,1)");
                if (!(s.delta >= 0.0)) throw std::invalid_argument("delta must be >= 0");
            }
        },
        spec);
}

bool is_sample_based(const MechanismSpec& spec) {
    return std::holds_alternative<PostTheSampleSpec>(spec) ||
           std::holds_alternative<RandomizedPtsSpec>(spec);
}

std::string mechanism_name(const MechanismSpec& spec) {
    struct Namer {
        std::string operator()(const SpaSpec&) const { return "spa"; }
        std::string operator()(const ReserveSpaSpec&) const { return "reserve_spa"; }
        std::string operator()(const InflatedSpaSpec&) const { return "inflated_spa"; }
        std::string operator()(const MixedInflatedSpaSpec&) const { return "mixed_inflated_spa"; }
        std::string operator()(const PostTheSampleSpec&) const { return "post_the_sample"; }
        std::string operator()(const RandomizedPtsSpec&) const { return "randomized_pts"; }
    };
    return std::visit(Namer{}, spec);
}

std::string describe(const MechanismSpec& spec) {
    std::ostringstream os;
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, SpaSpec>) {
                os << "spa";
            } else if constexpr (std::is_same_v<T, ReserveSpaSpec>) {
                os << "reserve_spa(r=" << s.reserve << ")";
            } else if constexpr (std::is_same_v<T, InflatedSpaSpec>) {
                os << "inflated_spa(delta=" << s.delta << ")";
            } else if constexpr (std::is_same_v<T, MixedInflatedSpaSpec>) {
                os << "mixed_inflated_spa(epsilon=" << s.epsilon << ", delta=" << s.delta << ")";
            } else if constexpr (std::is_same_v<T, PostTheSampleSpec>) {
                os << "post_the_sample(alpha=" << s.alpha << ")";
            } else if constexpr (std::is_same_v<T, RandomizedPtsSpec>) {
                os << "randomized_pts(zeta=" << s.zeta << ", rho=" << s.rho
                   << ", epsilon=" << s.epsilon << ", delta=" << s.delta << ")";
            }
        },
        spec);
    return os.str();
}

std::uint64_t RandomSource::derive(std::uint64_t seed, std::uint64_t stream) {
    // splitmix64 over the combined word; decorrelates chunk sub-streams.
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

Outcome run_spa(const std::vector<double>& bids, RandomSource& rand) {
    require_bids(bids, 2);
    auto [winner, second] = top_and_second(bids, rand);
    return sale(bids.size(), winner, second);
}

Outcome run_reserve_spa(const std::vector<double>& bids, double reserve, RandomSource& rand) {
    require_bids(bids, 1);
    if (!(reserve >= 0.0)) throw std::invalid_argument("reserve must be >= 0");
    auto [winner, second] = top_and_second(bids, rand);
    if (bids[winner] < reserve) return no_sale(bids.size());
    return sale(bids.size(), winner, std::max(reserve, second));
}

Outcome run_inflated_spa(const std::vector<double>& bids, double delta, RandomSource& rand) {
    require_bids(bids, 2);
    if (!(delta >= 0.0)) throw std::invalid_argument("delta must be >= 0");
    auto [winner, second] = top_and_second(bids, rand);
    const double price = (1.0 + delta) * second;
    // Strict comparison: a bidder exactly at the inflated price does not buy.
    if (bids[winner] > price) return sale(bids.size(), winner, price);
    return no_sale(bids.size());
}

Outcome run_post_the_sample(double value, double sample, double alpha, RandomSource&) {
    if (!(value >= 0.0) || !(sample >= 0.0))
        throw std::invalid_argument("value and sample must be nonnegative");
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
    const double price = alpha * sample;
    // Weak comparison: a buyer indifferent at the posted price accepts.
    if (value >= price) return sale(1, 0, price);
    return no_sale(1);
}

Outcome run_mechanism(const MechanismSpec& spec, const std::vector<double>& bids,
                      std::optional<double> sample, RandomSource& rand) {
    validate(spec);
    if (is_sample_based(spec)) {
        if (!sample) throw std::invalid_argument("post-the-sample mechanisms require a sample");
        if (bids.size() != 1)
            throw std::invalid_argument("post-the-sample mechanisms are single-bidder");
    } else if (sample) {
        throw std::invalid_argument(mechanism_name(spec) + " takes no sample");
    }

    struct Runner {
        const std::vector<double>& bids;
        std::optional<double> sample;
        RandomSource& rand;

        Outcome operator()(const SpaSpec&) { return run_spa(bids, rand); }
        Outcome operator()(const ReserveSpaSpec& s) {
            return run_reserve_spa(bids, s.reserve, rand);
        }
        Outcome operator()(const InflatedSpaSpec& s) {
            return run_inflated_spa(bids, s.delta, rand);
        }
        Outcome operator()(const MixedInflatedSpaSpec& s) {
            const double u = rand.next_unit(); // mixture decision, always consumed
            if (u < s.epsilon) return run_inflated_spa(bids, s.delta, rand);
            return run_spa(bids, rand);
        }
        Outcome operator()(const PostTheSampleSpec& s) {
            return run_post_the_sample(bids[0], *sample, s.alpha, rand);
        }
        Outcome operator()(const RandomizedPtsSpec& s) {
            const double u = rand.next_unit(); // mixture decision, always consumed
            double alpha = 1.0;
            if (u < s.zeta) alpha = 1.0 - s.rho;
            else if (u < s.zeta + s.epsilon) alpha = 1.0 + s.delta;
            return run_post_the_sample(bids[0], *sample, alpha, rand);
        }
    };
    return std::visit(Runner{bids, sample, rand}, spec);
}

} // namespace pia
