#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

namespace pia {

// --- mechanism descriptions -------------------------------------------------

struct SpaSpec {};
struct ReserveSpaSpec {
    double reserve;
};
struct InflatedSpaSpec {
    double delta; // winner must beat (1+delta) times the second bid
};
struct MixedInflatedSpaSpec {
    double epsilon; // probability of running the inflated branch
    double delta;
};
struct PostTheSampleSpec {
    double alpha; // price multiplier on the sample (1 plain, <1 shaded, >1 inflated)
};
struct RandomizedPtsSpec {
    double zeta;    // probability of the shaded branch (alpha = 1 - rho)
    double rho;     // shading factor
    double epsilon; // probability of the inflated branch (alpha = 1 + delta)
    double delta;   // inflation factor
};

using MechanismSpec = std::variant<SpaSpec, ReserveSpaSpec, InflatedSpaSpec, MixedInflatedSpaSpec,
                                   PostTheSampleSpec, RandomizedPtsSpec>;

void validate(const MechanismSpec& spec);
bool is_sample_based(const MechanismSpec& spec); // post-the-sample family (single bidder)
std::string mechanism_name(const MechanismSpec& spec);
std::string describe(const MechanismSpec& spec);

// --- execution --------------------------------------------------------------

struct Outcome {
    std::optional<std::size_t> winner;
    double price = 0.0;
    std::vector<double> payments;

    double total_payment() const { return winner ? price : 0.0; }
};

/// Deterministic uniform stream: mt19937_64 (bit-exact across platforms by
/// the standard), mapped to [0,1) by taking the top 53 bits. Identical seeds
/// reproduce identical outcome sequences.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) : eng_(seed) {}

    double next_unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    std::size_t pick(std::size_t m) {
        std::size_t i = static_cast<std::size_t>(next_unit() * static_cast<double>(m));
        return i < m ? i : m - 1;
    }

    // Sub-stream seed for chunked Monte Carlo: splitmix64 of (seed, stream).
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream);

private:
    std::mt19937_64 eng_;
};

// Draw order is part of the reproducibility contract:
//  * run_spa / run_reserve_spa / run_inflated_spa consume one uniform for the
//    tie-break, and only when the top bid is shared by several bidders (for
//    the inflated auction the tie is broken before the price comparison).
//  * run_mechanism consumes one uniform for the mixture decision first, and
//    only for the mixed/randomized variants, then delegates.

Outcome run_spa(const std::vector<double>& bids, RandomSource& rand);
Outcome run_reserve_spa(const std::vector<double>& bids, double reserve, RandomSource& rand);
Outcome run_inflated_spa(const std::vector<double>& bids, double delta, RandomSource& rand);
Outcome run_post_the_sample(double value, double sample, double alpha, RandomSource& rand);
Outcome run_mechanism(const MechanismSpec& spec, const std::vector<double>& bids,
                      std::optional<double> sample, RandomSource& rand);

} // namespace pia
