#include "pia/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "pia/parallel.hpp"

namespace pia {

namespace {

constexpr std::uint64_t kChunk = 8192;

struct ChunkSums {
    double sum = 0.0;
    double sum_sq = 0.0;
};

} // namespace

RevenueEstimate estimate_revenue(const MechanismSpec& spec, const RevenueCurve& curve, int n,
                                 std::uint64_t trials, std::uint64_t seed, int threads) {
    validate(spec);
    if (trials < 1) throw std::invalid_argument("estimate_revenue: trials must be >= 1");
    const bool sampled = is_sample_based(spec);
    if (sampled && n != 1)
        throw std::invalid_argument("estimate_revenue: post-the-sample variants require n = 1");
    if (std::holds_alternative<SpaSpec>(spec) || std::holds_alternative<InflatedSpaSpec>(spec) ||
        std::holds_alternative<MixedInflatedSpaSpec>(spec)) {
        if (n < 2) throw std::invalid_argument("estimate_revenue: auction variants require n >= 2");
    }
    if (n < 1) throw std::invalid_argument("estimate_revenue: n must be >= 1");

    const std::uint64_t chunks = (trials + kChunk - 1) / kChunk;
    std::vector<ChunkSums> partial(chunks);

    par::parallel_for(static_cast<std::int64_t>(chunks), threads, [&](std::int64_t c) {
        RandomSource rand(RandomSource::derive(seed, static_cast<std::uint64_t>(c)));
        const std::uint64_t lo = static_cast<std::uint64_t>(c) * kChunk;
        const std::uint64_t hi = std::min(trials, lo + kChunk);
        std::vector<double> bids(static_cast<std::size_t>(n));
        ChunkSums s;
        for (std::uint64_t t = lo; t < hi; ++t) {
            for (int i = 0; i < n; ++i) bids[static_cast<std::size_t>(i)] =
                curve.sample_value(rand.next_unit());
            std::optional<double> sample;
            if (sampled) sample = curve.sample_value(rand.next_unit());
            const Outcome out = run_mechanism(spec, bids, sample, rand);
            const double pay = out.total_payment();
            s.sum += pay;
            s.sum_sq += pay * pay;
        }
        partial[static_cast<std::size_t>(c)] = s;
    });

    double sum = 0.0, sum_sq = 0.0;
    for (const ChunkSums& s : partial) {
        sum += s.sum;
        sum_sq += s.sum_sq;
    }
    const double t = static_cast<double>(trials);
    RevenueEstimate est;
    est.trials = trials;
    est.mean = sum / t;
    if (trials > 1) {
        const double var = std::max(0.0, (sum_sq - sum * sum / t) / (t - 1.0));
        est.std_error = std::sqrt(var / t);
    }
    return est;
}

} // namespace pia
