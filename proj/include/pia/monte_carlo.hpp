#pragma once

#include <cstdint>

#include "pia/curves.hpp"
#include "pia/mechanisms.hpp"

namespace pia {

struct RevenueEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t trials = 0;
};

/// Monte-Carlo revenue oracle. Trials are grouped into fixed-size chunks;
/// chunk c uses the sub-stream RandomSource::derive(seed, c), and chunk sums
/// are combined in chunk order, so the estimate is bit-identical for any
/// thread count (threads = 1 runs the serial reference loop, 0 = all cores).
///
/// Per-trial draw order: one uniform per bidder (index order), then the
/// sample for post-the-sample variants, then whatever run_mechanism consumes
/// (mixture decision, tie-break).
RevenueEstimate estimate_revenue(const MechanismSpec& spec, const RevenueCurve& curve, int n,
                                 std::uint64_t trials, std::uint64_t seed, int threads = 0);

} // namespace pia
