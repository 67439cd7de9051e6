// Benchmark: OpenMP kernels against their serial reference paths.

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "pia/bounds.hpp"
#include "pia/monte_carlo.hpp"
#include "pia/parallel.hpp"
#include "pia/search.hpp"

using namespace pia;
using clk = std::chrono::steady_clock;

namespace {

template <class F>
double time_ms(F&& f) {
    const auto t0 = clk::now();
    f();
    return std::chrono::duration<double, std::milli>(clk::now() - t0).count();
}

} // namespace

int main(int argc, char** argv) {
    const std::uint64_t trials = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 2000000;
    const int threads = par::hardware_threads();
    std::printf("threads available: %d\n\n", threads);
    std::printf("%-34s %10s %10s %8s\n", "kernel", "serial ms", "omp ms", "speedup");

    const TriangleCurve tri(0.3, 1.0);
    {
        RevenueEstimate serial_est, parallel_est;
        const double ts = time_ms([&] {
            serial_est = estimate_revenue(MixedInflatedSpaSpec{0.15, 1.0}, tri, 2, trials, 7, 1);
        });
        const double tp = time_ms([&] {
            parallel_est = estimate_revenue(MixedInflatedSpaSpec{0.15, 1.0}, tri, 2, trials, 7, 0);
        });
        if (serial_est.mean != parallel_est.mean) {
            std::fprintf(stderr, "FATAL: serial and parallel estimates differ\n");
            return 1;
        }
        std::printf("%-34s %10.1f %10.1f %7.2fx\n", "monte carlo (mixed spa)", ts, tp, ts / tp);
    }
    {
        ScanConfig serial_cfg;
        serial_cfg.q_min = 1e-3;
        serial_cfg.q_max = 0.499;
        serial_cfg.q_step = 1e-3;
        serial_cfg.threads = 1;
        ScanConfig parallel_cfg = serial_cfg;
        parallel_cfg.threads = 0;
        ScanResult a, b;
        const double ts =
            time_ms([&] { a = scan_triangles(MixedInflatedSpaSpec{0.15, 1.0}, 2, serial_cfg); });
        const double tp =
            time_ms([&] { b = scan_triangles(MixedInflatedSpaSpec{0.15, 1.0}, 2, parallel_cfg); });
        if (a.min_ratio != b.min_ratio) {
            std::fprintf(stderr, "FATAL: serial and parallel scans differ\n");
            return 1;
        }
        std::printf("%-34s %10.1f %10.1f %7.2fx\n", "triangle scan (mixed spa)", ts, tp, ts / tp);
    }
    {
        RandomizedPtsCertificate a, b;
        const double ts = time_ms([&] { a = verify_randomized_pts_beats_half({}, 1e-4, 1e-3, 1); });
        const double tp = time_ms([&] { b = verify_randomized_pts_beats_half({}, 1e-4, 1e-3, 0); });
        if (a.margin != b.margin) {
            std::fprintf(stderr, "FATAL: serial and parallel certificates differ\n");
            return 1;
        }
        std::printf("%-34s %10.1f %10.1f %7.2fx\n", "randomized pts certificate grid", ts, tp,
                    ts / tp);
    }
    return 0;
}
