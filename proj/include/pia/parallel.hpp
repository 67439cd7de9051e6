#pragma once

#include <cstdint>
#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pia::par {

inline int hardware_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

// Resolve a user-facing thread count: 0 means "all available", 1 means the
// serial reference path, anything else is an explicit cap.
inline int resolve_threads(int requested) {
    if (requested <= 0) return hardware_threads();
    return requested;
}

// Runs fn(i) for i in [0, n). Results must be written to per-index slots so
// that the output is independent of the schedule; reductions are done by the
// caller in index order afterwards. An exception thrown by any iteration is
// captured and rethrown after the loop (it must not escape the omp region).
template <class Fn>
void parallel_for(std::int64_t n, int threads, Fn&& fn) {
    threads = resolve_threads(threads);
#ifdef _OPENMP
    if (threads > 1) {
        std::exception_ptr error;
#pragma omp parallel for num_threads(threads) schedule(static)
        for (std::int64_t i = 0; i < n; ++i) {
            try {
                fn(i);
            } catch (...) {
#pragma omp critical(pia_parallel_for_error)
                if (!error) error = std::current_exception();
            }
        }
        if (error) std::rethrow_exception(error);
        return;
    }
#endif
    for (std::int64_t i = 0; i < n; ++i) fn(i);
}

// Serial twin of parallel_for, kept as the reference implementation.
template <class Fn>
void serial_for(std::int64_t n, Fn&& fn) {
    for (std::int64_t i = 0; i < n; ++i) fn(i);
}

} // namespace pia::par
