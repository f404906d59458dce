#pragma once

#include <cstddef>

#if defined(_OPENMP)
#include <omp.h>
#else
inline int omp_get_max_threads() { return 1; }
inline int omp_in_parallel() { return 0; }
#endif

namespace hslra {

// Runs body(i) for i in [0, count). threads = 1 (or a non-OpenMP build, or a
// call from inside an existing parallel region) uses the plain serial loop;
// threads = 0 lets the runtime pick. Bodies must only write to their own
// slots, so results are identical for every thread count.
template <typename Body>
void parallel_for(std::size_t count, int threads, Body&& body) {
#if defined(_OPENMP)
    if (threads != 1 && !omp_in_parallel()) {
        const int want = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(want)
        for (long long i = 0; i < static_cast<long long>(count); ++i)
            body(static_cast<std::size_t>(i));
        return;
    }
#else
    (void)threads;
#endif
    for (std::size_t i = 0; i < count; ++i) body(i);
}

} // namespace hslra
