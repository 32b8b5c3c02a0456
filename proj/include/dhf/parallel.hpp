#pragma once

#include <cstddef>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dhf::par {

// jobs == 1 selects the serial reference path, jobs > 1 the OpenMP path with
// that many threads, jobs == 0 the OpenMP path with the hardware default.
// Every kernel in this project produces bit-identical results on both paths;
// tests compare them directly.

inline int resolve_jobs(int jobs) {
#ifdef _OPENMP
    if (jobs <= 0) return omp_get_max_threads();
    return jobs;
#else
    (void)jobs;
    return 1;
#endif
}

template <typename Fn>
void for_each_index_serial(std::size_t n, Fn&& fn) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
}

template <typename Fn>
void for_each_index_parallel(std::size_t n, int jobs, Fn&& fn) {
#ifdef _OPENMP
    const int threads = resolve_jobs(jobs);
#pragma omp parallel for schedule(static) num_threads(threads)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
        fn(static_cast<std::size_t>(i));
#else
    (void)jobs;
    for_each_index_serial(n, std::forward<Fn>(fn));
#endif
}

// Dispatch between the two paths. Iterations must be independent.
template <typename Fn>
void for_each_index(std::size_t n, int jobs, Fn&& fn) {
    if (resolve_jobs(jobs) <= 1) {
        for_each_index_serial(n, std::forward<Fn>(fn));
    } else {
        for_each_index_parallel(n, jobs, std::forward<Fn>(fn));
    }
}

} // namespace dhf::par
