#pragma once

#include <cstddef>
#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fairenc {

// Execution policy for the data-parallel kernels (row transforms, Monte Carlo
// trials, sweep grid points).  Every kernel has a serial path kept as the
// reference implementation; the parallel path must produce bit-identical
// output, which the kernels guarantee by seeding each work item from its
// index and writing results into preallocated slots.
enum class Exec { serial, parallel };

template <typename Fn>
void parallel_for(std::size_t count, Exec exec, Fn&& fn) {
    if (exec == Exec::serial) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
#ifdef _OPENMP
    const std::int64_t n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) fn(static_cast<std::size_t>(i));
#else
    for (std::size_t i = 0; i < count; ++i) fn(i);
#endif
}

}  // namespace fairenc
