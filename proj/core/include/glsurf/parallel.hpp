#pragma once

#include <complex>
#include <cstddef>
#include <functional>

// Deterministic reductions: sums are accumulated over fixed-size index chunks
// and the per-chunk partials are combined in chunk order, so the result is
// bitwise identical no matter how many worker threads computed the chunks.

namespace glsurf::par {

// Number of worker threads used by parallel_for / chunked reductions.
// Defaults to 1; set_threads(0) picks hardware_concurrency().
void set_threads(int n);
int threads();

inline constexpr std::size_t kChunk = 4096;

// Calls body(begin, end) over disjoint ranges covering [0, n).
// Ranges are aligned to kChunk boundaries.
void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t)>& body);

// Sum of term(i) for i in [0, n), chunk-deterministic as described above.
double chunked_sum(std::size_t n,
                   const std::function<double(std::size_t)>& term);

std::complex<double> chunked_sum_c(
    std::size_t n, const std::function<std::complex<double>(std::size_t)>& term);

// Max of term(i) for i in [0, n); 0 for empty ranges.
double chunked_max(std::size_t n,
                   const std::function<double(std::size_t)>& term);

}  // namespace glsurf::par
