#include "glsurf/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace glsurf::par {

namespace {
int g_threads = 1;
}

void set_threads(int n) {
  if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
  g_threads = std::max(1, n);
}

int threads() { return g_threads; }

void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t)>& body) {
  if (n == 0) return;
  const std::size_t nchunks = (n + kChunk - 1) / kChunk;
  if (g_threads == 1 || nchunks == 1) {
    for (std::size_t c = 0; c < nchunks; ++c)
      body(c * kChunk, std::min(n, (c + 1) * kChunk));
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= nchunks) return;
      body(c * kChunk, std::min(n, (c + 1) * kChunk));
    }
  };
  std::vector<std::thread> pool;
  const int nw = std::min<std::size_t>(g_threads, nchunks);
  pool.reserve(nw - 1);
  for (int t = 1; t < nw; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

namespace {

// Shared skeleton: per-chunk partials, combined serially in chunk order.
template <class T, class Term, class Combine>
T reduce_chunks(std::size_t n, T init, const Term& term, const Combine& comb) {
  if (n == 0) return init;
  const std::size_t nchunks = (n + kChunk - 1) / kChunk;
  std::vector<T> partial(nchunks, init);
  parallel_for(n, [&](std::size_t b, std::size_t e) {
    T acc = init;
    for (std::size_t i = b; i < e; ++i) acc = comb(acc, term(i));
    partial[b / kChunk] = acc;
  });
  T total = init;
  for (const T& p : partial) total = comb(total, p);
  return total;
}

}  // namespace

double chunked_sum(std::size_t n,
                   const std::function<double(std::size_t)>& term) {
  return reduce_chunks<double>(n, 0.0, term,
                               [](double a, double b) { return a + b; });
}

std::complex<double> chunked_sum_c(
    std::size_t n,
    const std::function<std::complex<double>(std::size_t)>& term) {
  using C = std::complex<double>;
  return reduce_chunks<C>(n, C{0.0, 0.0}, term,
                          [](C a, C b) { return a + b; });
}

double chunked_max(std::size_t n,
                   const std::function<double(std::size_t)>& term) {
  return reduce_chunks<double>(n, 0.0, term,
                               [](double a, double b) { return a > b ? a : b; });
}

}  // namespace glsurf::par
