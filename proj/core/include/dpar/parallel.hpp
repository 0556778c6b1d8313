#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace dpar {

void set_num_threads(int threads);
int num_threads();

// Loops below this size run inline; the split is by index only, so results
// never depend on the thread count.
inline constexpr std::size_t parallel_grain = 4096;

template <class F>
void parallel_for(std::size_t begin, std::size_t end, F&& f) {
  if (end <= begin) return;
  const int t = num_threads();
  if (t <= 1 || end - begin < parallel_grain) {
    for (std::size_t i = begin; i < end; ++i) f(i);
    return;
  }
  const auto b = static_cast<std::int64_t>(begin);
  const auto e = static_cast<std::int64_t>(end);
#pragma omp parallel for schedule(static) num_threads(t)
  for (std::int64_t i = b; i < e; ++i) f(static_cast<std::size_t>(i));
}

// Sum with a fixed blocking so the rounding pattern is thread-count independent.
template <class F>
long double parallel_sum(std::size_t n, F&& f) {
  constexpr std::size_t block = 1024;
  const std::size_t blocks = (n + block - 1) / block;
  std::vector<long double> partial(blocks, 0.0L);
  parallel_for(0, blocks, [&](std::size_t bi) {
    long double s = 0.0L;
    const std::size_t lo = bi * block;
    const std::size_t hi = lo + block < n ? lo + block : n;
    for (std::size_t i = lo; i < hi; ++i) s += f(i);
    partial[bi] = s;
  });
  long double total = 0.0L;
  for (long double p : partial) total += p;
  return total;
}

}  // namespace dpar
