#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dpar/errors.hpp"
#include "dpar/work.hpp"

namespace dpar {

// ceil(log2 x) for x >= 1; 0 for x <= 1.
inline unsigned ceil_log2(std::uint64_t x) {
  return x <= 1 ? 0u : static_cast<unsigned>(std::bit_width(x - 1));
}

// Inclusive prefix sums. Throws InstanceTooLarge on signed overflow.
std::vector<std::int64_t> prefix_sum(std::span<const std::int64_t> xs);

// Exclusive scan of counts, returned with a trailing total (size n+1).
std::vector<std::uint64_t> offsets_from_counts(std::span<const std::uint64_t> counts);

// Stable permutation ordering indices by key (LSD counting passes).
std::vector<std::uint32_t> stable_order_by_key(std::span<const std::uint32_t> keys);

template <class P>
struct SortedByKey {
  std::vector<std::uint32_t> keys;
  std::vector<P> payloads;
};

// Stable sort of keys drawn from [1, ceil(log2 N)] using one binary pass per
// key bit; each pass is a stable split computed from prefix sums.
template <class P>
SortedByKey<P> radix_sort_small_keys(std::span<const std::uint32_t> keys, std::span<const P> payloads,
                                     std::uint64_t N) {
  if (keys.size() != payloads.size()) throw ContractViolation("radix_sort_small_keys: length mismatch");
  const unsigned max_key = ceil_log2(N);
  for (std::uint32_t k : keys) {
    if (k < 1 || k > max_key)
      throw ContractViolation("radix_sort_small_keys: key " + std::to_string(k) + " outside [1, " +
                              std::to_string(max_key) + "]");
  }
  SortedByKey<P> out{std::vector<std::uint32_t>(keys.begin(), keys.end()),
                     std::vector<P>(payloads.begin(), payloads.end())};
  const std::size_t n = keys.size();
  if (n == 0) return out;
  const unsigned passes = static_cast<unsigned>(std::bit_width(max_key));
  std::vector<std::uint32_t> tmp_keys(n);
  std::vector<P> tmp_payloads(n);
  std::vector<std::uint64_t> zero_rank(n), one_rank(n);
  for (unsigned bit = 0; bit < passes; ++bit) {
    std::uint64_t zeros = 0, ones = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if ((out.keys[i] >> bit) & 1u) {
        one_rank[i] = ones++;
      } else {
        zero_rank[i] = zeros++;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint64_t pos = ((out.keys[i] >> bit) & 1u) ? zeros + one_rank[i] : zero_rank[i];
      tmp_keys[pos] = out.keys[i];
      tmp_payloads[pos] = out.payloads[i];
    }
    out.keys.swap(tmp_keys);
    out.payloads.swap(tmp_payloads);
    charge("prefix_sum", 2 * n);
    charge("sort", n);
  }
  return out;
}

}  // namespace dpar
