#include "dpar/primitives.hpp"

#include <algorithm>

namespace dpar {

std::vector<std::int64_t> prefix_sum(std::span<const std::int64_t> xs) {
  std::vector<std::int64_t> out(xs.size());
  std::int64_t acc = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (__builtin_add_overflow(acc, xs[i], &acc))
      throw InstanceTooLarge("prefix_sum: overflow at index " + std::to_string(i));
    out[i] = acc;
  }
  charge("prefix_sum", xs.size());
  return out;
}

std::vector<std::uint64_t> offsets_from_counts(std::span<const std::uint64_t> counts) {
  std::vector<std::uint64_t> out(counts.size() + 1);
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    out[i] = acc;
    if (__builtin_add_overflow(acc, counts[i], &acc))
      throw InstanceTooLarge("offsets_from_counts: overflow at index " + std::to_string(i));
  }
  out[counts.size()] = acc;
  charge("prefix_sum", counts.size());
  return out;
}

namespace {

void counting_pass(std::span<const std::uint32_t> keys, unsigned shift, std::uint32_t mask,
                   const std::vector<std::uint32_t>& in, std::vector<std::uint32_t>& out) {
  std::vector<std::uint64_t> count(static_cast<std::size_t>(mask) + 2, 0);
  for (std::uint32_t idx : in) ++count[((keys[idx] >> shift) & mask) + 1];
  for (std::size_t d = 1; d < count.size(); ++d) count[d] += count[d - 1];
  for (std::uint32_t idx : in) out[count[(keys[idx] >> shift) & mask]++] = idx;
  charge("sort", in.size() + count.size());
}

}  // namespace

std::vector<std::uint32_t> stable_order_by_key(std::span<const std::uint32_t> keys) {
  const std::size_t n = keys.size();
  std::vector<std::uint32_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<std::uint32_t>(i);
  if (n <= 1) return order;
  const std::uint32_t max_key = *std::max_element(keys.begin(), keys.end());
  std::vector<std::uint32_t> tmp(n);
  if (max_key < std::max<std::uint64_t>(2 * n, 1u << 16)) {
    counting_pass(keys, 0, std::bit_ceil(max_key + 1u) - 1u, order, tmp);
    return tmp;
  }
  counting_pass(keys, 0, 0xFFFFu, order, tmp);
  counting_pass(keys, 16, 0xFFFFu, tmp, order);
  return order;
}

}  // namespace dpar
