#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

namespace dpar {

struct RootTable {
  std::uint32_t p = 0;
  std::vector<std::int32_t> sqrt;     // smallest r with r*r = a (mod p), or -1
  std::vector<std::uint32_t> inverse; // a^{-1} mod p, 0 for a = 0
};

// Primes up to a limit plus per-prime square-root and inverse tables. Root
// tables are materialised per prime on first use and cached.
class NumberTheoryTables {
 public:
  explicit NumberTheoryTables(std::uint64_t limit);
  NumberTheoryTables(const NumberTheoryTables&) = delete;
  NumberTheoryTables& operator=(const NumberTheoryTables&) = delete;

  std::uint64_t limit() const { return limit_; }
  const std::vector<std::uint32_t>& primes() const { return primes_; }
  bool is_prime(std::uint64_t x) const;
  const RootTable& roots(std::uint32_t p) const;
  std::int64_t sqrt_mod(std::uint32_t p, std::uint32_t a) const;

 private:
  std::uint64_t limit_;
  std::vector<std::uint8_t> composite_;
  std::vector<std::uint32_t> primes_;
  mutable std::mutex mutex_;
  mutable std::map<std::uint32_t, std::unique_ptr<RootTable>> roots_;
};

std::unique_ptr<NumberTheoryTables> precompute_tables(std::uint64_t limit);

// Smallest prime in [x, 2x]; needs 2x <= tables.limit().
std::uint32_t prime_in_range(const NumberTheoryTables& tables, std::uint64_t x);

// Process-wide tables covering at least `limit`, grown on demand.
const NumberTheoryTables& shared_tables(std::uint64_t limit);

// Default table size for an n-node instance and smallest defect eps.
std::uint64_t default_table_limit(std::uint64_t n, double eps_min);

}  // namespace dpar
