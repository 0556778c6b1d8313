#include "dpar/number_theory.hpp"

#include <cmath>
#include <string>

#include "dpar/errors.hpp"
#include "dpar/work.hpp"

namespace dpar {

NumberTheoryTables::NumberTheoryTables(std::uint64_t limit) : limit_(limit) {
  if (limit > (1ull << 31)) throw InstanceTooLarge("precompute_tables: limit too large");
  composite_.assign(limit + 1, 0);
  composite_[0] = 1;
  if (limit >= 1) composite_[1] = 1;
  for (std::uint64_t i = 2; i * i <= limit; ++i) {
    if (composite_[i]) continue;
    for (std::uint64_t j = i * i; j <= limit; j += i) composite_[j] = 1;
  }
  for (std::uint64_t i = 2; i <= limit; ++i)
    if (!composite_[i]) primes_.push_back(static_cast<std::uint32_t>(i));
  charge("tables", limit + 1);
}

bool NumberTheoryTables::is_prime(std::uint64_t x) const {
  if (x > limit_) throw ContractViolation("is_prime: " + std::to_string(x) + " beyond table limit");
  return composite_[x] == 0;
}

const RootTable& NumberTheoryTables::roots(std::uint32_t p) const {
  if (p > limit_ || !is_prime(p)) throw ContractViolation("roots: " + std::to_string(p) + " is not a tabled prime");
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = roots_.find(p);
  if (it != roots_.end()) return *it->second;
  auto table = std::make_unique<RootTable>();
  table->p = p;
  table->sqrt.assign(p, -1);
  table->inverse.assign(p, 0);
  // Descending r so the smallest root wins.
  for (std::int64_t r = static_cast<std::int64_t>(p) - 1; r >= 0; --r)
    table->sqrt[static_cast<std::uint64_t>(r * r) % p] = static_cast<std::int32_t>(r);
  if (p >= 2) table->inverse[1] = 1;
  for (std::uint64_t a = 2; a < p; ++a)
    table->inverse[a] = static_cast<std::uint32_t>((p - (p / a) * static_cast<std::uint64_t>(table->inverse[p % a]) % p) % p);
  charge("tables", 2ull * p);
  return *roots_.emplace(p, std::move(table)).first->second;
}

std::int64_t NumberTheoryTables::sqrt_mod(std::uint32_t p, std::uint32_t a) const {
  const RootTable& t = roots(p);
  return t.sqrt[a % p];
}

std::unique_ptr<NumberTheoryTables> precompute_tables(std::uint64_t limit) {
  return std::make_unique<NumberTheoryTables>(limit);
}

std::uint32_t prime_in_range(const NumberTheoryTables& tables, std::uint64_t x) {
  if (x == 0) throw ParameterError("prime_in_range: x must be positive");
  if (2 * x > tables.limit())
    throw ParameterError("prime_in_range: table limit " + std::to_string(tables.limit()) + " below 2x = " +
                         std::to_string(2 * x));
  for (std::uint64_t y = x; y <= 2 * x; ++y)
    if (tables.is_prime(y)) return static_cast<std::uint32_t>(y);
  throw CertificateViolation("prime_in_range: no prime in [x, 2x]");
}

const NumberTheoryTables& shared_tables(std::uint64_t limit) {
  static std::mutex m;
  static std::unique_ptr<NumberTheoryTables> current;
  static std::vector<std::unique_ptr<NumberTheoryTables>> retired;
  std::lock_guard<std::mutex> lock(m);
  if (!current || current->limit() < limit) {
    std::uint64_t grown = current ? current->limit() : 1024;
    while (grown < limit) grown *= 2;
    if (current) retired.push_back(std::move(current));
    current = precompute_tables(grown);
  }
  return *current;
}

std::uint64_t default_table_limit(std::uint64_t n, double eps_min) {
  const auto cube = static_cast<std::uint64_t>(std::ceil(std::cbrt(static_cast<double>(n))));
  std::uint64_t lim = 2 * 4 * std::max<std::uint64_t>(cube, 1);
  if (eps_min > 0) lim = std::max<std::uint64_t>(lim, 4 * static_cast<std::uint64_t>(std::ceil(1.0 / eps_min)));
  return lim;
}

}  // namespace dpar
