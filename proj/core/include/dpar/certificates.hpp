#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

namespace dpar {

// Aggregate of every inequality checked at runtime, keyed by certificate name.
struct CertificateStats {
  std::uint64_t calls = 0;
  std::uint64_t failures = 0;
  double min_slack = 0.0;  // min over calls of (bound - value); negative means violated
  bool proof_backed = true;
};

class CertificateLog {
 public:
  static CertificateLog& global();

  void record(std::string_view name, double value, double bound, bool proof_backed);
  std::map<std::string, CertificateStats> snapshot() const;
  CertificateStats get(std::string_view name) const;
  void reset();
};

// value <= bound must hold by construction; logs and throws CertificateViolation otherwise.
void require_certificate(std::string_view name, long double value, long double bound);

// Empirical inequality: logged, never thrown.
bool measure_certificate(std::string_view name, long double value, long double bound);

}  // namespace dpar
