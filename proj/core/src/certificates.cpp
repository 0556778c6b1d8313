#include "dpar/certificates.hpp"

#include <mutex>
#include <sstream>

#include "dpar/errors.hpp"

namespace dpar {

namespace {
std::mutex g_mutex;
std::map<std::string, CertificateStats>& table() {
  static std::map<std::string, CertificateStats> t;
  return t;
}
}  // namespace

CertificateLog& CertificateLog::global() {
  static CertificateLog log;
  return log;
}

void CertificateLog::record(std::string_view name, double value, double bound, bool proof_backed) {
  std::lock_guard<std::mutex> lock(g_mutex);
  auto& stats = table()[std::string(name)];
  const double slack = bound - value;
  if (stats.calls == 0 || slack < stats.min_slack) stats.min_slack = slack;
  ++stats.calls;
  if (!(value <= bound)) ++stats.failures;
  stats.proof_backed = proof_backed;
}

std::map<std::string, CertificateStats> CertificateLog::snapshot() const {
  std::lock_guard<std::mutex> lock(g_mutex);
  return table();
}

CertificateStats CertificateLog::get(std::string_view name) const {
  std::lock_guard<std::mutex> lock(g_mutex);
  auto it = table().find(std::string(name));
  return it == table().end() ? CertificateStats{} : it->second;
}

void CertificateLog::reset() {
  std::lock_guard<std::mutex> lock(g_mutex);
  table().clear();
}

void require_certificate(std::string_view name, long double value, long double bound) {
  const bool ok = value <= bound;
  CertificateLog::global().record(name, static_cast<double>(value), static_cast<double>(bound), true);
  if (!ok) {
    std::ostringstream os;
    os.precision(17);
    os << "certificate " << name << " violated: " << static_cast<double>(value) << " > "
       << static_cast<double>(bound);
    throw CertificateViolation(os.str());
  }
}

bool measure_certificate(std::string_view name, long double value, long double bound) {
  CertificateLog::global().record(name, static_cast<double>(value), static_cast<double>(bound), false);
  return value <= bound;
}

}  // namespace dpar
