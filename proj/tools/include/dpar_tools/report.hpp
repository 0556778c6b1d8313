#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "dpar/certificates.hpp"
#include "dpar_tools/verify.hpp"

namespace dpar::tools {

inline constexpr const char* report_schema = "v1";

struct RunReport {
  std::string input;
  std::uint64_t n = 0, m = 0;
  std::string algorithm;
  std::string mode;
  std::map<std::string, double> params;
  int threads = 1;
  std::uint64_t seed = 0;
  double eps = 0;
  double wall_ms = 0;
  std::map<std::string, std::uint64_t> work;
  std::uint64_t work_total = 0;
  double work_ratio = 0;  // work_total / (m + n)
  Verdict verdict;        // recomputed checks plus oracle outcome
  std::map<std::string, CertificateStats> runtime_checks;  // in-algorithm log, for reference only
  nlohmann::json result;  // raw outputs (ids, colors, sides)
};

nlohmann::json to_json(const RunReport& r);
nlohmann::json to_json(const std::vector<RunReport>& runs);
// Canonical dump of the thread-independent part of a run: result, work and checks.
std::string result_fingerprint(const RunReport& r);

// Throws std::runtime_error naming the path on I/O failure.
void write_json(const std::string& path, const std::vector<RunReport>& runs);
void write_csv(const std::string& path, const std::vector<RunReport>& runs);
std::string csv_header();
std::string csv_row(const RunReport& r);

}  // namespace dpar::tools
