#include "dpar_tools/report.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace dpar::tools {

namespace {

nlohmann::json checks_json(const std::vector<CertificateCheck>& checks) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& c : checks) {
    out.push_back({{"name", c.name},
                   {"sense", c.sense},
                   {"value", c.value},
                   {"bound", c.bound},
                   {"slack", c.slack},
                   {"pass", c.pass},
                   {"proof_backed", c.proof_backed}});
  }
  return out;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

nlohmann::json to_json(const RunReport& r) {
  nlohmann::json runtime = nlohmann::json::object();
  for (const auto& [name, st] : r.runtime_checks) {
    runtime[name] = {{"calls", st.calls},
                     {"failures", st.failures},
                     {"min_slack", st.min_slack},
                     {"proof_backed", st.proof_backed}};
  }
  return {{"schema", report_schema},
          {"input", {{"descriptor", r.input}, {"n", r.n}, {"m", r.m}}},
          {"algorithm", r.algorithm},
          {"mode", r.mode},
          {"params", r.params},
          {"threads", r.threads},
          {"seed", r.seed},
          {"eps", r.eps},
          {"wall_ms", r.wall_ms},
          {"work", {{"phases", r.work}, {"total", r.work_total}, {"per_size", r.work_ratio}}},
          {"certificates", checks_json(r.verdict.checks)},
          {"runtime_checks", runtime},
          {"oracle", {{"pass", r.verdict.pass}, {"message", r.verdict.message}}},
          {"metrics", r.verdict.metrics},
          {"result", r.result}};
}

nlohmann::json to_json(const std::vector<RunReport>& runs) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : runs) arr.push_back(to_json(r));
  return {{"schema", report_schema}, {"runs", arr}};
}

std::string result_fingerprint(const RunReport& r) {
  nlohmann::json j = {{"result", r.result},
                      {"work", r.work},
                      {"certificates", checks_json(r.verdict.checks)},
                      {"metrics", r.verdict.metrics},
                      {"pass", r.verdict.pass}};
  return j.dump();
}

void write_json(const std::string& path, const std::vector<RunReport>& runs) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open report file '" + path + "' for writing");
  out << to_json(runs).dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

std::string csv_header() {
  return "schema,input,n,m,algorithm,mode,threads,seed,eps,wall_ms,work_total,work_per_size,oracle_pass,"
         "failed_checks,min_slack,metrics";
}

std::string csv_row(const RunReport& r) {
  std::ostringstream os;
  os << std::setprecision(10);
  std::uint64_t failed = 0;
  double min_slack = 0;
  bool first = true;
  for (const auto& c : r.verdict.checks) {
    failed += !c.pass;
    if (first || c.slack < min_slack) min_slack = c.slack;
    first = false;
  }
  std::string metrics;
  for (const auto& [k, v] : r.verdict.metrics) {
    std::ostringstream m;
    m << std::setprecision(10) << k << '=' << v;
    if (!metrics.empty()) metrics += ';';
    metrics += m.str();
  }
  os << report_schema << ',' << csv_escape(r.input) << ',' << r.n << ',' << r.m << ',' << r.algorithm << ','
     << r.mode << ',' << r.threads << ',' << r.seed << ',' << r.eps << ',' << r.wall_ms << ',' << r.work_total
     << ',' << r.work_ratio << ',' << (r.verdict.pass ? 1 : 0) << ',' << failed << ',' << min_slack << ','
     << csv_escape(metrics);
  return os.str();
}

void write_csv(const std::string& path, const std::vector<RunReport>& runs) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open csv file '" + path + "' for writing");
  out << csv_header() << '\n';
  for (const auto& r : runs) out << csv_row(r) << '\n';
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace dpar::tools
