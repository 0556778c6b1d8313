#pragma once

#include <map>
#include <string>
#include <vector>

#include "dpar/coloring.hpp"
#include "dpar/hitting.hpp"
#include "dpar/matchmis.hpp"
#include "dpar/rounding.hpp"

namespace dpar::tools {

// One inequality recomputed from raw outputs. sense is "<=" or ">=";
// slack is signed so that negative means violated.
struct CertificateCheck {
  std::string name;
  std::string sense = "<=";
  double value = 0;
  double bound = 0;
  double slack = 0;
  bool pass = true;
  bool proof_backed = true;  // false: empirical target, not a theorem at these constants
};

struct Verdict {
  bool pass = true;
  std::string message;
  std::map<std::string, double> metrics;
  std::vector<CertificateCheck> checks;

  // Records a check; a failing proof-backed check or oracle fails the verdict.
  void check(std::string name, double value, std::string sense, double bound, bool proof_backed = true);
  void fail(const std::string& why);
};

Verdict verify_output(const Graph& g, const IndependentSet& result);
Verdict verify_output(const Graph& g, const Matching& result);
// c_limit bounds the measured constant C; measured checks fail the verdict too.
Verdict verify_output(const BipartiteInstance& h, const HittingResult& result, double c_limit = 1e3);

Verdict verify_coloring(const Graph& g, const Coloring& c);
Verdict verify_defective(const Graph& g, const DefectiveColoring& c, double eps);
Verdict verify_cut(const Graph& g, const std::vector<std::uint8_t>& side, double eps);

}  // namespace dpar::tools
