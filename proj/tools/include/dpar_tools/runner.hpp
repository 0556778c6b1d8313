#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dpar/params.hpp"
#include "dpar_tools/generators.hpp"
#include "dpar_tools/report.hpp"

namespace dpar::tools {

struct Input {
  std::string descriptor;
  std::optional<Graph> graph;
  std::optional<BipartiteInstance> hset;
};

// format: edgelist, csr or hset.
Input load_input(const std::string& path, const std::string& format);

// JSON object of ParamSet overrides; an optional "mode" key picks the base set.
ParamSet load_params(const std::string& path, Mode mode);

struct RunOptions {
  std::string algorithm;  // color, defective, maxcut, mis, luby, matching, hitting-set
  ParamSet params = ParamSet::desk();
  double eps = 0.1;
  std::uint64_t seed = 1;
  int threads = 0;        // 0 keeps the current setting
  bool keep_result = true;
  bool record_runtime_checks = true;
};

const std::vector<std::string>& graph_algorithms();

RunReport run_on_graph(const Graph& g, const std::string& descriptor, const RunOptions& opt);
RunReport run_on_hset(BipartiteInstance h, const std::string& descriptor, const RunOptions& opt);
RunReport run_input(const Input& in, const RunOptions& opt);

// Recomputes the oracle verdict of a serialized run from its raw result.
Verdict reverify(const nlohmann::json& run, const Input& in);

struct BenchConfig {
  std::vector<GraphSpec> graphs;
  std::vector<std::string> algorithms{"mis", "luby", "matching"};
  std::vector<std::string> modes{"desk"};
  std::vector<double> eps{0.1};
  std::uint64_t seed = 1;
  int threads = 0;
  bool parallel_cells = false;
  bool keep_result = false;
};

// {"graphs":[{"kind":"gnm","n":..,"m":..,"seed":..}, ...], "algorithms":[..], "modes":[..],
//  "eps":[..], "seed":.., "threads":.., "parallel_cells":.., "keep_result":..,
//  "scaling":{"kind":"gnm","from":12,"to":18,"m_per_n":8,"seed":1}}
BenchConfig parse_bench_config(const nlohmann::json& j);
BenchConfig load_bench_config(const std::string& path);

// Runs the grid; writes JSON/CSV when the paths are non-empty.
std::vector<RunReport> run_bench(const BenchConfig& cfg, const std::string& json_path = "",
                                 const std::string& csv_path = "");

}  // namespace dpar::tools
