#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "dpar/errors.hpp"
#include "dpar/parallel.hpp"
#include "dpar_tools/runner.hpp"

using namespace dpar;
using namespace dpar::tools;

namespace {

void print_summary(const std::vector<RunReport>& runs) {
  for (const auto& r : runs) {
    std::cout << (r.verdict.pass ? "ok   " : "FAIL ") << r.algorithm << " [" << r.mode << "] " << r.input
              << " n=" << r.n << " m=" << r.m << " work/(m+n)=" << r.work_ratio << " wall=" << r.wall_ms << "ms";
    for (const auto& [k, v] : r.verdict.metrics) std::cout << ' ' << k << '=' << v;
    if (!r.verdict.pass) std::cout << "  (" << r.verdict.message << ')';
    std::cout << '\n';
  }
}

bool all_pass(const std::vector<RunReport>& runs) {
  for (const auto& r : runs)
    if (!r.verdict.pass) return false;
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic parallel MIS, matching and rounding toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string input, format = "edgelist", params_path, mode_name = "desk", report_path, csv_path;
  int threads = 0;
  std::uint64_t seed = 1;
  app.add_option("--input", input, "input file");
  app.add_option("--format", format, "input format")->check(CLI::IsMember({"edgelist", "csr", "hset"}));
  app.add_option("--params", params_path, "JSON file of parameter overrides");
  app.add_option("--mode", mode_name, "parameter set")->check(CLI::IsMember({"paper", "desk"}));
  app.add_option("--threads", threads, "worker threads (0 keeps the OpenMP default)");
  app.add_option("--seed", seed, "seed for the randomized baseline");
  app.add_option("--report", report_path, "write the JSON report here");
  app.add_option("--csv", csv_path, "write a CSV summary here");

  double eps = 0.1;
  bool luby = false;
  std::string config_path;
  GraphSpec gen;
  std::string gen_out, gen_format = "edgelist";
  HittingSpec hs;
  bool gen_hset = false;

  auto* color = app.add_subcommand("color", "proper coloring with O(delta^2) colors");
  auto* defective = app.add_subcommand("defective", "defective coloring with 3 ceil(1/eps) colors");
  defective->add_option("--eps", eps, "defect fraction")->check(CLI::Range(1e-6, 1.0));
  auto* maxcut = app.add_subcommand("maxcut", "cut of weight at least (1/2 - eps) of the total");
  maxcut->add_option("--eps", eps, "loss fraction")->check(CLI::Range(1e-6, 0.5));
  auto* hitting = app.add_subcommand("hitting-set", "deterministic hitting set on an HSET1 instance");
  auto* matching = app.add_subcommand("matching", "deterministic maximal matching");
  auto* mis = app.add_subcommand("mis", "deterministic maximal independent set");
  mis->add_flag("--luby", luby, "run the randomized Luby baseline instead");
  auto* bench = app.add_subcommand("bench", "run a benchmark grid from a JSON config");
  bench->add_option("--config", config_path, "bench config (JSON)")->required();
  auto* generate = app.add_subcommand("generate", "write a generated graph or hitting instance");
  generate->add_option("--kind", gen.kind, "gnm, grid, star, complete, powerlaw or hset");
  generate->add_option("-n", gen.n, "nodes");
  generate->add_option("-m", gen.m, "edges (gnm, powerlaw)");
  generate->add_option("--max-weight", gen.max_weight, "random integer weights in [1, w]");
  generate->add_option("--nu", hs.num_u, "hset: U nodes");
  generate->add_option("--nv", hs.num_v, "hset: V nodes");
  generate->add_option("--max-level", hs.max_level, "hset: largest level");
  generate->add_option("--out", gen_out, "output path")->required();
  generate->add_option("--out-format", gen_format, "edgelist or csr")->check(CLI::IsMember({"edgelist", "csr"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (threads > 0) set_num_threads(threads);
    const Mode mode = parse_mode(mode_name);
    const ParamSet params = params_path.empty() ? ParamSet::for_mode(mode) : load_params(params_path, mode);

    if (generate->parsed()) {
      gen.seed = seed;
      hs.seed = seed;
      gen_hset = gen.kind == "hset";
      if (gen_hset) {
        std::ofstream out(gen_out);
        if (!out) throw std::runtime_error("cannot write '" + gen_out + "'");
        write_hset(out, generate_hitting_instance(hs, params));
      } else {
        Graph g = generate_graph(gen);
        if (gen_format == "csr") {
          write_csr_binary_file(gen_out, g);
        } else {
          std::ofstream out(gen_out);
          if (!out) throw std::runtime_error("cannot write '" + gen_out + "'");
          write_edge_list(out, g);
        }
      }
      return 0;
    }

    std::vector<RunReport> runs;
    if (bench->parsed()) {
      BenchConfig cfg = load_bench_config(config_path);
      if (threads > 0) cfg.threads = threads;
      runs = run_bench(cfg, report_path, csv_path);
    } else {
      if (input.empty()) throw ParameterError("--input is required");
      RunOptions opt;
      opt.params = params;
      opt.eps = eps;
      opt.seed = seed;
      opt.threads = threads;
      if (color->parsed()) opt.algorithm = "color";
      if (defective->parsed()) opt.algorithm = "defective";
      if (maxcut->parsed()) opt.algorithm = "maxcut";
      if (hitting->parsed()) opt.algorithm = "hitting-set";
      if (matching->parsed()) opt.algorithm = "matching";
      if (mis->parsed()) opt.algorithm = luby ? "luby" : "mis";
      const bool wants_hset = opt.algorithm == "hitting-set";
      if (wants_hset != (format == "hset"))
        throw ParameterError(wants_hset ? "hitting-set needs --format hset" : "--format hset only fits hitting-set");
      runs.push_back(run_input(load_input(input, format), opt));
      if (!report_path.empty()) write_json(report_path, runs);
      if (!csv_path.empty()) write_csv(csv_path, runs);
    }
    print_summary(runs);
    return all_pass(runs) ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
