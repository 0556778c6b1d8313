#include "dpar_tools/runner.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <stdexcept>

#include "dpar/coloring.hpp"
#include "dpar/errors.hpp"
#include "dpar/matchmis.hpp"
#include "dpar/parallel.hpp"
#include "dpar/rounding.hpp"
#include "dpar/work.hpp"

namespace dpar::tools {

namespace {

template <class T>
nlohmann::json ids_of(const std::vector<T>& mask) {
  nlohmann::json out = nlohmann::json::array();
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) out.push_back(i);
  return out;
}

std::vector<std::uint8_t> mask_of(const nlohmann::json& ids, std::size_t n) {
  std::vector<std::uint8_t> mask(n, 0);
  for (const auto& x : ids) {
    const auto i = x.get<std::uint64_t>();
    if (i >= n) throw MalformedInput("serialized id out of range");
    mask[i] = 1;
  }
  return mask;
}

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void fill_common(RunReport& r, const std::string& descriptor, const RunOptions& opt) {
  r.input = descriptor;
  r.algorithm = opt.algorithm;
  r.mode = opt.params.mode_name();
  r.params = opt.params.to_map();
  r.threads = num_threads();
  r.seed = opt.algorithm == "luby" ? opt.seed : 0;
  r.eps = (opt.algorithm == "defective" || opt.algorithm == "maxcut") ? opt.eps : 0;
}

void fill_work(RunReport& r, const WorkCounter& wc) {
  for (const auto& [k, v] : wc.phases()) r.work[k] = v;
  r.work_total = wc.total();
  r.work_ratio = double(r.work_total) / double(std::max<std::uint64_t>(1, r.n + r.m));
}

struct ThreadOverride {
  explicit ThreadOverride(int t) : previous(num_threads()) {
    if (t > 0) set_num_threads(t);
  }
  ~ThreadOverride() { set_num_threads(previous); }
  int previous;
};

}  // namespace

Input load_input(const std::string& path, const std::string& format) {
  Input in;
  in.descriptor = format + ":" + path;
  if (format == "edgelist") {
    in.graph = read_edge_list_file(path);
  } else if (format == "csr") {
    in.graph = read_csr_binary_file(path);
  } else if (format == "hset") {
    in.hset = read_hset_file(path);
  } else {
    throw ParameterError("unknown input format '" + format + "'");
  }
  return in;
}

ParamSet load_params(const std::string& path, Mode mode) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open params file '" + path + "'");
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::exception& e) {
    throw MalformedInput("params file '" + path + "': " + e.what());
  }
  if (!j.is_object()) throw MalformedInput("params file '" + path + "' must hold a JSON object");
  if (j.contains("mode")) mode = parse_mode(j["mode"].get<std::string>());
  ParamSet p = ParamSet::for_mode(mode);
  for (const auto& [key, value] : j.items()) {
    if (key == "mode") continue;
    if (!value.is_number()) throw MalformedInput("params file '" + path + "': '" + key + "' is not a number");
    p.set(key, value.get<double>());
  }
  return p;
}

const std::vector<std::string>& graph_algorithms() {
  static const std::vector<std::string> names{"color", "defective", "maxcut", "mis", "luby", "matching"};
  return names;
}

RunReport run_on_graph(const Graph& g, const std::string& descriptor, const RunOptions& opt) {
  ThreadOverride threads(opt.threads);
  RunReport r;
  fill_common(r, descriptor, opt);
  r.n = g.num_nodes();
  r.m = g.num_edges();
  if (opt.record_runtime_checks) CertificateLog::global().reset();
  WorkCounter wc;
  Stopwatch sw;
  const std::string& a = opt.algorithm;
  nlohmann::json result;
  {
    WorkScope scope(wc);
    if (a == "color") {
      Coloring c = color_delta_squared(g);
      r.verdict = verify_coloring(g, c);
      result = {{"color", c.color}};
    } else if (a == "defective") {
      DefectiveColoring c = defective_coloring(g, opt.eps);
      r.verdict = verify_defective(g, c, opt.eps);
      result = {{"color", c.color}};
    } else if (a == "maxcut") {
      CutResult c = max_cut_half(g, opt.eps);
      r.verdict = verify_cut(g, c.side, opt.eps);
      result = {{"side", ids_of(c.side)}};
    } else if (a == "mis" || a == "luby") {
      IndependentSet s = a == "mis" ? maximal_independent_set(g, opt.params) : luby_mis_baseline(g, opt.seed);
      r.wall_ms = sw.ms();
      WorkCounter vc;
      WorkScope vscope(vc);  // verification work is not billed to the algorithm
      r.verdict = verify_output(g, s);
      result = {{"in_set", ids_of(s.in_set)}};
    } else if (a == "matching") {
      Matching mm = maximal_matching(g, opt.params);
      r.wall_ms = sw.ms();
      WorkCounter vc;
      WorkScope vscope(vc);
      r.verdict = verify_output(g, mm);
      nlohmann::json edges = nlohmann::json::array();
      for (const auto& e : mm.edges) edges.push_back({std::min(e.u, e.v), std::max(e.u, e.v)});
      result = {{"edges", edges}};
    } else {
      throw ParameterError("unknown graph algorithm '" + a + "'");
    }
  }
  if (r.wall_ms == 0) r.wall_ms = sw.ms();
  fill_work(r, wc);
  if (opt.record_runtime_checks) r.runtime_checks = CertificateLog::global().snapshot();
  if (opt.keep_result) r.result = std::move(result);
  return r;
}

RunReport run_on_hset(BipartiteInstance h, const std::string& descriptor, const RunOptions& opt) {
  if (opt.algorithm != "hitting-set") throw ParameterError("hset inputs only support hitting-set");
  ThreadOverride threads(opt.threads);
  h.params = opt.params;
  RunReport r;
  fill_common(r, descriptor, opt);
  r.n = h.num_u + h.num_v;
  r.m = h.num_edges();
  if (opt.record_runtime_checks) CertificateLog::global().reset();
  WorkCounter wc;
  Stopwatch sw;
  HittingResult res;
  {
    WorkScope scope(wc);
    res = hitting_set(h);
  }
  r.wall_ms = sw.ms();
  fill_work(r, wc);
  r.verdict = verify_output(h, res);
  r.verdict.metrics["K"] = res.K;
  r.verdict.metrics["low_v"] = double(res.low_v);
  r.verdict.metrics["low_rounds"] = double(res.low_rounds.size());
  r.verdict.metrics["high_rounds"] = double(res.high_rounds.size());
  if (opt.record_runtime_checks) r.runtime_checks = CertificateLog::global().snapshot();
  if (opt.keep_result) r.result = {{"S", ids_of(res.in_s)}, {"U_good", ids_of(res.u_good)}};
  return r;
}

RunReport run_input(const Input& in, const RunOptions& opt) {
  if (in.hset) return run_on_hset(*in.hset, in.descriptor, opt);
  if (in.graph) return run_on_graph(*in.graph, in.descriptor, opt);
  throw ParameterError("empty input");
}

Verdict reverify(const nlohmann::json& run, const Input& in) {
  const std::string a = run.at("algorithm").get<std::string>();
  const nlohmann::json& res = run.at("result");
  if (a == "hitting-set") {
    if (!in.hset) throw ParameterError("hitting-set run needs an hset input");
    BipartiteInstance h = *in.hset;
    h.params = ParamSet::for_mode(parse_mode(run.at("mode").get<std::string>()));
    for (const auto& [k, v] : run.at("params").items()) h.params.set(k, v.get<double>());
    HittingResult hr;
    hr.in_s = mask_of(res.at("S"), h.num_v);
    hr.u_good = mask_of(res.at("U_good"), h.num_u);
    return verify_output(h, hr);
  }
  if (!in.graph) throw ParameterError(a + " run needs a graph input");
  const Graph& g = *in.graph;
  const double eps = run.value("eps", 0.1);
  if (a == "mis" || a == "luby") {
    IndependentSet s;
    s.in_set = mask_of(res.at("in_set"), g.num_nodes());
    return verify_output(g, s);
  }
  if (a == "matching") {
    Matching mm;
    for (const auto& e : res.at("edges")) mm.edges.push_back({e.at(0).get<node_id>(), e.at(1).get<node_id>(), 1.0});
    return verify_output(g, mm);
  }
  if (a == "color" || a == "defective") {
    const auto colors = res.at("color").get<std::vector<std::uint32_t>>();
    if (a == "color") {
      Coloring c;
      c.color = colors;
      return verify_coloring(g, c);
    }
    DefectiveColoring c;
    c.color = colors;
    return verify_defective(g, c, eps);
  }
  if (a == "maxcut") return verify_cut(g, mask_of(res.at("side"), g.num_nodes()), eps);
  throw ParameterError("unknown algorithm '" + a + "' in report");
}

BenchConfig parse_bench_config(const nlohmann::json& j) {
  BenchConfig cfg;
  try {
    if (j.contains("graphs")) {
      for (const auto& gj : j.at("graphs")) {
        GraphSpec s;
        s.kind = gj.value("kind", s.kind);
        s.n = gj.at("n").get<std::uint64_t>();
        s.m = gj.value("m", std::uint64_t{0});
        s.seed = gj.value("seed", s.seed);
        s.exponent = gj.value("exponent", s.exponent);
        s.max_weight = gj.value("max_weight", s.max_weight);
        cfg.graphs.push_back(s);
      }
    }
    if (j.contains("scaling")) {
      const auto& sj = j.at("scaling");
      const int from = sj.at("from").get<int>(), to = sj.at("to").get<int>();
      if (from < 1 || to > 30 || from > to) throw ParameterError("scaling: need 1 <= from <= to <= 30");
      for (int e = from; e <= to; ++e) {
        GraphSpec s;
        s.kind = sj.value("kind", std::string("gnm"));
        s.n = std::uint64_t{1} << e;
        s.m = static_cast<std::uint64_t>(sj.value("m_per_n", 8.0) * double(s.n));
        s.seed = sj.value("seed", std::uint64_t{1});
        cfg.graphs.push_back(s);
      }
    }
    if (j.contains("algorithms")) cfg.algorithms = j.at("algorithms").get<std::vector<std::string>>();
    if (j.contains("modes")) cfg.modes = j.at("modes").get<std::vector<std::string>>();
    if (j.contains("eps")) cfg.eps = j.at("eps").get<std::vector<double>>();
    cfg.seed = j.value("seed", cfg.seed);
    cfg.threads = j.value("threads", cfg.threads);
    cfg.parallel_cells = j.value("parallel_cells", cfg.parallel_cells);
    cfg.keep_result = j.value("keep_result", cfg.keep_result);
  } catch (const nlohmann::json::exception& e) {
    throw MalformedInput(std::string("bench config: ") + e.what());
  }
  for (const auto& a : cfg.algorithms) {
    const auto& known = graph_algorithms();
    if (std::find(known.begin(), known.end(), a) == known.end())
      throw ParameterError("bench config: unknown algorithm '" + a + "'");
  }
  for (const auto& m : cfg.modes) parse_mode(m);
  return cfg;
}

BenchConfig load_bench_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open bench config '" + path + "'");
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::exception& e) {
    throw MalformedInput("bench config '" + path + "': " + e.what());
  }
  return parse_bench_config(j);
}

std::vector<RunReport> run_bench(const BenchConfig& cfg, const std::string& json_path, const std::string& csv_path) {
  struct Cell {
    std::size_t graph;
    std::string algorithm;
    std::string mode;
    double eps;
  };
  std::vector<Cell> cells;
  for (std::size_t gi = 0; gi < cfg.graphs.size(); ++gi)
    for (const auto& a : cfg.algorithms) {
      const bool uses_eps = a == "defective" || a == "maxcut";
      const bool uses_mode = a == "mis" || a == "matching";
      const std::vector<double> eps_list = uses_eps ? cfg.eps : std::vector<double>{0.1};
      const std::vector<std::string> modes = uses_mode ? cfg.modes : std::vector<std::string>{cfg.modes.empty() ? "desk" : cfg.modes.front()};
      for (const auto& m : modes)
        for (double e : eps_list) cells.push_back({gi, a, m, e});
    }

  std::vector<RunReport> reports(cells.size());
  std::vector<Graph> graphs(cfg.graphs.size());
  for (std::size_t gi = 0; gi < cfg.graphs.size(); ++gi) graphs[gi] = generate_graph(cfg.graphs[gi]);

  auto run_cell = [&](std::size_t i, bool parallel) {
    const Cell& c = cells[i];
    RunOptions opt;
    opt.algorithm = c.algorithm;
    opt.params = ParamSet::for_mode(parse_mode(c.mode));
    opt.eps = c.eps;
    opt.seed = cfg.seed;
    opt.threads = parallel ? 0 : cfg.threads;  // nested regions already run serially
    opt.keep_result = cfg.keep_result;
    opt.record_runtime_checks = !parallel;  // the runtime log is process-wide
    reports[i] = run_on_graph(graphs[c.graph], cfg.graphs[c.graph].describe(), opt);
  };

  if (cfg.parallel_cells) {
    std::string first_error;
#pragma omp parallel for schedule(dynamic, 1)
    for (std::size_t i = 0; i < cells.size(); ++i) {
      try {
        run_cell(i, true);
      } catch (const std::exception& e) {
#pragma omp critical
        if (first_error.empty()) first_error = e.what();
      }
    }
    if (!first_error.empty()) throw std::runtime_error(first_error);
  } else {
    for (std::size_t i = 0; i < cells.size(); ++i) run_cell(i, false);
  }

  if (!json_path.empty()) write_json(json_path, reports);
  if (!csv_path.empty()) write_csv(csv_path, reports);
  return reports;
}

}  // namespace dpar::tools
