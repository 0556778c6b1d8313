#include "dpar_tools/verify.hpp"

#include <cmath>

namespace dpar::tools {

void Verdict::check(std::string name, double value, std::string sense, double bound, bool proof_backed) {
  CertificateCheck c;
  c.name = std::move(name);
  c.sense = std::move(sense);
  c.value = value;
  c.bound = bound;
  c.slack = c.sense == "<=" ? bound - value : value - bound;
  c.pass = c.slack >= 0;
  c.proof_backed = proof_backed;
  if (!c.pass) fail(c.name + " violated: " + std::to_string(value) + " " + c.sense + " " + std::to_string(bound));
  checks.push_back(std::move(c));
}

void Verdict::fail(const std::string& why) {
  pass = false;
  if (!message.empty()) message += "; ";
  message += why;
}

Verdict verify_output(const Graph& g, const IndependentSet& result) {
  Verdict v;
  if (result.in_set.size() != g.num_nodes()) {
    v.fail("indicator length mismatch");
    return v;
  }
  if (auto err = check_independent_set(g, result.in_set); !err.empty()) v.fail(err);
  std::uint64_t size = 0;
  for (auto x : result.in_set) size += x != 0;
  v.metrics["size"] = double(size);
  v.metrics["iterations"] = double(result.trace.size());
  std::uint64_t guards = 0;
  for (const auto& t : result.trace) guards += t.progress_guard;
  v.metrics["progress_guards"] = double(guards);
  return v;
}

Verdict verify_output(const Graph& g, const Matching& result) {
  Verdict v;
  if (auto err = check_maximal_matching(g, result.edges); !err.empty()) v.fail(err);
  v.metrics["size"] = double(result.edges.size());
  v.metrics["iterations"] = double(result.trace.size());
  std::uint64_t guards = 0;
  for (const auto& t : result.trace) guards += t.progress_guard;
  v.metrics["progress_guards"] = double(guards);
  return v;
}

Verdict verify_output(const BipartiteInstance& h, const HittingResult& result, double c_limit) {
  Verdict v;
  if (result.in_s.size() != h.num_v || result.u_good.size() != h.num_u) {
    v.fail("result length mismatch");
    return v;
  }
  const double target = h.params.importance_target;
  HittingVerdict hv = verify_hitting(h, result.in_s, result.u_good, target, c_limit);
  const bool desk = h.params.mode == Mode::desk;
  v.check("hitting.importance_fraction", hv.importance_fraction, ">=", target, !desk);
  v.check("hitting.measured_c", hv.measured_c, "<=", c_limit, false);
  v.check("hitting.lower_violations", double(hv.lower_violations), "<=", 0, !desk);
  v.metrics["importance_fraction"] = hv.importance_fraction;
  v.metrics["measured_c"] = hv.measured_c;
  v.metrics["upper_violations"] = double(hv.upper_violations);
  std::uint64_t s = 0, good = 0;
  for (auto x : result.in_s) s += x != 0;
  for (auto x : result.u_good) good += x != 0;
  v.metrics["selected"] = double(s);
  v.metrics["u_good"] = double(good);
  return v;
}

Verdict verify_coloring(const Graph& g, const Coloring& c) {
  Verdict v;
  if (c.color.size() != g.num_nodes()) {
    v.fail("coloring length mismatch");
    return v;
  }
  if (!is_proper_coloring(g, c.color)) v.fail("coloring is not proper");
  std::uint64_t palette = 0;
  for (auto x : c.color) palette = std::max<std::uint64_t>(palette, std::uint64_t(x) + 1);
  v.check("color.palette", double(palette), "<=", double(proper_palette_bound(g.oriented() ? g.max_out_degree() : g.max_degree())));
  v.metrics["palette"] = double(palette);
  v.metrics["rounds"] = c.rounds;
  return v;
}

Verdict verify_defective(const Graph& g, const DefectiveColoring& c, double eps) {
  Verdict v;
  if (c.color.size() != g.num_nodes()) {
    v.fail("coloring length mismatch");
    return v;
  }
  long double mono = 0, total = 0;
  std::uint64_t palette = 0;
  for (node_id u = 0; u < g.num_nodes(); ++u) {
    palette = std::max<std::uint64_t>(palette, std::uint64_t(c.color[u]) + 1);
    for (edge_index s = g.begin(u); s < g.end(u); ++s) {
      const node_id w = g.neighbor_at(s);
      if (w <= u) continue;
      total += g.weight_at(s);
      if (c.color[u] == c.color[w]) mono += g.weight_at(s);
    }
  }
  v.check("defective.mono_weight", double(mono), "<=", double(eps * total));
  v.check("defective.palette", double(palette), "<=", double(3 * ceil_inverse(eps)));
  v.metrics["mono_weight"] = double(mono);
  v.metrics["total_weight"] = double(total);
  v.metrics["palette"] = double(palette);
  return v;
}

Verdict verify_cut(const Graph& g, const std::vector<std::uint8_t>& side, double eps) {
  Verdict v;
  if (side.size() != g.num_nodes()) {
    v.fail("cut length mismatch");
    return v;
  }
  long double cut = 0, total = 0;
  for (node_id u = 0; u < g.num_nodes(); ++u) {
    for (edge_index s = g.begin(u); s < g.end(u); ++s) {
      const node_id w = g.neighbor_at(s);
      if (w <= u) continue;
      total += g.weight_at(s);
      if (side[u] != side[w]) cut += g.weight_at(s);
    }
  }
  v.check("maxcut.cut_weight", double(cut), ">=", double((0.5L - eps) * total));
  v.metrics["cut_weight"] = double(cut);
  v.metrics["total_weight"] = double(total);
  return v;
}

}  // namespace dpar::tools
