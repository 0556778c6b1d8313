#include "dpar/rounding.hpp"

#include <string>

#include "dpar/certificates.hpp"
#include "dpar/coloring.hpp"
#include "dpar/errors.hpp"
#include "dpar/parallel.hpp"
#include "dpar/primitives.hpp"
#include "dpar/work.hpp"

namespace dpar {

namespace {

template <class Body>
void for_each_class(const std::vector<std::uint32_t>& color, Body&& body) {
  const std::vector<std::uint32_t> order = stable_order_by_key(color);
  std::size_t start = 0;
  while (start < order.size()) {
    std::size_t stop = start;
    while (stop < order.size() && color[order[stop]] == color[order[start]]) ++stop;
    parallel_for(start, stop, [&](std::size_t i) { body(order[i]); });
    start = stop;
  }
}

}  // namespace

long double rounding_objective(const RoundingInstance& inst, const std::vector<std::uint8_t>& selected) {
  long double obj = 0;
  for (std::size_t v = 0; v < inst.n; ++v)
    if (selected[v]) obj += inst.util[v];
  for (const CostEdge& e : inst.edges)
    if (selected[e.u] && selected[e.v]) obj -= e.cost;
  return obj;
}

RoundingResult local_round(const RoundingInstance& inst) {
  if (!(inst.eps > 0 && inst.eps <= 1)) throw ParameterError("local_round: eps must lie in (0, 1]");
  if (inst.util.size() != inst.n) throw ContractViolation("local_round: utility vector size differs from n");
  std::vector<Edge> weighted;
  weighted.reserve(inst.edges.size());
  RoundingResult out;
  for (const CostEdge& e : inst.edges) {
    if (e.u >= inst.n || e.v >= inst.n) throw ContractViolation("local_round: edge endpoint out of range");
    if (e.u == e.v) throw ContractViolation("local_round: self-loop cost edge");
    if (!(e.cost >= 0)) throw ContractViolation("local_round: negative or NaN cost");
    out.total_cost += e.cost;
    if (e.cost > 0) weighted.push_back({e.u, e.v, e.cost});
  }
  for (double u : inst.util) out.total_util += u;
  charge("rounding", inst.n + inst.edges.size());

  const Graph g = sort_edges_to_csr(weighted, inst.n, true, DuplicatePolicy::sum_weights);
  DefectiveColoring dc = defective_coloring(g, inst.eps);
  out.mono_cost = dc.mono_weight;
  out.num_classes = dc.num_colors;

  // 0 = undecided, 1 = out, 2 = in
  std::vector<std::uint8_t> state(inst.n, 0);
  for_each_class(dc.color, [&](node_id v) {
    long double marginal = inst.util[v];
    for (edge_index s = g.begin(v); s < g.end(v); ++s) {
      const node_id u = g.neighbor_at(s);
      if (dc.color[u] == dc.color[v]) continue;
      const std::uint8_t su = state[u];
      if (su == 2) marginal -= g.weight_at(s);
      else if (su == 0) marginal -= g.weight_at(s) / 2;
    }
    state[v] = marginal >= 0 ? 2 : 1;
  });
  charge("rounding", inst.n + g.num_slots());

  out.selected.resize(inst.n);
  for (std::size_t v = 0; v < inst.n; ++v) out.selected[v] = state[v] == 2 ? 1 : 0;
  out.objective = rounding_objective(inst, out.selected);
  out.bound = out.total_util / 2 - out.total_cost / 4 - static_cast<long double>(inst.eps) * out.total_cost;
  out.color = std::move(dc.color);
  charge("rounding", inst.n + inst.edges.size());
  // objective >= bound, written as (-objective) <= (-bound)
  require_certificate("rounding.local_round", -out.objective, -out.bound);
  return out;
}

CutResult max_cut_half(const Graph& g, double eps) {
  const std::size_t n = g.num_nodes();
  DefectiveColoring dc = defective_coloring(g, eps);
  // 0 = undecided, 1 = side A, 2 = side B
  std::vector<std::uint8_t> state(n, 0);
  for_each_class(dc.color, [&](node_id v) {
    long double to_a = 0, to_b = 0;
    for (edge_index s = g.begin(v); s < g.end(v); ++s) {
      const node_id u = g.neighbor_at(s);
      if (dc.color[u] == dc.color[v]) continue;
      if (state[u] == 1) to_a += g.weight_at(s);
      else if (state[u] == 2) to_b += g.weight_at(s);
    }
    state[v] = to_b >= to_a ? 1 : 2;
  });
  charge("maxcut", n + 2 * g.num_slots());
  CutResult out;
  out.eps = eps;
  out.side.resize(n);
  for (std::size_t v = 0; v < n; ++v) out.side[v] = state[v] == 1 ? 1 : 0;
  out.total_weight = g.total_weight();
  long double cut = 0;
  for (std::size_t v = 0; v < n; ++v)
    for (edge_index s = g.begin(static_cast<node_id>(v)); s < g.end(static_cast<node_id>(v)); ++s) {
      const node_id u = g.neighbor_at(s);
      if (u > v && out.side[u] != out.side[v]) cut += g.weight_at(s);
    }
  out.cut_weight = static_cast<double>(cut);
  require_certificate("maxcut.half", (0.5L - eps) * out.total_weight, cut);
  return out;
}

}  // namespace dpar
