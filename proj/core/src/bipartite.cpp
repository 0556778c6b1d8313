#include <algorithm>
#include <cmath>
#include <sstream>

#include "dpar/errors.hpp"
#include "dpar/hitting.hpp"
#include "dpar/parallel.hpp"
#include "dpar/primitives.hpp"
#include "dpar/work.hpp"

namespace dpar {

long double BipartiteInstance::prob_sum(node_id u, const std::vector<std::uint8_t>* mask) const {
  long double s = 0;
  for (edge_index e = offsets[u]; e < offsets[u + 1]; ++e) {
    const node_id v = adj[e];
    if (mask == nullptr || (*mask)[v]) s += std::ldexp(1.0L, -level[v]);
  }
  return s;
}

void BipartiteInstance::validate() const {
  if (offsets.size() != num_u + 1 || offsets.front() != 0 || offsets.back() != adj.size())
    throw MalformedInput("bipartite instance: offsets inconsistent with U count");
  if (imp.size() != num_u) throw MalformedInput("bipartite instance: importance vector size differs from U count");
  if (!level.empty() && level.size() != num_v)
    throw MalformedInput("bipartite instance: level vector size differs from V count");
  const std::int32_t max_level = static_cast<std::int32_t>(log_n(N));
  for (std::size_t u = 0; u < num_u; ++u) {
    if (!(imp[u] >= 0)) throw MalformedInput("bipartite instance: negative importance at u=" + std::to_string(u));
    for (edge_index e = offsets[u]; e < offsets[u + 1]; ++e) {
      if (adj[e] >= num_v) throw MalformedInput("bipartite instance: V id out of range at u=" + std::to_string(u));
      if (e > offsets[u] && adj[e - 1] >= adj[e])
        throw MalformedInput("bipartite instance: adjacency of u=" + std::to_string(u) + " not strictly sorted");
    }
  }
  for (std::size_t v = 0; v < level.size(); ++v)
    if (level[v] < 0 || level[v] > max_level)
      throw MalformedInput("bipartite instance: level of v=" + std::to_string(v) + " outside [0, ceil(log N)]");
}

BipartiteInstance make_bipartite(std::size_t num_u, std::size_t num_v, std::vector<BipartiteEdge> edges,
                                 std::vector<double> imp, std::vector<std::int32_t> level, std::uint64_t N,
                                 ParamSet params) {
  BipartiteInstance h;
  h.num_u = num_u;
  h.num_v = num_v;
  h.imp = std::move(imp);
  h.level = std::move(level);
  h.N = N;
  h.params = params;
  for (const auto& e : edges)
    if (e.u >= num_u || e.v >= num_v) throw MalformedInput("make_bipartite: endpoint out of range");
  std::sort(edges.begin(), edges.end(),
            [](const BipartiteEdge& a, const BipartiteEdge& b) { return a.u != b.u ? a.u < b.u : a.v < b.v; });
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [](const BipartiteEdge& a, const BipartiteEdge& b) { return a.u == b.u && a.v == b.v; }),
              edges.end());
  std::vector<std::uint64_t> counts(num_u, 0);
  for (const auto& e : edges) ++counts[e.u];
  h.offsets = offsets_from_counts(counts);
  h.adj.resize(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) h.adj[i] = edges[i].v;
  h.validate();
  return h;
}

SubInstance induced_subinstance(const BipartiteInstance& h, const std::vector<std::uint8_t>& keep_u,
                                const std::vector<std::uint8_t>& keep_v, const std::vector<std::uint8_t>* keep_edge) {
  SubInstance out;
  std::vector<node_id> v_map(h.num_v, no_node);
  for (std::size_t v = 0; v < h.num_v; ++v)
    if (keep_v[v]) {
      v_map[v] = static_cast<node_id>(out.v_ids.size());
      out.v_ids.push_back(static_cast<node_id>(v));
    }
  for (std::size_t u = 0; u < h.num_u; ++u)
    if (keep_u[u]) out.u_ids.push_back(static_cast<node_id>(u));
  BipartiteInstance& s = out.inst;
  s.num_u = out.u_ids.size();
  s.num_v = out.v_ids.size();
  s.N = h.N;
  s.params = h.params;
  s.imp.resize(s.num_u);
  std::vector<std::uint64_t> counts(s.num_u, 0);
  std::uint64_t touched = 0;
  parallel_for(0, s.num_u, [&](std::size_t i) {
    const node_id u = out.u_ids[i];
    s.imp[i] = h.imp[u];
    std::uint64_t c = 0;
    for (edge_index e = h.offsets[u]; e < h.offsets[u + 1]; ++e)
      if (v_map[h.adj[e]] != no_node && (keep_edge == nullptr || (*keep_edge)[e])) ++c;
    counts[i] = c;
  });
  for (node_id u : out.u_ids) touched += h.degree(u);
  s.offsets = offsets_from_counts(counts);
  s.adj.resize(s.offsets.back());
  parallel_for(0, s.num_u, [&](std::size_t i) {
    const node_id u = out.u_ids[i];
    edge_index pos = s.offsets[i];
    for (edge_index e = h.offsets[u]; e < h.offsets[u + 1]; ++e)
      if (v_map[h.adj[e]] != no_node && (keep_edge == nullptr || (*keep_edge)[e])) s.adj[pos++] = v_map[h.adj[e]];
  });
  if (!h.level.empty()) {
    s.level.resize(s.num_v);
    for (std::size_t i = 0; i < s.num_v; ++i) s.level[i] = h.level[out.v_ids[i]];
  }
  charge("hitting", h.num_u + h.num_v + 2 * touched);
  return out;
}

HittingVerdict verify_hitting(const BipartiteInstance& h, const std::vector<std::uint8_t>& in_s,
                              const std::vector<std::uint8_t>& u_good, double importance_target, double c_limit,
                              double lo_scale, double lo_add) {
  HittingVerdict out;
  if (in_s.size() != h.num_v || u_good.size() != h.num_u) {
    out.message = "result sizes do not match the instance";
    return out;
  }
  long double good = 0, total = 0;
  for (std::size_t u = 0; u < h.num_u; ++u) {
    total += h.imp[u];
    if (!u_good[u]) continue;
    good += h.imp[u];
    const long double sum = h.prob_sum(static_cast<node_id>(u));
    std::uint64_t hits = 0;
    for (edge_index e = h.offsets[u]; e < h.offsets[u + 1]; ++e) hits += in_s[h.adj[e]];
    const long double hd = static_cast<long double>(hits);
    out.measured_c = std::max(out.measured_c, static_cast<double>(hd / (sum + 1)));
    if (hd < lo_scale * sum - lo_add) ++out.lower_violations;
    if (hd > c_limit * sum + c_limit) ++out.upper_violations;
  }
  out.importance_fraction = total > 0 ? static_cast<double>(good / total) : 1.0;
  out.pass = out.lower_violations == 0 && out.upper_violations == 0 && out.importance_fraction >= importance_target;
  std::ostringstream os;
  os << "importance " << out.importance_fraction << " (target " << importance_target << "), measured C "
     << out.measured_c << ", lower violations " << out.lower_violations << ", upper violations "
     << out.upper_violations;
  out.message = os.str();
  return out;
}

}  // namespace dpar
