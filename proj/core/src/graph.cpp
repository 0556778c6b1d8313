#include "dpar/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dpar/errors.hpp"
#include "dpar/parallel.hpp"
#include "dpar/primitives.hpp"
#include "dpar/work.hpp"

namespace dpar {

Graph::Graph(std::size_t n, std::vector<edge_index> offsets, std::vector<node_id> neighbors,
             std::vector<double> weights)
    : offsets_(std::move(offsets)), neighbors_(std::move(neighbors)), weights_(std::move(weights)) {
  if (offsets_.size() != n + 1) throw MalformedInput("Graph: offsets must have n+1 entries");
  if (offsets_.front() != 0 || offsets_.back() != neighbors_.size())
    throw MalformedInput("Graph: offsets do not span the neighbor array");
  if (!weights_.empty() && weights_.size() != neighbors_.size())
    throw MalformedInput("Graph: weight array length differs from neighbor array");
}

double Graph::total_weight() const {
  if (weights_.empty()) return static_cast<double>(num_edges());
  const long double twice = parallel_sum(weights_.size(), [&](std::size_t i) { return weights_[i]; });
  return static_cast<double>(twice / 2);
}

std::uint64_t Graph::max_degree() const {
  std::uint64_t best = 0;
  for (std::size_t v = 0; v < num_nodes(); ++v) best = std::max(best, degree(static_cast<node_id>(v)));
  return best;
}

std::uint64_t Graph::out_degree(node_id v) const {
  if (out_.empty()) return degree(v);
  std::uint64_t c = 0;
  for (edge_index s = offsets_[v]; s < offsets_[v + 1]; ++s) c += out_[s];
  return c;
}

std::uint64_t Graph::max_out_degree() const {
  std::uint64_t best = 0;
  for (std::size_t v = 0; v < num_nodes(); ++v) best = std::max(best, out_degree(static_cast<node_id>(v)));
  return best;
}

void Graph::set_orientation(std::vector<std::uint8_t> out_flags) {
  if (out_flags.size() != neighbors_.size())
    throw ContractViolation("set_orientation: flag array length differs from neighbor array");
  out_ = std::move(out_flags);
}

edge_index Graph::find_slot(node_id u, node_id v) const {
  auto first = neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[u]);
  auto last = neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[u + 1]);
  auto it = std::lower_bound(first, last, v);
  if (it == last || *it != v) return neighbors_.size();
  return static_cast<edge_index>(it - neighbors_.begin());
}

void Graph::validate() const {
  const std::size_t n = num_nodes();
  for (std::size_t v = 0; v < n; ++v) {
    if (offsets_[v] > offsets_[v + 1]) throw MalformedInput("Graph: offsets not monotone at " + std::to_string(v));
    for (edge_index s = offsets_[v]; s < offsets_[v + 1]; ++s) {
      const node_id u = neighbors_[s];
      if (u >= n) throw MalformedInput("Graph: neighbor id out of range at node " + std::to_string(v));
      if (u == v) throw MalformedInput("Graph: self-loop at node " + std::to_string(v));
      if (s > offsets_[v] && neighbors_[s - 1] >= u)
        throw MalformedInput("Graph: neighbor list of " + std::to_string(v) + " not strictly sorted");
      const edge_index back = find_slot(u, static_cast<node_id>(v));
      if (back == neighbors_.size())
        throw MalformedInput("Graph: missing reverse edge " + std::to_string(u) + "-" + std::to_string(v));
      if (!weights_.empty() && !(weights_[s] >= 0 && std::isfinite(weights_[s])))
        throw MalformedInput("Graph: negative or non-finite weight on edge " + std::to_string(v) + "-" +
                             std::to_string(u));
      if (!weights_.empty() && weights_[back] != weights_[s])
        throw MalformedInput("Graph: asymmetric weight on edge " + std::to_string(v) + "-" + std::to_string(u));
      if (!out_.empty() && (out_[s] != 0) == (out_[back] != 0))
        throw MalformedInput("Graph: orientation flags inconsistent on edge " + std::to_string(v) + "-" +
                             std::to_string(u));
    }
  }
}

Graph sort_edges_to_csr(std::span<const Edge> edges, std::size_t n, bool weighted, DuplicatePolicy policy) {
  if (n > static_cast<std::size_t>(no_node)) throw InstanceTooLarge("sort_edges_to_csr: too many nodes");
  std::vector<std::uint32_t> lo, hi;
  std::vector<double> w;
  lo.reserve(edges.size());
  hi.reserve(edges.size());
  if (weighted) w.reserve(edges.size());
  for (const Edge& e : edges) {
    if (e.u >= n || e.v >= n)
      throw MalformedInput("sort_edges_to_csr: endpoint outside [0," + std::to_string(n) + ")");
    if (e.u == e.v) throw MalformedInput("sort_edges_to_csr: self-loop at node " + std::to_string(e.u));
    lo.push_back(std::min(e.u, e.v));
    hi.push_back(std::max(e.u, e.v));
    if (weighted) w.push_back(e.w);
  }
  charge("csr", edges.size());
  const std::size_t k = lo.size();

  // LSD: by hi, then stable by lo.
  std::vector<std::uint32_t> order = stable_order_by_key(hi);
  std::vector<std::uint32_t> lo_perm(k);
  for (std::size_t i = 0; i < k; ++i) lo_perm[i] = lo[order[i]];
  const std::vector<std::uint32_t> order2 = stable_order_by_key(lo_perm);
  for (std::size_t i = 0; i < k; ++i) lo_perm[i] = order[order2[i]];
  order.swap(lo_perm);

  std::vector<std::uint32_t> ua, ub;
  std::vector<double> uw;
  ua.reserve(k);
  ub.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    const std::uint32_t idx = order[i];
    if (!ua.empty() && ua.back() == lo[idx] && ub.back() == hi[idx]) {
      if (weighted && policy == DuplicatePolicy::sum_weights) uw.back() += w[idx];
      continue;
    }
    ua.push_back(lo[idx]);
    ub.push_back(hi[idx]);
    if (weighted) uw.push_back(w[idx]);
  }
  charge("csr", k);

  std::vector<std::uint64_t> counts(n, 0);
  for (std::size_t i = 0; i < ua.size(); ++i) {
    ++counts[ua[i]];
    ++counts[ub[i]];
  }
  std::vector<edge_index> offsets = offsets_from_counts(counts);
  std::vector<node_id> nbrs(offsets.back());
  std::vector<double> weights(weighted ? offsets.back() : 0);
  std::vector<edge_index> cursor(offsets.begin(), offsets.end() - 1);
  for (std::size_t i = 0; i < ua.size(); ++i) {
    const edge_index sa = cursor[ua[i]]++;
    const edge_index sb = cursor[ub[i]]++;
    nbrs[sa] = ub[i];
    nbrs[sb] = ua[i];
    if (weighted) weights[sa] = weights[sb] = uw[i];
  }
  charge("csr", 2 * ua.size());
  return Graph(n, std::move(offsets), std::move(nbrs), std::move(weights));
}

Subgraph compact_subgraph(const Graph& g, std::span<const std::uint8_t> keep_node,
                          std::span<const std::uint8_t> keep_slot) {
  const std::size_t n = g.num_nodes();
  if (keep_node.size() != n) throw ContractViolation("compact_subgraph: node mask length differs from n");
  if (!keep_slot.empty() && keep_slot.size() != g.num_slots())
    throw ContractViolation("compact_subgraph: slot mask length differs from adjacency size");

  Subgraph out;
  out.old_to_new.assign(n, no_node);
  std::vector<std::uint64_t> rank_counts(n);
  for (std::size_t v = 0; v < n; ++v) rank_counts[v] = keep_node[v] ? 1 : 0;
  const std::vector<std::uint64_t> rank = offsets_from_counts(rank_counts);
  const std::size_t n2 = rank.back();
  out.new_to_old.resize(n2);
  for (std::size_t v = 0; v < n; ++v) {
    if (keep_node[v]) {
      out.old_to_new[v] = static_cast<node_id>(rank[v]);
      out.new_to_old[rank[v]] = static_cast<node_id>(v);
    }
  }

  auto kept = [&](node_id v, edge_index s) {
    return keep_node[g.neighbor_at(s)] && (keep_slot.empty() || keep_slot[s]) && keep_node[v];
  };
  if (!keep_slot.empty()) {
    for (std::size_t v = 0; v < n; ++v) {
      if (!keep_node[v]) continue;
      for (edge_index s = g.begin(static_cast<node_id>(v)); s < g.end(static_cast<node_id>(v)); ++s) {
        const node_id u = g.neighbor_at(s);
        if (!keep_node[u]) continue;
        const edge_index back = g.find_slot(u, static_cast<node_id>(v));
        if ((keep_slot[s] != 0) != (keep_slot[back] != 0))
          throw ContractViolation("compact_subgraph: slot mask not symmetric on edge " + std::to_string(v) + "-" +
                                  std::to_string(u));
      }
    }
  }

  std::vector<std::uint64_t> deg(n2, 0);
  parallel_for(0, n2, [&](std::size_t i) {
    const node_id v = out.new_to_old[i];
    std::uint64_t c = 0;
    for (edge_index s = g.begin(v); s < g.end(v); ++s) c += kept(v, s) ? 1 : 0;
    deg[i] = c;
  });
  std::vector<edge_index> offsets = offsets_from_counts(deg);
  std::vector<node_id> nbrs(offsets.back());
  std::vector<double> weights(g.weighted() ? offsets.back() : 0);
  std::vector<std::uint8_t> orient(g.oriented() ? offsets.back() : 0);
  parallel_for(0, n2, [&](std::size_t i) {
    const node_id v = out.new_to_old[i];
    edge_index pos = offsets[i];
    for (edge_index s = g.begin(v); s < g.end(v); ++s) {
      if (!kept(v, s)) continue;
      nbrs[pos] = out.old_to_new[g.neighbor_at(s)];
      if (g.weighted()) weights[pos] = g.weight_at(s);
      if (g.oriented()) orient[pos] = g.is_out(s) ? 1 : 0;
      ++pos;
    }
  });
  std::uint64_t touched = 0;
  for (std::size_t i = 0; i < n2; ++i) touched += g.degree(out.new_to_old[i]);
  charge("compact", n + 2 * touched);
  out.graph = Graph(n2, std::move(offsets), std::move(nbrs), std::move(weights));
  if (!orient.empty()) out.graph.set_orientation(std::move(orient));
  return out;
}

std::vector<std::uint8_t> orientation_by_degree(const Graph& g) {
  std::vector<std::uint8_t> out(g.num_slots());
  parallel_for(0, g.num_nodes(), [&](std::size_t vi) {
    const auto v = static_cast<node_id>(vi);
    const std::uint64_t dv = g.degree(v);
    for (edge_index s = g.begin(v); s < g.end(v); ++s) {
      const node_id u = g.neighbor_at(s);
      const std::uint64_t du = g.degree(u);
      out[s] = (du > dv || (du == dv && u > v)) ? 1 : 0;
    }
  });
  charge("orient", g.num_slots());
  return out;
}

std::vector<Edge> edge_list(const Graph& g) {
  std::vector<Edge> out;
  out.reserve(g.num_edges());
  for (std::size_t v = 0; v < g.num_nodes(); ++v) {
    for (edge_index s = g.begin(static_cast<node_id>(v)); s < g.end(static_cast<node_id>(v)); ++s) {
      const node_id u = g.neighbor_at(s);
      if (u > v) out.push_back({static_cast<node_id>(v), u, g.weight_at(s)});
    }
  }
  return out;
}

}  // namespace dpar
