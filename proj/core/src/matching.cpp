#include <algorithm>

#include "dpar/certificates.hpp"
#include "dpar/coloring.hpp"
#include "dpar/errors.hpp"
#include "dpar/matchmis.hpp"
#include "dpar/primitives.hpp"
#include "dpar/work.hpp"

namespace dpar {

namespace {

// Category index c for rounded degree d = 2^c.
std::uint32_t category(std::uint64_t deg) { return ceil_log2(deg); }

}  // namespace

Matching maximal_matching(const Graph& g, const ParamSet& params) {
  const std::size_t n = g.num_nodes();
  const std::uint64_t N = std::max<std::uint64_t>(2, n);
  Matching out;
  out.mate.assign(n, no_node);

  // Per-node adjacency that is rebuilt lazily when a node downgrades.
  std::vector<std::vector<node_id>> adj(n);
  for (std::size_t v = 0; v < n; ++v) {
    auto nb = g.neighbors(static_cast<node_id>(v));
    adj[v].assign(nb.begin(), nb.end());
  }
  auto matched = [&](node_id v) { return out.mate[v] != no_node; };

  std::uint32_t top = 0;
  std::vector<std::vector<node_id>> cat;
  {
    std::vector<std::uint32_t> keys;
    std::vector<node_id> nodes;
    for (std::size_t v = 0; v < n; ++v)
      if (!adj[v].empty()) {
        keys.push_back(category(adj[v].size()) + 1);
        nodes.push_back(static_cast<node_id>(v));
      }
    const std::uint64_t key_range = std::uint64_t{1} << std::min<std::uint32_t>(63, category(n) + 2);
    auto sorted = radix_sort_small_keys<node_id>(keys, nodes, key_range);
    for (std::size_t i = 0; i < sorted.keys.size(); ++i) {
      const std::uint32_t c = sorted.keys[i] - 1;
      if (cat.size() <= c) cat.resize(c + 1);
      cat[c].push_back(sorted.payloads[i]);
      top = std::max(top, c);
    }
  }

  for (std::int64_t c = static_cast<std::int64_t>(cat.size()) - 1; c >= 0; --c) {
    const std::uint64_t d = std::uint64_t{1} << c;
    for (;;) {
      // Cleanup: drop matched nodes, downgrade nodes whose live degree fell below d/3.
      std::vector<node_id> stay, down;
      std::vector<std::uint32_t> down_keys;
      for (node_id v : cat[c]) {
        if (matched(v)) continue;
        std::uint64_t live = 0;
        for (node_id y : adj[v]) live += !matched(y);
        charge("matching", adj[v].size());
        if (3 * live >= d && live > 0) {
          stay.push_back(v);
          continue;
        }
        std::vector<node_id> kept;
        for (node_id y : adj[v])
          if (!matched(y)) kept.push_back(y);
        adj[v] = std::move(kept);
        if (!adj[v].empty()) {
          down.push_back(v);
          down_keys.push_back(category(adj[v].size()) + 1);
        }
      }
      if (!down.empty()) {
        auto sorted = radix_sort_small_keys<node_id>(down_keys, down, std::uint64_t{1} << (c + 1));
        for (std::size_t i = 0; i < sorted.keys.size(); ++i) cat[sorted.keys[i] - 1].push_back(sorted.payloads[i]);
      }
      cat[c] = std::move(stay);
      if (cat[c].empty()) break;

      // E_d: live edges incident on the category, each listed once.
      std::vector<std::uint8_t> in_cat(n, 0);
      for (node_id v : cat[c]) in_cat[v] = 1;
      std::vector<Edge> ed;
      for (node_id v : cat[c])
        for (node_id y : adj[v])
          if (!matched(y) && (!in_cat[y] || v < y)) ed.push_back({std::min(v, y), std::max(v, y), 1.0});
      std::sort(ed.begin(), ed.end(), [](const Edge& a, const Edge& b) { return a.u != b.u ? a.u < b.u : a.v < b.v; });
      charge("matching", ed.size() + cat[c].size());

      IterationTrace t;
      t.nodes = cat[c].size();
      t.edges = ed.size();

      // Hitting instance: V = edges of E_d, U = their endpoints.
      std::vector<node_id> u_of(n, no_node), u_ids;
      for (const Edge& e : ed)
        for (node_id x : {e.u, e.v})
          if (u_of[x] == no_node) {
            u_of[x] = static_cast<node_id>(u_ids.size());
            u_ids.push_back(x);
          }
      std::vector<BipartiteEdge> hedges;
      std::vector<double> imp(u_ids.size(), 0.0);
      for (std::size_t i = 0; i < ed.size(); ++i)
        for (node_id x : {ed[i].u, ed[i].v}) {
          hedges.push_back({u_of[x], static_cast<node_id>(i)});
          imp[u_of[x]] += 1;
        }
      const std::int32_t k = c > 4 ? static_cast<std::int32_t>(c - 4) : 0;
      BipartiteInstance h = make_bipartite(u_ids.size(), ed.size(), std::move(hedges), std::move(imp),
                                           std::vector<std::int32_t>(ed.size(), k), N, params);
      const HittingResult hr = hitting_set(h);

      std::vector<Edge> sel;
      for (std::size_t i = 0; i < ed.size(); ++i)
        if (hr.in_s[i]) sel.push_back(ed[i]);
      t.candidate = sel.size();

      // Conflict graph on the selected edges, coloured with its measured degree.
      std::vector<std::vector<node_id>> at(u_ids.size());
      for (std::size_t i = 0; i < sel.size(); ++i) {
        at[u_of[sel[i].u]].push_back(static_cast<node_id>(i));
        at[u_of[sel[i].v]].push_back(static_cast<node_id>(i));
      }
      std::vector<Edge> conflicts;
      for (const auto& list : at)
        for (std::size_t a = 0; a < list.size(); ++a)
          for (std::size_t b = a + 1; b < list.size(); ++b) conflicts.push_back({list[a], list[b], 1.0});
      charge("matching", conflicts.size() + sel.size());
      Graph cg = sort_edges_to_csr(conflicts, sel.size());
      cg.set_orientation(orientation_by_degree(cg));
      const Coloring col = color_delta_squared(cg);
      t.colors = col.num_colors;

      std::vector<std::vector<node_id>> classes;
      {
        std::vector<std::uint32_t> keys(col.color.begin(), col.color.end());
        const std::vector<std::uint32_t> order = stable_order_by_key(keys);
        for (std::size_t i = 0; i < order.size(); ++i) {
          if (i == 0 || col.color[order[i]] != col.color[order[i - 1]]) classes.emplace_back();
          classes.back().push_back(order[i]);
        }
      }
      // Score of a class: E_d edges with an endpoint covered by the class.
      std::size_t best = 0;
      std::uint64_t best_score = 0;
      {
        std::vector<std::uint64_t> inc(u_ids.size(), 0);
        for (const Edge& e : ed) ++inc[u_of[e.u]], ++inc[u_of[e.v]];
        for (std::size_t ci = 0; ci < classes.size(); ++ci) {
          std::uint64_t score = 0;
          for (node_id i : classes[ci]) score += inc[u_of[sel[i].u]] + inc[u_of[sel[i].v]] - 1;
          if (ci == 0 || score > best_score) best_score = score, best = ci;
        }
      }
      // Best class first, then the other classes greedily.
      auto take = [&](const std::vector<node_id>& cls) {
        for (node_id i : cls) {
          const Edge& e = sel[i];
          if (matched(e.u) || matched(e.v)) continue;
          out.mate[e.u] = e.v;
          out.mate[e.v] = e.u;
          out.edges.push_back(e);
          ++t.chosen;
        }
      };
      if (!classes.empty()) take(classes[best]);
      for (std::size_t ci = 0; ci < classes.size(); ++ci)
        if (ci != best) take(classes[ci]);
      if (t.chosen == 0) {
        const Edge& e = ed.front();
        out.mate[e.u] = e.v;
        out.mate[e.v] = e.u;
        out.edges.push_back(e);
        t.chosen = 1;
        t.progress_guard = true;
        measure_certificate("matching.progress_guard", 1, 0);
      }
      for (const Edge& e : ed) t.removed_edges += matched(e.u) || matched(e.v);
      t.removed_fraction = t.edges > 0 ? static_cast<double>(t.removed_edges) / static_cast<double>(t.edges) : 1.0;
      charge("matching", ed.size());
      out.trace.push_back(t);
    }
  }
  const std::string problem = check_maximal_matching(g, out.edges);
  require_certificate("matching.oracle", problem.empty() ? 0 : 1, 0);
  return out;
}

}  // namespace dpar
