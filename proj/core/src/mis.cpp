#include <algorithm>
#include <random>

#include "dpar/certificates.hpp"
#include "dpar/coloring.hpp"
#include "dpar/errors.hpp"
#include "dpar/matchmis.hpp"
#include "dpar/primitives.hpp"
#include "dpar/work.hpp"

namespace dpar {

std::uint64_t IndependentSet::size() const {
  return static_cast<std::uint64_t>(std::count(in_set.begin(), in_set.end(), 1));
}

namespace {

bool before(const Graph& g, node_id a, node_id b) {
  const auto da = g.degree(a), db = g.degree(b);
  return da != db ? da < db : a < b;
}

}  // namespace

IndependentishResult independentish_set(const Graph& g, const ParamSet& params, std::uint64_t N) {
  const std::size_t n = g.num_nodes();
  IndependentishResult out;
  out.edges = g.num_edges();
  std::vector<std::int32_t> level(n);
  for (std::size_t v = 0; v < n; ++v) {
    const unsigned c = ceil_log2(g.degree(static_cast<node_id>(v)));
    level[v] = c > 5 ? static_cast<std::int32_t>(c - 5) : 0;
    out.marked += level[v] == 0;
  }
  // u -> v iff (deg v, v) > (deg u, u); in-neighbours of u precede it.
  std::vector<std::uint8_t> good_u(n, 0);
  std::vector<node_id> u_nodes;
  for (std::size_t x = 0; x < n; ++x) {
    const node_id u = static_cast<node_id>(x);
    std::uint64_t in = 0;
    for (node_id y : g.neighbors(u)) in += before(g, y, u);
    if (3 * in >= g.degree(u) && g.degree(u) >= 33) {
      good_u[u] = 1;
      u_nodes.push_back(u);
    }
  }
  charge("mis", g.num_slots() + n);
  out.u_nodes = u_nodes.size();

  std::vector<std::uint8_t> s(n, 0);
  if (u_nodes.empty()) {
    for (std::size_t v = 0; v < n; ++v) s[v] = level[v] == 0;
  } else {
    out.used_hitting = true;
    std::vector<BipartiteEdge> hedges;
    std::vector<double> imp(u_nodes.size()), weight(n, 0.0);
    for (std::size_t i = 0; i < u_nodes.size(); ++i) {
      const node_id u = u_nodes[i];
      imp[i] = static_cast<double>(g.degree(u));
      long double sum = 0;
      for (node_id y : g.neighbors(u)) {  // ascending id
        if (!before(g, y, u)) continue;
        hedges.push_back({static_cast<node_id>(i), y});
        weight[y] += imp[i];
        sum += std::ldexp(1.0L, -level[y]);
        if (sum >= 5) break;
      }
      if (sum > 7) ++out.overshoot_drops;  // terms are at most 1, so the prefix ends inside [5, 6)
    }
    std::vector<double> w(g.num_slots());
    for (std::size_t x = 0; x < n; ++x) {
      const node_id v = static_cast<node_id>(x);
      for (edge_index e = g.begin(v); e < g.end(v); ++e) {
        const node_id y = g.neighbor_at(e);
        w[e] = before(g, v, y) ? weight[v] : weight[y];  // weight of the tail
      }
    }
    MisAuxInstance inst;
    inst.core = make_bipartite(u_nodes.size(), n, std::move(hedges), std::move(imp), level, N, params);
    inst.aux = Graph(n, g.offsets(), g.neighbor_array(), std::move(w));
    charge("mis", 2 * g.num_slots() + n);
    const CoreMisResult r = core_mis_hitting(inst);
    s = r.hit.in_s;
  }

  out.outdegree_cap = static_cast<std::uint64_t>(2500 * params.mis_outdegree_c);
  out.in_s.assign(n, 0);
  for (std::size_t x = 0; x < n; ++x) {
    if (!s[x]) continue;
    const node_id v = static_cast<node_id>(x);
    std::uint64_t outs = 0;
    for (node_id y : g.neighbors(v)) outs += s[y] && before(g, v, y);
    if (outs >= out.outdegree_cap) ++out.filtered;
    else out.in_s[v] = 1;
  }
  std::vector<std::uint8_t> covered(n, 0);
  for (std::size_t x = 0; x < n; ++x) {
    if (!out.in_s[x]) continue;
    const node_id v = static_cast<node_id>(x);
    covered[v] = 1;
    std::uint64_t outs = 0;
    for (node_id y : g.neighbors(v)) {
      covered[y] = 1;
      outs += out.in_s[y] && before(g, v, y);
    }
    out.max_outdegree = std::max(out.max_outdegree, outs);
  }
  for (std::size_t v = 0; v < n; ++v)
    if (covered[v]) out.covered_degree += static_cast<double>(g.degree(static_cast<node_id>(v)));
  charge("mis", 2 * g.num_slots() + n);
  require_certificate("independentish.outdegree", static_cast<long double>(out.max_outdegree),
                      static_cast<long double>(out.outdegree_cap) - 1);
  measure_certificate("independentish.coverage", params.mis_degree_fraction * static_cast<double>(out.edges),
                      out.covered_degree);
  return out;
}

namespace {

// Removes chosen nodes and their neighbours from the live graph; returns the new graph and id map.
Subgraph remove_closed_neighborhood(const Graph& g, const std::vector<std::uint8_t>& chosen) {
  std::vector<std::uint8_t> keep(g.num_nodes(), 1);
  for (std::size_t x = 0; x < g.num_nodes(); ++x) {
    if (!chosen[x]) continue;
    keep[x] = 0;
    for (node_id y : g.neighbors(static_cast<node_id>(x))) keep[y] = 0;
  }
  charge("mis", g.num_slots());
  return compact_subgraph(g, keep);
}

}  // namespace

IndependentSet maximal_independent_set(const Graph& g, const ParamSet& params) {
  const std::size_t n0 = g.num_nodes();
  const std::uint64_t N = std::max<std::uint64_t>(2, n0);
  IndependentSet out;
  out.in_set.assign(n0, 0);
  Graph cur = g;
  cur.clear_orientation();
  std::vector<node_id> ids(n0);
  for (std::size_t v = 0; v < n0; ++v) ids[v] = static_cast<node_id>(v);

  while (cur.num_nodes() > 0) {
    const std::size_t n = cur.num_nodes();
    IterationTrace t;
    t.nodes = n;
    t.edges = cur.num_edges();
    std::vector<std::uint8_t> chosen(n, 0);
    for (std::size_t v = 0; v < n; ++v)
      if (cur.degree(static_cast<node_id>(v)) == 0) {
        chosen[v] = 1;
        ++t.isolated_added;
      }
    if (cur.num_edges() > 0) {
      const IndependentishResult r = independentish_set(cur, params, N);
      t.candidate = std::count(r.in_s.begin(), r.in_s.end(), 1);
      // G[S*] oriented by (deg, id) in the current graph.
      Subgraph sub = compact_subgraph(cur, r.in_s);
      Graph& h = sub.graph;
      std::vector<std::uint8_t> out_flags(h.num_slots());
      for (std::size_t x = 0; x < h.num_nodes(); ++x)
        for (edge_index e = h.begin(static_cast<node_id>(x)); e < h.end(static_cast<node_id>(x)); ++e)
          out_flags[e] = before(cur, sub.new_to_old[x], sub.new_to_old[h.neighbor_at(e)]);
      h.set_orientation(std::move(out_flags));
      const Coloring col = color_delta_squared(h);
      t.colors = col.num_colors;

      // Class score: degree mass of S_j plus N(S_j).
      std::vector<std::vector<node_id>> classes;
      {
        std::vector<std::uint32_t> keys(col.color.begin(), col.color.end());
        const std::vector<std::uint32_t> order = stable_order_by_key(keys);
        for (std::size_t i = 0; i < order.size(); ++i) {
          if (i == 0 || col.color[order[i]] != col.color[order[i - 1]]) classes.emplace_back();
          classes.back().push_back(sub.new_to_old[order[i]]);
        }
      }
      std::vector<std::uint32_t> stamp(n, 0);
      std::size_t best = 0;
      double best_score = -1;
      for (std::size_t c = 0; c < classes.size(); ++c) {
        double score = 0;
        const auto mark = static_cast<std::uint32_t>(c + 1);
        for (node_id v : classes[c]) {
          if (stamp[v] != mark) stamp[v] = mark, score += static_cast<double>(cur.degree(v));
          for (node_id y : cur.neighbors(v))
            if (stamp[y] != mark) stamp[y] = mark, score += static_cast<double>(cur.degree(y));
        }
        if (score > best_score) best_score = score, best = c;
      }
      charge("mis", 2 * r.covered_degree + n);
      // Best class first, then the other classes greedily (each class is independent).
      std::vector<std::uint8_t> blocked(n, 0);
      auto take = [&](const std::vector<node_id>& cls) {
        for (node_id v : cls)
          if (!blocked[v]) {
            chosen[v] = 1;
            ++t.chosen;
          }
        for (node_id v : cls)
          if (chosen[v]) {
            blocked[v] = 1;
            for (node_id y : cur.neighbors(v)) blocked[y] = 1;
          }
      };
      if (!classes.empty()) take(classes[best]);
      for (std::size_t c = 0; c < classes.size(); ++c)
        if (c != best) take(classes[c]);
      if (t.chosen == 0) {
        node_id pick = no_node;
        for (std::size_t x = 0; x < n; ++x) {
          const node_id v = static_cast<node_id>(x);
          if (cur.degree(v) > 0 && (pick == no_node || before(cur, v, pick))) pick = v;
        }
        chosen[pick] = 1;
        t.chosen = 1;
        t.progress_guard = true;
      }
    }
    for (std::size_t v = 0; v < n; ++v)
      if (chosen[v]) out.in_set[ids[v]] = 1;
    Subgraph next = remove_closed_neighborhood(cur, chosen);
    t.removed_edges = cur.num_edges() - next.graph.num_edges();
    t.removed_fraction = t.edges > 0 ? static_cast<double>(t.removed_edges) / static_cast<double>(t.edges) : 1.0;
    std::vector<node_id> next_ids(next.new_to_old.size());
    for (std::size_t i = 0; i < next_ids.size(); ++i) next_ids[i] = ids[next.new_to_old[i]];
    ids = std::move(next_ids);
    cur = std::move(next.graph);
    out.trace.push_back(t);
    if (t.progress_guard) measure_certificate("mis.progress_guard", 1, 0);
  }
  const std::string problem = check_independent_set(g, out.in_set);
  require_certificate("mis.oracle", problem.empty() ? 0 : 1, 0);
  return out;
}

IndependentSet luby_mis_baseline(const Graph& g, std::uint64_t seed) {
  const std::size_t n0 = g.num_nodes();
  IndependentSet out;
  out.in_set.assign(n0, 0);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  Graph cur = g;
  cur.clear_orientation();
  std::vector<node_id> ids(n0);
  for (std::size_t v = 0; v < n0; ++v) ids[v] = static_cast<node_id>(v);
  while (cur.num_nodes() > 0) {
    const std::size_t n = cur.num_nodes();
    IterationTrace t;
    t.nodes = n;
    t.edges = cur.num_edges();
    std::vector<std::uint8_t> marked(n, 0), chosen(n, 0);
    for (std::size_t x = 0; x < n; ++x) {
      const auto d = cur.degree(static_cast<node_id>(x));
      if (d == 0) {
        chosen[x] = 1;
        ++t.isolated_added;
      } else {
        marked[x] = coin(rng) < 1.0 / (10.0 * static_cast<double>(d));
      }
    }
    for (std::size_t x = 0; x < n; ++x) {
      if (!marked[x]) continue;
      const node_id v = static_cast<node_id>(x);
      bool ok = true;
      for (node_id y : cur.neighbors(v))
        if (marked[y] && before(cur, v, y)) ok = false;
      if (ok) {
        chosen[v] = 1;
        ++t.chosen;
      }
    }
    charge("luby", cur.num_slots() + n);
    for (std::size_t v = 0; v < n; ++v)
      if (chosen[v]) out.in_set[ids[v]] = 1;
    Subgraph next = remove_closed_neighborhood(cur, chosen);
    t.removed_edges = cur.num_edges() - next.graph.num_edges();
    t.removed_fraction = t.edges > 0 ? static_cast<double>(t.removed_edges) / static_cast<double>(t.edges) : 1.0;
    std::vector<node_id> next_ids(next.new_to_old.size());
    for (std::size_t i = 0; i < next_ids.size(); ++i) next_ids[i] = ids[next.new_to_old[i]];
    ids = std::move(next_ids);
    cur = std::move(next.graph);
    out.trace.push_back(t);
  }
  return out;
}

std::string check_independent_set(const Graph& g, const std::vector<std::uint8_t>& in_set) {
  if (in_set.size() != g.num_nodes()) return "membership vector has the wrong length";
  for (std::size_t x = 0; x < g.num_nodes(); ++x) {
    const node_id v = static_cast<node_id>(x);
    bool dominated = in_set[v] != 0;
    for (node_id y : g.neighbors(v)) {
      if (in_set[v] && in_set[y]) return "edge " + std::to_string(v) + "-" + std::to_string(y) + " inside the set";
      dominated = dominated || in_set[y] != 0;
    }
    if (!dominated) return "node " + std::to_string(v) + " could be added (not maximal)";
  }
  charge("verify", g.num_slots() + g.num_nodes());
  return {};
}

std::string check_maximal_matching(const Graph& g, const std::vector<Edge>& edges) {
  std::vector<std::uint8_t> matched(g.num_nodes(), 0);
  for (const Edge& e : edges) {
    if (e.u >= g.num_nodes() || e.v >= g.num_nodes()) return "matched edge has an endpoint out of range";
    if (g.find_slot(e.u, e.v) == g.num_slots())
      return "matched pair " + std::to_string(e.u) + "-" + std::to_string(e.v) + " is not an edge";
    if (matched[e.u] || matched[e.v]) return "node matched twice at edge " + std::to_string(e.u) + "-" + std::to_string(e.v);
    matched[e.u] = matched[e.v] = 1;
  }
  for (std::size_t x = 0; x < g.num_nodes(); ++x)
    for (node_id y : g.neighbors(static_cast<node_id>(x)))
      if (!matched[x] && !matched[y])
        return "edge " + std::to_string(x) + "-" + std::to_string(y) + " has no matched endpoint (not maximal)";
  charge("verify", g.num_slots() + g.num_nodes());
  return {};
}

}  // namespace dpar
