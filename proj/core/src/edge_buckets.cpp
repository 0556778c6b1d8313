#include <algorithm>

#include "dpar/errors.hpp"
#include "dpar/matchmis.hpp"
#include "dpar/primitives.hpp"
#include "dpar/work.hpp"

namespace dpar {

namespace {

Edge normalized(node_id a, node_id b, double w) { return a < b ? Edge{a, b, w} : Edge{b, a, w}; }

}  // namespace

EdgeBucketing edge_buckets(const Graph& g, std::uint64_t b) {
  if (b < 1) throw ParameterError("edge_buckets: b must be positive");
  const std::size_t n = g.num_nodes();
  EdgeBucketing out;
  out.b = b;
  auto close_bucket = [&] { out.offsets.push_back(out.edges.size()); };

  // Step 1: nodes of degree >= b bucket the edges they own.
  std::vector<std::uint8_t> high(n, 0);
  for (std::size_t v = 0; v < n; ++v) high[v] = g.degree(static_cast<node_id>(v)) >= b;
  std::vector<std::uint8_t> done(g.num_slots(), 0);  // slot already bucketed (either direction)
  for (std::size_t x = 0; x < n; ++x) {
    if (!high[x]) continue;
    const node_id v = static_cast<node_id>(x);
    std::vector<edge_index> owned;
    for (edge_index e = g.begin(v); e < g.end(v); ++e) {
      const node_id y = g.neighbor_at(e);
      if (!high[y] || y < v) owned.push_back(e);
    }
    const std::size_t full = owned.size() / b * b;
    for (std::size_t i = 0; i < full; ++i) {
      const edge_index e = owned[i];
      const node_id y = g.neighbor_at(e);
      out.edges.push_back(normalized(v, y, g.weight_at(e)));
      out.special.push_back(y);
      done[e] = 1;
      done[g.find_slot(y, v)] = 1;
      if ((i + 1) % b == 0) close_bucket();
    }
  }
  charge("edge_buckets", g.num_slots() + n);

  std::vector<std::uint64_t> rdeg(n, 0);
  for (std::size_t x = 0; x < n; ++x)
    for (edge_index e = g.begin(static_cast<node_id>(x)); e < g.end(static_cast<node_id>(x)); ++e)
      rdeg[x] += !done[e];

  // A high node can still hold >= b edges that its high neighbours owned but left
  // over. Sweep in id order: such a node buckets full groups of what remains, and
  // later turns only lower earlier nodes' counts.
  std::vector<edge_index> rest;
  for (std::size_t x = 0; x < n; ++x) {
    if (rdeg[x] < b) continue;
    const node_id v = static_cast<node_id>(x);
    rest.clear();
    for (edge_index e = g.begin(v); e < g.end(v); ++e)
      if (!done[e]) rest.push_back(e);
    const std::size_t full = rest.size() / b * b;
    for (std::size_t i = 0; i < full; ++i) {
      const edge_index e = rest[i];
      const node_id y = g.neighbor_at(e);
      out.edges.push_back(normalized(v, y, g.weight_at(e)));
      out.special.push_back(y);
      done[e] = 1;
      done[g.find_slot(y, v)] = 1;
      --rdeg[y];
      if ((i + 1) % b == 0) close_bucket();
    }
    rdeg[x] -= full;
  }
  charge("edge_buckets", g.num_slots() + n);

  // Step 2: every remaining node has remaining degree < b. Each remaining edge is
  // owned by the endpoint with the smaller (remaining degree, id).
  std::vector<std::vector<edge_index>> owned(n);
  for (std::size_t x = 0; x < n; ++x) {
    const node_id v = static_cast<node_id>(x);
    for (edge_index e = g.begin(v); e < g.end(v); ++e) {
      if (done[e]) continue;
      const node_id y = g.neighbor_at(e);
      if (rdeg[v] < rdeg[y] || (rdeg[v] == rdeg[y] && v < y)) owned[x].push_back(e);
    }
  }
  std::vector<std::uint32_t> keys(n);
  for (std::size_t x = 0; x < n; ++x) {
    if (owned[x].size() >= b) throw ContractViolation("edge_buckets: remaining owned degree reached b");
    keys[x] = static_cast<std::uint32_t>(owned[x].size());
  }
  const std::vector<std::uint32_t> order = stable_order_by_key(keys);
  charge("edge_buckets", g.num_slots() + n);

  std::size_t i = 0;
  while (i < n && keys[order[i]] == 0) ++i;
  while (i < n) {
    const std::uint32_t d = keys[order[i]];
    std::size_t j = i;
    while (j < n && keys[order[j]] == d) ++j;
    const std::size_t full = (j - i) / b * b;
    for (std::size_t g0 = i; g0 < i + full; g0 += b) {
      for (std::uint32_t t = 0; t < d; ++t) {
        for (std::size_t k = g0; k < g0 + b; ++k) {
          const node_id v = order[k];
          const edge_index e = owned[v][t];
          out.edges.push_back(normalized(v, g.neighbor_at(e), g.weight_at(e)));
          out.special.push_back(v);
        }
        close_bucket();
      }
    }
    for (std::size_t k = i + full; k < j; ++k) {
      const node_id v = order[k];
      for (edge_index e : owned[v]) out.leftover.push_back(normalized(v, g.neighbor_at(e), g.weight_at(e)));
    }
    i = j;
  }
  return out;
}

}  // namespace dpar
