#include "dpar_tools/generators.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <unordered_set>
#include <vector>

#include "dpar/errors.hpp"

namespace dpar::tools {

namespace {

std::uint64_t pair_key(node_id a, node_id b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

void check_size(std::uint64_t n) {
  if (n >= no_node) throw InstanceTooLarge("generate_graph: n does not fit a node id");
}

Graph finish(std::vector<Edge> edges, const GraphSpec& spec, std::mt19937_64& rng) {
  if (spec.max_weight > 0) {
    std::uniform_int_distribution<std::uint32_t> wd(1, spec.max_weight);
    for (auto& e : edges) e.w = wd(rng);
  }
  return sort_edges_to_csr(edges, spec.n, spec.max_weight > 0);
}

std::vector<Edge> gnm(const GraphSpec& s, std::mt19937_64& rng) {
  const std::uint64_t n = s.n;
  const std::uint64_t max_m = n < 2 ? 0 : n * (n - 1) / 2;
  if (s.m > max_m) {
    std::ostringstream os;
    os << "gnm: m=" << s.m << " exceeds n(n-1)/2=" << max_m;
    throw ParameterError(os.str());
  }
  std::vector<Edge> edges;
  edges.reserve(s.m);
  if (2 * s.m > max_m) {
    // dense: partial shuffle of all pairs
    std::vector<std::uint64_t> all;
    all.reserve(max_m);
    for (node_id u = 0; u < n; ++u)
      for (node_id v = u + 1; v < n; ++v) all.push_back(pair_key(u, v));
    for (std::uint64_t i = 0; i < s.m; ++i) {
      std::uniform_int_distribution<std::uint64_t> pick(i, max_m - 1);
      std::swap(all[i], all[pick(rng)]);
      edges.push_back({static_cast<node_id>(all[i] >> 32), static_cast<node_id>(all[i] & 0xffffffffu), 1.0});
    }
    return edges;
  }
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(2 * s.m);
  std::uniform_int_distribution<node_id> nd(0, static_cast<node_id>(n - 1));
  while (edges.size() < s.m) {
    node_id u = nd(rng), v = nd(rng);
    if (u == v || !seen.insert(pair_key(u, v)).second) continue;
    edges.push_back({u, v, 1.0});
  }
  return edges;
}

std::vector<Edge> grid(const GraphSpec& s) {
  const std::uint64_t width = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(std::sqrt(double(s.n)))));
  std::vector<Edge> edges;
  for (std::uint64_t v = 0; v < s.n; ++v) {
    if ((v + 1) % width != 0 && v + 1 < s.n) edges.push_back({node_id(v), node_id(v + 1), 1.0});
    if (v + width < s.n) edges.push_back({node_id(v), node_id(v + width), 1.0});
  }
  return edges;
}

std::vector<Edge> powerlaw(const GraphSpec& s, std::mt19937_64& rng) {
  if (s.exponent <= 1) throw ParameterError("powerlaw: exponent must exceed 1");
  const std::uint64_t max_m = s.n < 2 ? 0 : s.n * (s.n - 1) / 2;
  if (s.m > max_m) throw ParameterError("powerlaw: m exceeds n(n-1)/2");
  std::vector<double> w(s.n);
  for (std::uint64_t i = 0; i < s.n; ++i) w[i] = std::pow(double(i + 1), -1.0 / (s.exponent - 1));
  std::discrete_distribution<node_id> pick(w.begin(), w.end());
  std::unordered_set<std::uint64_t> seen;
  std::vector<Edge> edges;
  // Chung-Lu style endpoint sampling; heavy heads can saturate, so give up after a fixed budget.
  const std::uint64_t budget = 64 * s.m + 1024;
  for (std::uint64_t tries = 0; edges.size() < s.m && tries < budget; ++tries) {
    node_id u = pick(rng), v = pick(rng);
    if (u == v || !seen.insert(pair_key(u, v)).second) continue;
    edges.push_back({u, v, 1.0});
  }
  return edges;
}

}  // namespace

std::string GraphSpec::describe() const {
  std::ostringstream os;
  os << kind << ":n=" << n;
  if (kind == "gnm" || kind == "powerlaw") os << ",m=" << m;
  if (kind == "powerlaw") os << ",exp=" << exponent;
  if (max_weight > 0) os << ",w<=" << max_weight;
  os << ",seed=" << seed;
  return os.str();
}

Graph generate_graph(const GraphSpec& spec) {
  check_size(spec.n);
  std::mt19937_64 rng(spec.seed);
  std::vector<Edge> edges;
  if (spec.kind == "gnm") {
    edges = gnm(spec, rng);
  } else if (spec.kind == "grid") {
    edges = grid(spec);
  } else if (spec.kind == "star") {
    for (std::uint64_t v = 1; v < spec.n; ++v) edges.push_back({0, node_id(v), 1.0});
  } else if (spec.kind == "complete") {
    if (spec.n > 20000) throw ParameterError("complete: n too large");
    for (node_id u = 0; u < spec.n; ++u)
      for (node_id v = u + 1; v < spec.n; ++v) edges.push_back({u, v, 1.0});
  } else if (spec.kind == "powerlaw") {
    edges = powerlaw(spec, rng);
  } else {
    throw ParameterError("generate_graph: unknown kind '" + spec.kind + "'");
  }
  return finish(std::move(edges), spec, rng);
}

std::string HittingSpec::describe() const {
  std::ostringstream os;
  os << "hset:nu=" << num_u << ",nv=" << num_v << ",sum=[" << sum_lo << "," << sum_hi << "],levels=[" << min_level
     << "," << max_level << "],seed=" << seed;
  return os.str();
}

BipartiteInstance generate_hitting_instance(const HittingSpec& s, const ParamSet& params) {
  if (s.num_v == 0 || s.sum_lo <= 0 || s.sum_hi < s.sum_lo + 1 || s.min_level < 0 || s.max_level < s.min_level)
    throw ParameterError("generate_hitting_instance: inconsistent spec");
  check_size(s.num_u);
  check_size(s.num_v);
  std::mt19937_64 rng(s.seed);
  std::vector<std::int32_t> level(s.num_v);
  std::uniform_int_distribution<std::int32_t> ld(s.min_level, s.max_level);
  long double total = 0;
  for (auto& k : level) {
    k = ld(rng);
    total += std::ldexp(1.0L, -k);
  }
  if (total < s.sum_hi) throw ParameterError("generate_hitting_instance: V too small for the requested sums");

  std::vector<double> imp(s.num_u);
  std::uniform_real_distribution<double> id(0.5, 2.0);
  std::uniform_real_distribution<double> td(s.sum_lo, s.sum_hi - 1);
  std::uniform_int_distribution<node_id> vd(0, node_id(s.num_v - 1));
  std::vector<BipartiteEdge> edges;
  std::vector<std::uint8_t> used(s.num_v, 0);
  std::vector<node_id> picked;
  for (node_id u = 0; u < s.num_u; ++u) {
    imp[u] = id(rng);
    const double target = td(rng);
    double sum = 0;
    picked.clear();
    // terms are at most 1, so stopping once target <= sum_hi - 1 is reached stays below sum_hi
    while (sum < target) {
      node_id v = vd(rng);
      if (used[v]) {
        if (picked.size() == s.num_v) break;
        continue;
      }
      used[v] = 1;
      picked.push_back(v);
      sum += std::ldexp(1.0, -level[v]);
    }
    for (node_id v : picked) {
      used[v] = 0;
      edges.push_back({u, v});
    }
  }
  const std::uint64_t N = s.N != 0 ? s.N : std::max<std::uint64_t>(2, s.num_u + s.num_v);
  return make_bipartite(s.num_u, s.num_v, std::move(edges), std::move(imp), std::move(level), N, params);
}

}  // namespace dpar::tools
