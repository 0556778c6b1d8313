#include <algorithm>
#include <cmath>

#include "dpar/errors.hpp"
#include "dpar/hitting.hpp"
#include "dpar/primitives.hpp"
#include "dpar/work.hpp"
#include "half_internal.hpp"

namespace dpar {
namespace detail {

NeighborhoodBuckets bucket_neighborhoods(const BipartiteInstance& h, std::uint64_t b, bool by_level) {
  NeighborhoodBuckets nb;
  nb.set.b = b;
  nb.u_first.assign(h.num_u + 1, 0);
  nb.kept.assign(h.num_edges(), 0);
  nb.dropped.assign(h.num_u, 0);
  nb.mass.assign(h.num_u, 0.0);
  const std::size_t m = h.num_edges();

  // Slot order: grouped by u, then by level, then by adjacency position.
  std::vector<std::uint32_t> order(m);
  for (std::size_t e = 0; e < m; ++e) order[e] = static_cast<std::uint32_t>(e);
  if (by_level && m > 0) {
    std::vector<std::uint32_t> keys(m), owner(m);
    for (std::size_t u = 0; u < h.num_u; ++u)
      for (edge_index e = h.offsets[u]; e < h.offsets[u + 1]; ++e) {
        keys[e] = static_cast<std::uint32_t>(h.level[h.adj[e]]);
        owner[e] = static_cast<std::uint32_t>(u);
      }
    auto sorted = radix_sort_small_keys<std::uint32_t>(keys, order, std::max<std::uint64_t>(h.N, 2));
    std::vector<std::uint32_t> owner_sorted(m);
    for (std::size_t i = 0; i < m; ++i) owner_sorted[i] = owner[sorted.payloads[i]];
    const std::vector<std::uint32_t> perm = stable_order_by_key(owner_sorted);
    for (std::size_t i = 0; i < m; ++i) order[i] = sorted.payloads[perm[i]];
  }

  std::vector<node_id> run;
  for (std::size_t u = 0; u < h.num_u; ++u) {
    nb.u_first[u] = nb.set.size();
    edge_index i = h.offsets[u];
    const edge_index end = h.offsets[u + 1];
    while (i < end) {
      const std::int32_t lvl = by_level ? h.level[h.adj[order[i]]] : 0;
      edge_index j = i;
      while (j < end && (!by_level || h.level[h.adj[order[j]]] == lvl)) ++j;
      const std::uint64_t len = j - i;
      const std::uint64_t full = len / b * b;
      const double scale = by_level ? std::ldexp(1.0, -lvl) : 1.0;
      for (std::uint64_t k = 0; k < full; k += b) {
        run.clear();
        for (std::uint64_t t = 0; t < b; ++t) {
          const std::uint32_t slot = order[i + k + t];
          nb.kept[slot] = 1;
          run.push_back(h.adj[slot]);
        }
        nb.set.add(run.data(), run.size(), static_cast<node_id>(u), scale);
        nb.mass[u] += static_cast<double>(b) * scale;
      }
      nb.dropped[u] += len - full;
      i = j;
    }
  }
  nb.u_first[h.num_u] = nb.set.size();
  charge("buckets", m + h.num_u);
  return nb;
}

BucketSet partition_range(std::size_t n, std::uint64_t b) {
  BucketSet set;
  set.b = b;
  std::vector<node_id> run(b);
  for (std::uint64_t start = 0; b > 0 && start + b <= n; start += b) {
    for (std::uint64_t t = 0; t < b; ++t) run[t] = static_cast<node_id>(start + t);
    set.add(run.data(), b);
  }
  charge("buckets", n);
  return set;
}

std::vector<std::uint8_t> good_u_nodes(const NeighborhoodBuckets& nb, std::size_t num_u,
                                       const std::vector<std::uint8_t>& s, double bucket_exp, double node_exp) {
  const double b = static_cast<double>(nb.set.b);
  const double drift = std::pow(b, bucket_exp);
  const double node_frac = std::pow(b, -node_exp);
  std::vector<std::uint8_t> good(num_u, 1);
  for (std::size_t u = 0; u < num_u; ++u) {
    double bad = 0;
    for (std::size_t i = nb.u_first[u]; i < nb.u_first[u + 1]; ++i) {
      const double dev = std::fabs(static_cast<double>(nb.set.selected_in(i, s)) - b / 2);
      if (dev >= drift) bad += b * nb.set.scale[i];
    }
    if (bad > nb.mass[u] * node_frac) good[u] = 0;
  }
  charge("buckets", nb.set.members.size());
  return good;
}

void add_low_potentials(PotentialSystem& sys, const BipartiteInstance& h, const NeighborhoodBuckets& nb,
                        std::uint64_t b) {
  const std::size_t base = sys.sets.size();
  sys.sets.push_back(nb.set);
  sys.sets.push_back(partition_range(h.num_v, b));
  const BucketSet& edges = sys.sets[base];
  const BucketSet& parts = sys.sets[base + 1];

  BucketTerm phi1{"phi1_edges", base, std::vector<double>(edges.size(), 0.0)};
  const double T = static_cast<double>(edges.members.size());
  if (T > 0) std::fill(phi1.coeff.begin(), phi1.coeff.end(), 4.0 / T);

  BucketTerm phi2{"phi2_probability", base, std::vector<double>(edges.size(), 0.0)};
  long double imp_total = 0;
  for (double x : h.imp) imp_total += x;
  if (imp_total > 0) {
    for (std::size_t u = 0; u < h.num_u; ++u) {
      if (nb.mass[u] <= 0 || h.imp[u] == 0) continue;
      const double w = 4.0 * h.imp[u] / (static_cast<double>(imp_total) * nb.mass[u]);
      for (std::size_t i = nb.u_first[u]; i < nb.u_first[u + 1]; ++i) phi2.coeff[i] = w * edges.scale[i];
    }
  }

  BucketTerm phi3{"phi3_size", base + 1, std::vector<double>(parts.size(), 0.0)};
  if (parts.size() > 0)
    std::fill(phi3.coeff.begin(), phi3.coeff.end(), 4.0 / static_cast<double>(parts.members.size()));

  sys.bucket_terms.push_back(std::move(phi1));
  sys.bucket_terms.push_back(std::move(phi2));
  sys.bucket_terms.push_back(std::move(phi3));
}

PotentialReport make_report(const PotentialSystem& sys, const PotentialOutcome& out) {
  PotentialReport r;
  r.names = sys.term_names();
  r.values = out.values;
  r.expectations = sys.term_expectations();
  r.total = out.total;
  r.bound = sys.bound;
  r.eps = out.eps;
  return r;
}

void measure_low_guarantees(const BipartiteInstance& h, const NeighborhoodBuckets& nb, HalfSampleResult& r,
                            const std::string& prefix) {
  const ParamSet& p = h.params;
  const double gamma = r.gamma;
  std::uint64_t e2 = 0, s_count = 0;
  for (std::size_t v = 0; v < h.num_v; ++v) s_count += r.in_s[v];
  long double imp_total = 0, imp_good = 0;
  std::uint64_t violations = 0;
  for (std::size_t u = 0; u < h.num_u; ++u) {
    imp_total += h.imp[u];
    if (!r.u_good[u]) continue;
    imp_good += h.imp[u];
    long double before = 0, after = 0;
    for (edge_index e = h.offsets[u]; e < h.offsets[u + 1]; ++e) {
      const node_id v = h.adj[e];
      const long double pv = std::ldexp(1.0L, -h.level[v]);
      before += pv;
      if (nb.kept[e] && r.in_s[v]) {
        ++e2;
        after += pv;
      }
    }
    if (std::fabs(static_cast<double>(after - before / 2)) > gamma * static_cast<double>(before) / 2 + gamma + 1e-12)
      ++violations;
  }
  r.shrink_value = static_cast<double>(e2 + s_count);
  r.shrink_bound = 2.0 / 3.0 * static_cast<double>(h.num_edges() + h.num_v) + additive_cap(p, h.N);
  r.importance_good = static_cast<double>(imp_good);
  r.importance_total = static_cast<double>(imp_total);
  r.max_dropped = nb.dropped.empty() ? 0 : *std::max_element(nb.dropped.begin(), nb.dropped.end());
  r.prob_violations = violations;
  charge("verify", h.num_edges() + h.num_u + h.num_v);

  guarantee(p, prefix + ".shrinkage", r.shrink_value, r.shrink_bound);
  guarantee(p, prefix + ".importance", (1 - gamma) * imp_total, imp_good);
  guarantee(p, prefix + ".dropped", static_cast<long double>(r.max_dropped),
            gamma * std::ldexp(1.0L, static_cast<int>(threshold_k(p, h.N))));
  guarantee(p, prefix + ".window", static_cast<long double>(violations), 0);
}

}  // namespace detail

namespace {

void check_gamma(const ParamSet& p, double gamma, const char* who) {
  if (!(gamma > 0 && gamma < 1)) throw ParameterError(std::string(who) + ": gamma must lie in (0, 1)");
  if (p.mode == Mode::paper && !(gamma < 0.01))
    throw ParameterError(std::string(who) + ": gamma must be below 0.01 in paper mode");
}

struct LowBuild {
  HalfSystem hs;
  detail::NeighborhoodBuckets nb;
};

LowBuild build_low(const BipartiteInstance& h, double gamma) {
  const ParamSet& p = h.params;
  check_gamma(p, gamma, "low_prob_half");
  const std::uint32_t K = threshold_k(p, h.N);
  const std::uint32_t L = log_n(h.N);
  for (std::size_t v = 0; v < h.num_v; ++v)
    if (h.level[v] <= static_cast<std::int32_t>(K) || h.level[v] > static_cast<std::int32_t>(L))
      throw ContractViolation("low_prob_half: level " + std::to_string(h.level[v]) + " of v" + std::to_string(v) +
                              " outside [K+1, ceil(log N)]");
  LowBuild out;
  out.hs.b = low_bucket_size(p, gamma, K, h.N);
  out.nb = detail::bucket_neighborhoods(h, out.hs.b, true);
  out.hs.kept = out.nb.kept;
  PotentialSystem& sys = out.hs.sys;
  sys.name = "low_half";
  sys.n = h.num_v;
  detail::add_low_potentials(sys, h, out.nb, out.hs.b);
  sys.bound = 3.1;
  sys.nominal_expectation = 3.0;
  return out;
}

struct HighBuild {
  HalfSystem hs;
  detail::NeighborhoodBuckets nb;
  double imp_total = 0;
};

HighBuild build_high(const BipartiteInstance& h, double gamma) {
  const ParamSet& p = h.params;
  check_gamma(p, gamma, "high_prob_half");
  HighBuild out;
  out.hs.b = high_bucket_size(p, gamma);
  out.nb = detail::bucket_neighborhoods(h, out.hs.b, false);
  out.hs.kept = out.nb.kept;
  PotentialSystem& sys = out.hs.sys;
  sys.name = "high_half";
  sys.n = h.num_v;
  sys.sets.push_back(out.nb.set);
  BucketTerm phi{"phi_importance", 0, std::vector<double>(out.nb.set.size(), 0.0)};
  long double imp_total = 0;
  for (std::size_t u = 0; u < h.num_u; ++u) {
    imp_total += h.imp[u];
    if (out.nb.mass[u] <= 0) continue;
    const double c = h.imp[u] / out.nb.mass[u];
    for (std::size_t i = out.nb.u_first[u]; i < out.nb.u_first[u + 1]; ++i) phi.coeff[i] = c;
  }
  sys.bucket_terms.push_back(std::move(phi));
  out.imp_total = static_cast<double>(imp_total);
  sys.nominal_expectation = out.imp_total / 4;
  sys.bound = out.imp_total / 2;
  return out;
}

}  // namespace

HalfSystem build_low_half_system(const BipartiteInstance& h, double gamma) { return build_low(h, gamma).hs; }

HalfSystem build_high_half_system(const BipartiteInstance& h, double gamma) { return build_high(h, gamma).hs; }

HalfSampleResult low_prob_half(const BipartiteInstance& h, double gamma) {
  LowBuild lb = build_low(h, gamma);
  const PotentialOutcome out = round_potential(lb.hs.sys);
  HalfSampleResult r;
  r.gamma = gamma;
  r.b = lb.hs.b;
  r.in_s = out.s;
  r.kept = lb.nb.kept;
  r.u_good = detail::good_u_nodes(lb.nb, h.num_u, r.in_s, h.params.bad_bucket_exp, h.params.bad_node_exp_hitting);
  r.potential = detail::make_report(lb.hs.sys, out);
  detail::measure_low_guarantees(h, lb.nb, r, "low_half");
  return r;
}

HalfSampleResult high_prob_half(const BipartiteInstance& h, double gamma) {
  HighBuild hb = build_high(h, gamma);
  const PotentialOutcome out = round_potential(hb.hs.sys);
  HalfSampleResult r;
  r.gamma = gamma;
  r.b = hb.hs.b;
  r.in_s = out.s;
  r.kept = hb.nb.kept;
  r.u_good = detail::good_u_nodes(hb.nb, h.num_u, r.in_s, h.params.bad_bucket_exp, h.params.bad_node_exp_hitting);
  r.potential = detail::make_report(hb.hs.sys, out);

  const ParamSet& p = h.params;
  const double slack = std::pow(1.0 / gamma, p.beta + 1);
  long double imp_good = 0;
  std::uint64_t violations = 0;
  for (std::size_t u = 0; u < h.num_u; ++u) {
    if (!r.u_good[u]) continue;
    imp_good += h.imp[u];
    std::uint64_t hits = 0;
    for (edge_index e = h.offsets[u]; e < h.offsets[u + 1]; ++e) hits += r.in_s[h.adj[e]];
    const double d = static_cast<double>(h.degree(static_cast<node_id>(u)));
    if (std::fabs(static_cast<double>(hits) - d / 2) > gamma * d / 2 + slack) ++violations;
  }
  r.importance_good = static_cast<double>(imp_good);
  r.importance_total = hb.imp_total;
  r.prob_violations = violations;
  charge("verify", h.num_edges() + h.num_u);
  detail::guarantee(p, "high_half.importance", (1 - gamma) * hb.imp_total, imp_good);
  detail::guarantee(p, "high_half.window", static_cast<long double>(violations), 0);
  return r;
}

}  // namespace dpar
