#include <algorithm>
#include <cmath>

#include "dpar/errors.hpp"
#include "dpar/hitting.hpp"
#include "dpar/loss.hpp"
#include "dpar/work.hpp"
#include "half_internal.hpp"

namespace dpar {

namespace {

std::vector<std::uint8_t> all_ones(std::size_t n) { return std::vector<std::uint8_t>(n, 1); }

double max_prob_sum(const BipartiteInstance& h) {
  long double best = 0;
  for (std::size_t u = 0; u < h.num_u; ++u) best = std::max(best, h.prob_sum(static_cast<node_id>(u)));
  return static_cast<double>(best);
}

// Window check against the accumulated multiplicative/additive loss of a gamma schedule.
void measure_low_window(const BipartiteInstance& h, const RegimeResult& r, const std::vector<double>& gammas,
                        std::uint32_t K) {
  long double gsum = 0;
  for (double g : gammas) gsum += g;
  std::uint64_t violations = 0;
  for (std::size_t u = 0; u < h.num_u; ++u) {
    if (!r.u_good[u]) continue;
    const double target = static_cast<double>(h.prob_sum(static_cast<node_id>(u)));
    double hi, lo;
    if (gsum <= 0.5L) {
      const LossBounds lb = iterative_loss_bound(gammas, target);
      hi = lb.g;
      lo = lb.g_prime;
    } else {
      long double up = target, down = target;
      for (double g : gammas) {
        up *= 1 + 2 * g;
        down *= std::max(0.0, 1 - 2 * g);
      }
      hi = static_cast<double>(up + 2 * gsum);
      lo = static_cast<double>(down - 2 * gsum);
    }
    lo -= static_cast<double>(gsum);  // neighbours discarded by divisibility trimming
    std::uint64_t hits = 0;
    for (edge_index e = h.offsets[u]; e < h.offsets[u + 1]; ++e) hits += r.in_s[h.adj[e]];
    const double scaled = std::ldexp(static_cast<double>(hits), -static_cast<int>(K));
    if (scaled > hi + 1e-12 || scaled < lo - 1e-12) ++violations;
  }
  detail::guarantee(h.params, "low_regime.window", static_cast<long double>(violations), 0);
}

}  // namespace

RegimeResult low_prob_regime(const BipartiteInstance& h) {
  const ParamSet& p = h.params;
  const std::uint32_t K = threshold_k(p, h.N);
  const std::uint32_t I = log_n(h.N);
  for (std::size_t v = 0; v < h.num_v; ++v)
    if (h.level[v] <= static_cast<std::int32_t>(K) || h.level[v] > static_cast<std::int32_t>(I))
      throw ContractViolation("low_prob_regime: level " + std::to_string(h.level[v]) + " of v" + std::to_string(v) +
                              " outside [K+1, ceil(log N)]");
  const double floor_deg = degree_floor(p, h.N);
  std::uint64_t thin = 0;
  for (std::size_t u = 0; u < h.num_u; ++u)
    if (static_cast<double>(h.degree(static_cast<node_id>(u))) < floor_deg) ++thin;
  detail::guarantee(p, "low_regime.degree_floor", static_cast<long double>(thin), 0);

  RegimeResult out;
  out.in_s.assign(h.num_v, 0);
  out.u_good.assign(h.num_u, 0);

  SubInstance cur = induced_subinstance(h, all_ones(h.num_u), all_ones(h.num_v));
  std::vector<double> gammas;
  for (std::uint32_t i = 0; i <= I && cur.inst.num_v > 0; ++i) {
    BipartiteInstance& hi = cur.inst;
    for (std::size_t v = 0; v < hi.num_v; ++v) hi.level[v] = h.level[cur.v_ids[v]] - static_cast<std::int32_t>(i);
    const double gamma = low_gamma(p, i, h.N);
    gammas.push_back(gamma);
    const HalfSampleResult half = low_prob_half(hi, gamma);

    RoundTrace t;
    t.round = i;
    t.gamma = gamma;
    t.b = half.b;
    t.u_nodes = hi.num_u;
    t.v_nodes = hi.num_v;
    t.edges = hi.num_edges();
    t.potential = half.potential.total;
    t.potential_bound = half.potential.bound;
    t.max_u_sum = max_prob_sum(hi);

    std::vector<std::uint8_t> next_v(hi.num_v, 0);
    for (std::size_t v = 0; v < hi.num_v; ++v) {
      if (!half.in_s[v]) continue;
      ++t.selected;
      if (h.level[cur.v_ids[v]] - static_cast<std::int32_t>(i + 1) == static_cast<std::int32_t>(K))
        out.in_s[cur.v_ids[v]] = 1;  // frozen at level K
      else
        next_v[v] = 1;
    }
    out.rounds.push_back(t);
    SubInstance next = induced_subinstance(hi, half.u_good, next_v, &half.kept);
    for (node_id& x : next.u_ids) x = cur.u_ids[x];
    for (node_id& x : next.v_ids) x = cur.v_ids[x];
    cur = std::move(next);
  }
  for (node_id u : cur.u_ids) out.u_good[u] = 1;
  measure_low_window(h, out, gammas, K);
  return out;
}

RegimeResult high_prob_regime(const BipartiteInstance& h) {
  const ParamSet& p = h.params;
  const std::uint32_t K = threshold_k(p, h.N);
  for (std::size_t v = 0; v < h.num_v; ++v)
    if (h.level[v] < 0 || h.level[v] > static_cast<std::int32_t>(K))
      throw ContractViolation("high_prob_regime: level " + std::to_string(h.level[v]) + " of v" + std::to_string(v) +
                              " outside [0, K]");
  RegimeResult out;
  out.in_s.assign(h.num_v, 1);
  out.u_good.assign(h.num_u, 1);
  const std::int64_t I = static_cast<std::int64_t>(K) - p.high_floor;

  for (std::int64_t i = 0; i < I; ++i) {
    const std::int32_t top = static_cast<std::int32_t>(K - i);
    std::vector<std::uint8_t> active(h.num_v, 0);
    std::uint64_t count = 0;
    for (std::size_t v = 0; v < h.num_v; ++v)
      if (out.in_s[v] && h.level[v] >= top) {
        active[v] = 1;
        ++count;
      }
    charge("hitting", h.num_v);
    if (count == 0) continue;
    SubInstance sub = induced_subinstance(h, out.u_good, active);
    const double gamma = high_gamma(p, static_cast<std::uint32_t>(i), K);
    const HalfSampleResult half = high_prob_half(sub.inst, gamma);

    RoundTrace t;
    t.round = static_cast<std::uint32_t>(i);
    t.gamma = gamma;
    t.b = half.b;
    t.u_nodes = sub.inst.num_u;
    t.v_nodes = sub.inst.num_v;
    t.edges = sub.inst.num_edges();
    t.potential = half.potential.total;
    t.potential_bound = half.potential.bound;
    for (std::size_t v = 0; v < sub.inst.num_v; ++v) {
      if (half.in_s[v]) ++t.selected;
      else out.in_s[sub.v_ids[v]] = 0;
    }
    for (std::size_t u = 0; u < sub.inst.num_u; ++u)
      if (!half.u_good[u]) out.u_good[sub.u_ids[u]] = 0;

    // Current probability mass per surviving u: alive neighbours at level min(k, K-i-1).
    long double best = 0;
    const std::int32_t next_top = top - 1;
    for (std::size_t u = 0; u < h.num_u; ++u) {
      if (!out.u_good[u]) continue;
      long double s = 0;
      for (edge_index e = h.offsets[u]; e < h.offsets[u + 1]; ++e) {
        const node_id v = h.adj[e];
        if (out.in_s[v]) s += std::ldexp(1.0L, -std::min(h.level[v], next_top));
      }
      best = std::max(best, s);
    }
    charge("hitting", h.num_edges());
    t.max_u_sum = static_cast<double>(best);
    out.rounds.push_back(t);
  }
  return out;
}

HittingResult hitting_set(const BipartiteInstance& h) {
  h.validate();
  const ParamSet& p = h.params;
  const std::uint32_t K = threshold_k(p, h.N);
  HittingResult out;
  out.K = K;

  std::vector<std::uint8_t> v_low(h.num_v, 0);
  for (std::size_t v = 0; v < h.num_v; ++v) v_low[v] = h.level[v] > static_cast<std::int32_t>(K);
  const double floor_deg = degree_floor(p, h.N);
  std::vector<std::uint8_t> u_low(h.num_u, 0);
  for (std::size_t u = 0; u < h.num_u; ++u) {
    std::uint64_t c = 0;
    for (edge_index e = h.offsets[u]; e < h.offsets[u + 1]; ++e) c += v_low[h.adj[e]];
    u_low[u] = static_cast<double>(c) >= floor_deg;
  }
  charge("hitting", h.num_edges() + h.num_u + h.num_v);

  std::vector<std::uint8_t> v_high(h.num_v, 0), u_high(h.num_u, 1);
  for (std::size_t v = 0; v < h.num_v; ++v) v_high[v] = !v_low[v];
  const std::uint64_t low_v = static_cast<std::uint64_t>(std::count(v_low.begin(), v_low.end(), 1));
  if (low_v > 0) {
    SubInstance low = induced_subinstance(h, u_low, v_low);
    RegimeResult lr = low_prob_regime(low.inst);
    out.low_v = low.inst.num_v;
    out.low_u = low.inst.num_u;
    out.low_rounds = std::move(lr.rounds);
    for (std::size_t v = 0; v < low.inst.num_v; ++v)
      if (lr.in_s[v]) v_high[low.v_ids[v]] = 1;
    for (std::size_t u = 0; u < low.inst.num_u; ++u)
      if (!lr.u_good[u]) u_high[low.u_ids[u]] = 0;
  }

  SubInstance high = induced_subinstance(h, u_high, v_high);
  for (std::int32_t& k : high.inst.level) k = std::min(k, static_cast<std::int32_t>(K));
  RegimeResult hr = high_prob_regime(high.inst);
  out.high_rounds = std::move(hr.rounds);

  out.in_s.assign(h.num_v, 0);
  out.u_good.assign(h.num_u, 0);
  for (std::size_t v = 0; v < high.inst.num_v; ++v)
    if (hr.in_s[v]) out.in_s[high.v_ids[v]] = 1;
  for (std::size_t u = 0; u < high.inst.num_u; ++u)
    if (hr.u_good[u]) out.u_good[high.u_ids[u]] = 1;

  long double good = 0, total = 0;
  for (std::size_t u = 0; u < h.num_u; ++u) {
    total += h.imp[u];
    if (out.u_good[u]) good += h.imp[u];
  }
  out.importance_good = static_cast<double>(good);
  out.importance_total = static_cast<double>(total);
  detail::guarantee(p, "hitting_set.importance", p.importance_target * total, good);
  return out;
}

}  // namespace dpar
