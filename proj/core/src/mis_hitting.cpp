#include <algorithm>
#include <cmath>

#include "dpar/errors.hpp"
#include "dpar/matchmis.hpp"
#include "dpar/work.hpp"
#include "half_internal.hpp"

namespace dpar {

void MisAuxInstance::validate() const {
  core.validate();
  if (aux.num_nodes() != core.num_v) throw MalformedInput("mis instance: aux graph must live on the V side");
  aux.validate();
  for (edge_index s = 0; s < aux.num_slots(); ++s)
    if (!(aux.weight_at(s) >= 0)) throw MalformedInput("mis instance: negative aux edge weight");
  if (!vertex_weight.empty()) {
    if (vertex_weight.size() != core.num_v) throw MalformedInput("mis instance: vertex weight length differs from |V|");
    for (double w : vertex_weight)
      if (!(w >= 0)) throw MalformedInput("mis instance: negative vertex weight");
  }
}

namespace {

long double aux_total(const MisAuxInstance& inst) {
  long double w = inst.aux.total_weight();
  for (double x : inst.vertex_weight) w += x;
  return w;
}

// 4 sum_{S^2} w(e') + 2 sum_S w(v) and sum w(e') + sum w(v).
struct AuxSides {
  long double value = 0, total = 0;
  std::uint64_t pairs = 0;
};

AuxSides aux_sides(const MisAuxInstance& inst, const std::vector<std::uint8_t>& s) {
  AuxSides a;
  const Graph& g = inst.aux;
  for (std::size_t x = 0; x < g.num_nodes(); ++x) {
    const node_id v = static_cast<node_id>(x);
    for (edge_index e = g.begin(v); e < g.end(v); ++e) {
      const node_id y = g.neighbor_at(e);
      if (y <= v) continue;
      a.total += g.weight_at(e);
      if (s[v] && s[y]) {
        a.value += 4 * static_cast<long double>(g.weight_at(e));
        ++a.pairs;
      }
    }
  }
  for (std::size_t v = 0; v < inst.vertex_weight.size(); ++v) {
    a.total += inst.vertex_weight[v];
    if (s[v]) a.value += 2 * static_cast<long double>(inst.vertex_weight[v]);
  }
  charge("verify", g.num_slots() + inst.vertex_weight.size());
  return a;
}

void add_aux_term(PotentialSystem& sys, const MisAuxInstance& inst, double multiplier, const char* name) {
  const long double W = aux_total(inst);
  if (W <= 0) return;
  WeightedTerm t;
  t.name = name;
  t.scale = static_cast<double>(multiplier / W);
  t.aux = &inst.aux;
  t.vertex_weight = inst.vertex_weight;
  sys.weighted_terms.push_back(std::move(t));
}

struct MisLowBuild {
  HalfSystem hs;
  detail::NeighborhoodBuckets nb;
  EdgeBucketing eb;
};

void check_mis_gamma(const ParamSet& p, double gamma, const char* who) {
  if (!(gamma > 0 && gamma < 1)) throw ParameterError(std::string(who) + ": gamma must lie in (0, 1)");
  if (p.mode == Mode::paper && !(gamma < 0.01))
    throw ParameterError(std::string(who) + ": gamma must be below 0.01 in paper mode");
}

MisLowBuild build_mis_low(const MisAuxInstance& inst, double gamma) {
  const BipartiteInstance& h = inst.core;
  const ParamSet& p = h.params;
  check_mis_gamma(p, gamma, "mis_low_prob_half");
  const std::uint32_t K = threshold_k(p, h.N);
  const std::uint32_t L = log_n(h.N);
  for (std::size_t v = 0; v < h.num_v; ++v)
    if (h.level[v] <= static_cast<std::int32_t>(K) || h.level[v] > static_cast<std::int32_t>(L))
      throw ContractViolation("mis_low_prob_half: level " + std::to_string(h.level[v]) + " outside [K+1, ceil(log N)]");
  MisLowBuild out;
  out.hs.b = low_bucket_size(p, gamma, K, h.N);
  out.nb = detail::bucket_neighborhoods(h, out.hs.b, true);
  out.hs.kept = out.nb.kept;
  PotentialSystem& sys = out.hs.sys;
  sys.name = "mis_low_half";
  sys.n = h.num_v;
  detail::add_low_potentials(sys, h, out.nb, out.hs.b);

  out.eb = edge_buckets(inst.aux, out.hs.b);
  BucketSet specials;
  specials.b = out.hs.b;
  for (std::size_t i = 0; i < out.eb.size(); ++i)
    specials.add(out.eb.special.data() + out.eb.offsets[i], out.eb.offsets[i + 1] - out.eb.offsets[i]);
  sys.sets.push_back(std::move(specials));
  const BucketSet& sp = sys.sets.back();
  BucketTerm phi4{"phi4_aux_edges", sys.sets.size() - 1, std::vector<double>(sp.size(), 0.0)};
  if (sp.size() > 0)
    std::fill(phi4.coeff.begin(), phi4.coeff.end(), 4.0 / static_cast<double>(sp.members.size()));
  sys.bucket_terms.push_back(std::move(phi4));
  add_aux_term(sys, inst, 100.0 / gamma, "phi5_aux_weight");
  sys.bound = 5 + 100.0 / gamma;
  sys.nominal_expectation = 4 + 100.0 / gamma;
  return out;
}

struct MisHighBuild {
  HalfSystem hs;
  detail::NeighborhoodBuckets nb;
};

MisHighBuild build_mis_high(const MisAuxInstance& inst, double gamma) {
  const BipartiteInstance& h = inst.core;
  check_mis_gamma(h.params, gamma, "mis_high_prob_half");
  MisHighBuild out;
  out.hs.b = high_bucket_size(h.params, gamma);
  out.nb = detail::bucket_neighborhoods(h, out.hs.b, false);
  out.hs.kept = out.nb.kept;
  PotentialSystem& sys = out.hs.sys;
  sys.name = "mis_high_half";
  sys.n = h.num_v;
  sys.sets.push_back(out.nb.set);
  BucketTerm phi1{"phi1_importance", 0, std::vector<double>(out.nb.set.size(), 0.0)};
  long double imp_total = 0;
  for (double x : h.imp) imp_total += x;
  if (imp_total > 0)
    for (std::size_t u = 0; u < h.num_u; ++u) {
      if (out.nb.mass[u] <= 0) continue;
      const double c = 4.0 * h.imp[u] / (static_cast<double>(imp_total) * out.nb.mass[u]);
      for (std::size_t i = out.nb.u_first[u]; i < out.nb.u_first[u + 1]; ++i) phi1.coeff[i] = c;
    }
  sys.bucket_terms.push_back(std::move(phi1));
  add_aux_term(sys, inst, 10.0 / gamma, "phi2_aux_weight");
  sys.bound = 3 + 10.0 / gamma;
  sys.nominal_expectation = 1 + 10.0 / gamma;
  return out;
}

void measure_high_window(const BipartiteInstance& h, HalfSampleResult& r, const std::string& prefix) {
  const ParamSet& p = h.params;
  const double slack = std::pow(1.0 / r.gamma, p.beta + 1);
  long double imp_good = 0, imp_total = 0;
  std::uint64_t violations = 0;
  for (std::size_t u = 0; u < h.num_u; ++u) {
    imp_total += h.imp[u];
    if (!r.u_good[u]) continue;
    imp_good += h.imp[u];
    std::uint64_t hits = 0;
    for (edge_index e = h.offsets[u]; e < h.offsets[u + 1]; ++e) hits += r.in_s[h.adj[e]];
    const double d = static_cast<double>(h.degree(static_cast<node_id>(u)));
    if (std::fabs(static_cast<double>(hits) - d / 2) > r.gamma * d / 2 + slack) ++violations;
  }
  r.importance_good = static_cast<double>(imp_good);
  r.importance_total = static_cast<double>(imp_total);
  r.prob_violations = violations;
  charge("verify", h.num_edges() + h.num_u);
  detail::guarantee(p, prefix + ".importance", (1 - r.gamma) * imp_total, imp_good);
  detail::guarantee(p, prefix + ".window", static_cast<long double>(violations), 0);
}

void certify_aux(const MisAuxInstance& inst, HalfSampleResult& r, const std::string& prefix, bool with_pairs) {
  const AuxSides a = aux_sides(inst, r.in_s);
  r.aux_value = static_cast<double>(a.value);
  r.aux_bound = static_cast<double>((1 + r.gamma) * a.total);
  require_certificate(prefix + ".aux_weight", a.value, (1 + r.gamma) * a.total);
  if (with_pairs) {
    const ParamSet& p = inst.core.params;
    r.aux_pairs_value = static_cast<double>(a.pairs);
    r.aux_pairs_bound = 2.0 / 3.0 * static_cast<double>(inst.aux.num_edges()) + additive_cap(p, inst.core.N);
    detail::guarantee(p, prefix + ".aux_pairs", r.aux_pairs_value, r.aux_pairs_bound);
  }
}

// Sub-instance of an MIS instance with the aux graph reweighted by per-node
// factors: w'(e) = w(e) f(v) f(v'); vertex weights get base(v) f(v) plus the
// pull of aux neighbours in `outside` (with their own factors).
struct MisSub {
  MisAuxInstance inst;
  std::vector<node_id> u_ids, v_ids;
};

MisSub mis_sub(const MisAuxInstance& parent, const std::vector<std::uint8_t>& keep_u,
               const std::vector<std::uint8_t>& keep_v, const std::vector<std::uint8_t>* keep_edge,
               const std::vector<double>& factor, const std::vector<double>& base_vertex,
               const std::vector<std::uint8_t>* outside) {
  MisSub out;
  SubInstance core = induced_subinstance(parent.core, keep_u, keep_v, keep_edge);
  out.inst.core = std::move(core.inst);
  out.u_ids = std::move(core.u_ids);
  out.v_ids = std::move(core.v_ids);
  const Graph& g = parent.aux;
  Subgraph sg = compact_subgraph(g, keep_v);
  const Graph& a = sg.graph;
  std::vector<double> w(a.num_slots());
  for (std::size_t x = 0; x < a.num_nodes(); ++x)
    for (edge_index e = a.begin(static_cast<node_id>(x)); e < a.end(static_cast<node_id>(x)); ++e)
      w[e] = a.weight_at(e) * factor[sg.new_to_old[x]] * factor[sg.new_to_old[a.neighbor_at(e)]];
  out.inst.aux = Graph(a.num_nodes(), a.offsets(), a.neighbor_array(), std::move(w));
  std::vector<double> vw(out.v_ids.size(), 0.0);
  bool any = false;
  for (std::size_t i = 0; i < out.v_ids.size(); ++i) {
    const node_id v = out.v_ids[i];
    long double acc = base_vertex.empty() ? 0.0L : static_cast<long double>(base_vertex[v]) * factor[v];
    if (outside != nullptr)
      for (edge_index e = g.begin(v); e < g.end(v); ++e) {
        const node_id y = g.neighbor_at(e);
        if ((*outside)[y]) acc += static_cast<long double>(g.weight_at(e)) * factor[v] * factor[y];
      }
    vw[i] = static_cast<double>(acc);
    any = any || vw[i] != 0;
  }
  if (any) out.inst.vertex_weight = std::move(vw);
  charge("hitting", g.num_slots() + g.num_nodes());
  return out;
}

std::vector<double> level_factors(const BipartiteInstance& h, std::int32_t shift, std::int32_t lo, std::int32_t hi) {
  std::vector<double> f(h.num_v);
  for (std::size_t v = 0; v < h.num_v; ++v) {
    const std::int32_t k = std::clamp(h.level[v] - shift, lo, hi);
    f[v] = std::ldexp(1.0, -k);
  }
  return f;
}

long double pair_reference(const Graph& g, const std::vector<std::int32_t>& level) {
  long double ref = 0;
  for (std::size_t x = 0; x < g.num_nodes(); ++x)
    for (edge_index e = g.begin(static_cast<node_id>(x)); e < g.end(static_cast<node_id>(x)); ++e) {
      const node_id y = g.neighbor_at(e);
      if (y > x) ref += g.weight_at(e) * std::ldexp(1.0L, -(level[x] + level[y]));
    }
  return ref;
}

long double selected_pair_weight(const Graph& g, const std::vector<std::uint8_t>& s) {
  long double v = 0;
  for (std::size_t x = 0; x < g.num_nodes(); ++x) {
    if (!s[x]) continue;
    for (edge_index e = g.begin(static_cast<node_id>(x)); e < g.end(static_cast<node_id>(x)); ++e) {
      const node_id y = g.neighbor_at(e);
      if (y > x && s[y]) v += g.weight_at(e);
    }
  }
  return v;
}

RegimeResult mis_high_regime_impl(const MisAuxInstance& inst, bool strict_pre);

}  // namespace

HalfSystem build_mis_low_half_system(const MisAuxInstance& inst, double gamma) {
  return build_mis_low(inst, gamma).hs;
}

HalfSystem build_mis_high_half_system(const MisAuxInstance& inst, double gamma) {
  return build_mis_high(inst, gamma).hs;
}

HalfSampleResult mis_low_prob_half(const MisAuxInstance& inst, double gamma) {
  const BipartiteInstance& h = inst.core;
  std::uint64_t heavy = 0;
  for (std::size_t u = 0; u < h.num_u; ++u)
    if (h.prob_sum(static_cast<node_id>(u)) > 10) ++heavy;
  detail::guarantee(h.params, "mis_low_half.sum10", static_cast<long double>(heavy), 0);

  MisLowBuild lb = build_mis_low(inst, gamma);
  const PotentialOutcome out = round_potential(lb.hs.sys);
  HalfSampleResult r;
  r.gamma = gamma;
  r.b = lb.hs.b;
  r.in_s = out.s;
  r.kept = lb.nb.kept;
  r.u_good = detail::good_u_nodes(lb.nb, h.num_u, r.in_s, h.params.bad_bucket_exp, h.params.bad_node_exp_mis);
  r.potential = detail::make_report(lb.hs.sys, out);
  detail::measure_low_guarantees(h, lb.nb, r, "mis_low_half");
  certify_aux(inst, r, "mis_low_half", true);
  require_certificate("edge_buckets.leftover", static_cast<long double>(lb.eb.leftover.size()),
                      static_cast<long double>(edge_bucket_leftover_cap(lb.hs.b)));
  return r;
}

HalfSampleResult mis_high_prob_half(const MisAuxInstance& inst, double gamma) {
  const BipartiteInstance& h = inst.core;
  MisHighBuild hb = build_mis_high(inst, gamma);
  const PotentialOutcome out = round_potential(hb.hs.sys);
  HalfSampleResult r;
  r.gamma = gamma;
  r.b = hb.hs.b;
  r.in_s = out.s;
  r.kept = hb.nb.kept;
  r.u_good = detail::good_u_nodes(hb.nb, h.num_u, r.in_s, h.params.bad_bucket_exp, h.params.bad_node_exp_mis);
  r.potential = detail::make_report(hb.hs.sys, out);
  measure_high_window(h, r, "mis_high_half");
  certify_aux(inst, r, "mis_high_half", false);
  return r;
}

RegimeResult mis_low_prob_regime(const MisAuxInstance& inst) {
  const BipartiteInstance& h = inst.core;
  const ParamSet& p = h.params;
  const std::uint32_t K = threshold_k(p, h.N);
  const std::uint32_t I = log_n(h.N);
  for (std::size_t v = 0; v < h.num_v; ++v)
    if (h.level[v] <= static_cast<std::int32_t>(K) || h.level[v] > static_cast<std::int32_t>(I))
      throw ContractViolation("mis_low_prob_regime: level outside [K+1, ceil(log N)]");
  const double floor_deg = degree_floor(p, h.N);
  std::uint64_t thin = 0;
  for (std::size_t u = 0; u < h.num_u; ++u)
    if (static_cast<double>(h.degree(static_cast<node_id>(u))) < floor_deg) ++thin;
  detail::guarantee(p, "mis_low_regime.degree_floor", static_cast<long double>(thin), 0);

  RegimeResult out;
  out.in_s.assign(h.num_v, 0);
  out.u_good.assign(h.num_u, 0);
  std::vector<std::uint8_t> u_cur(h.num_u, 1), v_cur(h.num_v, 1), fixed(h.num_v, 0);
  // Edge masks of the shrinking H'' chain, kept on the parent's adjacency.
  std::vector<std::uint8_t> edge_alive(h.num_edges(), 1);

  for (std::uint32_t i = 0; i <= I; ++i) {
    if (std::find(v_cur.begin(), v_cur.end(), 1) == v_cur.end()) break;
    const std::vector<double> f = level_factors(h, static_cast<std::int32_t>(i), static_cast<std::int32_t>(K), 1 << 20);
    MisSub sub = mis_sub(inst, u_cur, v_cur, &edge_alive, f, inst.vertex_weight, &fixed);
    for (std::size_t v = 0; v < sub.inst.core.num_v; ++v)
      sub.inst.core.level[v] = h.level[sub.v_ids[v]] - static_cast<std::int32_t>(i);
    const double gamma = low_gamma(p, i, h.N);
    const HalfSampleResult half = mis_low_prob_half(sub.inst, gamma);

    RoundTrace t;
    t.round = i;
    t.gamma = gamma;
    t.b = half.b;
    t.u_nodes = sub.inst.core.num_u;
    t.v_nodes = sub.inst.core.num_v;
    t.edges = sub.inst.core.num_edges();
    t.potential = half.potential.total;
    t.potential_bound = half.potential.bound;

    // Map kept edges back onto the parent adjacency.
    std::vector<node_id> v_local(h.num_v, no_node);
    for (std::size_t v = 0; v < sub.v_ids.size(); ++v) v_local[sub.v_ids[v]] = static_cast<node_id>(v);
    for (std::size_t lu = 0; lu < sub.u_ids.size(); ++lu) {
      const node_id u = sub.u_ids[lu];
      edge_index pos = sub.inst.core.offsets[lu];
      for (edge_index e = h.offsets[u]; e < h.offsets[u + 1]; ++e) {
        if (!edge_alive[e] || v_local[h.adj[e]] == no_node) continue;
        edge_alive[e] = half.kept[pos] ? 1 : 0;
        ++pos;
      }
    }
    std::fill(u_cur.begin(), u_cur.end(), 0);
    for (std::size_t lu = 0; lu < sub.u_ids.size(); ++lu) u_cur[sub.u_ids[lu]] = half.u_good[lu];
    std::fill(v_cur.begin(), v_cur.end(), 0);
    for (std::size_t v = 0; v < sub.v_ids.size(); ++v) {
      if (!half.in_s[v]) continue;
      ++t.selected;
      const node_id gv = sub.v_ids[v];
      if (h.level[gv] - static_cast<std::int32_t>(i + 1) == static_cast<std::int32_t>(K)) fixed[gv] = 1;
      else v_cur[gv] = 1;
    }
    charge("hitting", h.num_edges() + h.num_v + h.num_u);
    out.rounds.push_back(t);
  }
  out.in_s = fixed;
  out.u_good = u_cur;

  // Final aux certificate against the level-weighted reference.
  long double lhs = 0, rhs = 0;
  const Graph& g = inst.aux;
  const long double twoK = std::ldexp(1.0L, -static_cast<int>(K));
  lhs += selected_pair_weight(g, out.in_s) * twoK * twoK;
  rhs += pair_reference(g, h.level);
  for (std::size_t v = 0; v < inst.vertex_weight.size(); ++v) {
    if (out.in_s[v]) lhs += inst.vertex_weight[v] * twoK;
    rhs += inst.vertex_weight[v] * std::ldexp(1.0L, -h.level[v]);
  }
  out.aux_value = static_cast<double>(lhs);
  out.aux_bound = static_cast<double>(2 * rhs);
  detail::guarantee(p, "mis_low_regime.aux", lhs, 2 * rhs);

  std::uint64_t violations = 0;
  for (std::size_t u = 0; u < h.num_u; ++u) {
    if (!out.u_good[u]) continue;
    std::uint64_t hits = 0;
    for (edge_index e = h.offsets[u]; e < h.offsets[u + 1]; ++e) hits += out.in_s[h.adj[e]];
    const double scaled = std::ldexp(static_cast<double>(hits), -static_cast<int>(K));
    if (std::fabs(scaled - static_cast<double>(h.prob_sum(static_cast<node_id>(u)))) > 0.01) ++violations;
  }
  detail::guarantee(p, "mis_low_regime.window", static_cast<long double>(violations), 0);
  return out;
}

namespace {

RegimeResult mis_high_regime_impl(const MisAuxInstance& inst, bool strict_pre) {
  const BipartiteInstance& h = inst.core;
  const ParamSet& p = h.params;
  const std::uint32_t K = threshold_k(p, h.N);
  for (std::size_t v = 0; v < h.num_v; ++v)
    if (h.level[v] < 0 || h.level[v] > static_cast<std::int32_t>(K))
      throw ContractViolation("mis_high_prob_regime: level outside [0, K]");
  std::uint64_t heavy = 0;
  for (std::size_t u = 0; u < h.num_u; ++u)
    if (h.prob_sum(static_cast<node_id>(u)) > 40) ++heavy;
  if (strict_pre && heavy > 0)
    throw ContractViolation("mis_high_prob_regime: a U node has probability sum above 40");
  detail::guarantee(p, "mis_high_regime.sum40", static_cast<long double>(heavy), 0);

  RegimeResult out;
  out.in_s.assign(h.num_v, 1);
  out.u_good.assign(h.num_u, 1);
  const std::int64_t I = static_cast<std::int64_t>(K) - p.mis_high_floor;
  for (std::int64_t i = 0; i < I; ++i) {
    const std::int32_t top = static_cast<std::int32_t>(K - i);
    std::vector<std::uint8_t> active(h.num_v, 0), outside(h.num_v, 0);
    bool any = false;
    for (std::size_t v = 0; v < h.num_v; ++v) {
      if (!out.in_s[v]) continue;
      if (h.level[v] >= top) active[v] = 1, any = true;
      else outside[v] = 1;
    }
    if (!any) continue;
    const std::vector<double> f = level_factors(h, 0, 0, top);
    MisSub sub = mis_sub(inst, out.u_good, active, nullptr, f, {}, &outside);
    const double gamma = high_gamma(p, static_cast<std::uint32_t>(i), K);
    const HalfSampleResult half = mis_high_prob_half(sub.inst, gamma);

    RoundTrace t;
    t.round = static_cast<std::uint32_t>(i);
    t.gamma = gamma;
    t.b = half.b;
    t.u_nodes = sub.inst.core.num_u;
    t.v_nodes = sub.inst.core.num_v;
    t.edges = sub.inst.core.num_edges();
    t.potential = half.potential.total;
    t.potential_bound = half.potential.bound;
    for (std::size_t v = 0; v < sub.v_ids.size(); ++v) {
      if (half.in_s[v]) ++t.selected;
      else out.in_s[sub.v_ids[v]] = 0;
    }
    for (std::size_t lu = 0; lu < sub.u_ids.size(); ++lu)
      if (!half.u_good[lu]) out.u_good[sub.u_ids[lu]] = 0;

    long double best = 0;
    for (std::size_t u = 0; u < h.num_u; ++u) {
      if (!out.u_good[u]) continue;
      long double s = 0;
      for (edge_index e = h.offsets[u]; e < h.offsets[u + 1]; ++e) {
        const node_id v = h.adj[e];
        if (out.in_s[v]) s += std::ldexp(1.0L, -std::min(h.level[v], top - 1));
      }
      best = std::max(best, s);
    }
    charge("hitting", h.num_edges() + h.num_v);
    t.max_u_sum = static_cast<double>(best);
    detail::guarantee(p, "mis_high_regime.sum45", best, 45);
    out.rounds.push_back(t);
  }

  const long double value = selected_pair_weight(inst.aux, out.in_s);
  const long double ref = pair_reference(inst.aux, h.level);
  out.aux_value = static_cast<double>(value);
  out.aux_bound = static_cast<double>(ref);  // the lemma's C multiplies this reference
  return out;
}

}  // namespace

RegimeResult mis_high_prob_regime(const MisAuxInstance& inst) { return mis_high_regime_impl(inst, true); }

CoreMisResult core_mis_hitting(const MisAuxInstance& inst) {
  inst.validate();
  const BipartiteInstance& h = inst.core;
  const ParamSet& p = h.params;
  for (std::size_t u = 0; u < h.num_u; ++u) {
    const long double s = h.prob_sum(static_cast<node_id>(u));
    if (s < 5 - 1e-9 || s > 10 + 1e-9)
      throw MalformedInput("core_mis_hitting: probability sum of u" + std::to_string(u) + " is outside [5, 10]");
  }
  const std::uint32_t K = threshold_k(p, h.N);
  CoreMisResult out;
  out.hit.K = K;

  std::vector<std::uint8_t> v_low(h.num_v, 0);
  for (std::size_t v = 0; v < h.num_v; ++v) v_low[v] = h.level[v] > static_cast<std::int32_t>(K);
  const double floor_deg = degree_floor(p, h.N);
  std::vector<std::uint8_t> u_low(h.num_u, 0);
  for (std::size_t u = 0; u < h.num_u; ++u) {
    std::uint64_t c = 0;
    for (edge_index e = h.offsets[u]; e < h.offsets[u + 1]; ++e) c += v_low[h.adj[e]];
    u_low[u] = static_cast<double>(c) >= floor_deg;
  }
  std::vector<std::uint8_t> v_high(h.num_v, 0), u_high(h.num_u, 1);
  for (std::size_t v = 0; v < h.num_v; ++v) v_high[v] = !v_low[v];
  const std::vector<double> unit(h.num_v, 1.0);

  if (std::find(v_low.begin(), v_low.end(), 1) != v_low.end()) {
    // Vertex weight of a low node: aux edges into the rest, discounted by the far end's level.
    std::vector<double> base(h.num_v, 0.0);
    const Graph& g = inst.aux;
    for (std::size_t v = 0; v < h.num_v; ++v) {
      if (!v_low[v]) continue;
      long double acc = 0;
      for (edge_index e = g.begin(static_cast<node_id>(v)); e < g.end(static_cast<node_id>(v)); ++e) {
        const node_id y = g.neighbor_at(e);
        if (!v_low[y]) acc += g.weight_at(e) * std::ldexp(1.0L, -h.level[y]);
      }
      base[v] = static_cast<double>(acc);
    }
    MisSub low = mis_sub(inst, u_low, v_low, nullptr, unit, base, nullptr);
    RegimeResult lr = mis_low_prob_regime(low.inst);
    out.hit.low_v = low.inst.core.num_v;
    out.hit.low_u = low.inst.core.num_u;
    out.hit.low_rounds = std::move(lr.rounds);
    for (std::size_t v = 0; v < low.v_ids.size(); ++v)
      if (lr.in_s[v]) v_high[low.v_ids[v]] = 1;
    for (std::size_t lu = 0; lu < low.u_ids.size(); ++lu)
      if (!lr.u_good[lu]) u_high[low.u_ids[lu]] = 0;
  }

  MisSub high = mis_sub(inst, u_high, v_high, nullptr, unit, {}, nullptr);
  for (std::int32_t& k : high.inst.core.level) k = std::min(k, static_cast<std::int32_t>(K));
  std::uint64_t heavy = 0;
  for (std::size_t u = 0; u < high.inst.core.num_u; ++u) {
    const double s = static_cast<double>(high.inst.core.prob_sum(static_cast<node_id>(u)));
    out.max_high_sum = std::max(out.max_high_sum, s);
    if (s > 40) ++heavy;
  }
  out.pre_sum_violations = heavy;
  detail::guarantee(p, "core_mis.pre_high_sum40", static_cast<long double>(heavy), 0);
  RegimeResult hr = mis_high_regime_impl(high.inst, p.mode == Mode::paper);
  out.hit.high_rounds = std::move(hr.rounds);

  out.hit.in_s.assign(h.num_v, 0);
  out.hit.u_good.assign(h.num_u, 0);
  for (std::size_t v = 0; v < high.v_ids.size(); ++v)
    if (hr.in_s[v]) out.hit.in_s[high.v_ids[v]] = 1;
  for (std::size_t lu = 0; lu < high.u_ids.size(); ++lu)
    if (hr.u_good[lu]) out.hit.u_good[high.u_ids[lu]] = 1;

  long double good = 0, total = 0;
  std::uint64_t empty_hits = 0;
  for (std::size_t u = 0; u < h.num_u; ++u) {
    total += h.imp[u];
    if (!out.hit.u_good[u]) continue;
    good += h.imp[u];
    std::uint64_t hits = 0;
    for (edge_index e = h.offsets[u]; e < h.offsets[u + 1]; ++e) hits += out.hit.in_s[h.adj[e]];
    if (hits == 0) ++empty_hits;
  }
  out.hit.importance_good = static_cast<double>(good);
  out.hit.importance_total = static_cast<double>(total);
  detail::guarantee(p, "core_mis.importance", p.importance_target * total, good);
  detail::guarantee(p, "core_mis.hits_lower", static_cast<long double>(empty_hits), 0);

  const long double value = selected_pair_weight(inst.aux, out.hit.in_s);
  const long double ref = pair_reference(inst.aux, h.level);
  out.aux_value = static_cast<double>(value);
  out.aux_bound = static_cast<double>(ref);
  out.measured_c = ref > 0 ? static_cast<double>(value / ref) : 0.0;
  charge("verify", h.num_edges() + inst.aux.num_slots());
  return out;
}

}  // namespace dpar
