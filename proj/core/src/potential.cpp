#include "dpar/potential.hpp"

#include <algorithm>

#include "dpar/certificates.hpp"
#include "dpar/errors.hpp"
#include "dpar/parallel.hpp"
#include "dpar/work.hpp"

namespace dpar {

void BucketSet::add(const node_id* first, std::size_t count, node_id owner_id, double scale_value) {
  members.insert(members.end(), first, first + count);
  offsets.push_back(members.size());
  owner.push_back(owner_id);
  scale.push_back(scale_value);
}

std::uint64_t BucketSet::selected_in(std::size_t bucket, const std::vector<std::uint8_t>& s) const {
  std::uint64_t c = 0;
  for (edge_index i = offsets[bucket]; i < offsets[bucket + 1]; ++i) c += s[members[i]];
  return c;
}

std::vector<double> PotentialSystem::term_expectations() const {
  std::vector<double> out;
  for (const BucketTerm& t : bucket_terms) {
    long double e = 0;
    const double quarter_b = static_cast<double>(sets[t.set].b) / 4.0;
    for (double c : t.coeff) e += c * quarter_b;
    out.push_back(static_cast<double>(e));
  }
  for (const WeightedTerm& t : weighted_terms) {
    long double e = 0;
    if (t.aux != nullptr) e += t.aux->total_weight();
    for (double w : t.vertex_weight) e += w;
    out.push_back(static_cast<double>(t.scale * e));
  }
  return out;
}

std::vector<std::string> PotentialSystem::term_names() const {
  std::vector<std::string> out;
  for (const BucketTerm& t : bucket_terms) out.push_back(t.name);
  for (const WeightedTerm& t : weighted_terms) out.push_back(t.name);
  return out;
}

std::vector<double> PotentialSystem::evaluate_terms(const std::vector<std::uint8_t>& s) const {
  std::vector<double> out;
  for (const BucketTerm& t : bucket_terms) {
    const BucketSet& set = sets[t.set];
    const double half = static_cast<double>(set.b) / 2.0;
    const long double v = parallel_sum(set.size(), [&](std::size_t i) {
      const double d = static_cast<double>(set.selected_in(i, s)) - half;
      return static_cast<long double>(t.coeff[i]) * d * d;
    });
    out.push_back(static_cast<double>(v));
  }
  for (const WeightedTerm& t : weighted_terms) {
    long double v = 0;
    if (t.aux != nullptr) {
      const Graph& g = *t.aux;
      v += 2 * parallel_sum(g.num_nodes(), [&](std::size_t x) {
        long double acc = 0;
        if (!s[x]) return acc;
        for (edge_index e = g.begin(static_cast<node_id>(x)); e < g.end(static_cast<node_id>(x)); ++e)
          if (s[g.neighbor_at(e)]) acc += g.weight_at(e);  // each S-pair seen twice
        return acc;
      });
    }
    for (std::size_t x = 0; x < t.vertex_weight.size(); ++x)
      if (s[x]) v += 2 * static_cast<long double>(t.vertex_weight[x]);
    out.push_back(static_cast<double>(t.scale * v));
  }
  return out;
}

double PotentialSystem::evaluate(const std::vector<std::uint8_t>& s) const {
  long double total = 0;
  for (double v : evaluate_terms(s)) total += v;
  return static_cast<double>(total);
}

RoundingInstance PotentialSystem::to_rounding(double eps) const {
  RoundingInstance inst;
  inst.n = n;
  inst.eps = eps;
  inst.util.assign(n, 0.0);
  std::uint64_t touched = 0;
  for (std::size_t si = 0; si < sets.size(); ++si) {
    const BucketSet& set = sets[si];
    std::vector<double> combined(set.size(), 0.0);
    for (const BucketTerm& t : bucket_terms)
      if (t.set == si)
        for (std::size_t i = 0; i < set.size(); ++i) combined[i] += t.coeff[i];
    const double bm1 = static_cast<double>(set.b) - 1.0;
    for (std::size_t i = 0; i < set.size(); ++i) {
      const double c = combined[i];
      if (c == 0) continue;
      const edge_index lo = set.offsets[i], hi = set.offsets[i + 1];
      for (edge_index x = lo; x < hi; ++x) {
        inst.util[set.members[x]] += c * bm1;
        for (edge_index y = x + 1; y < hi; ++y) inst.edges.push_back({set.members[x], set.members[y], 2 * c});
      }
      touched += (hi - lo) * (hi - lo);
    }
  }
  for (const WeightedTerm& t : weighted_terms) {
    if (t.aux != nullptr) {
      const Graph& g = *t.aux;
      for (std::size_t x = 0; x < g.num_nodes(); ++x)
        for (edge_index e = g.begin(static_cast<node_id>(x)); e < g.end(static_cast<node_id>(x)); ++e) {
          const node_id y = g.neighbor_at(e);
          if (y > x && g.weight_at(e) > 0)
            inst.edges.push_back({static_cast<node_id>(x), y, 4 * t.scale * g.weight_at(e)});
        }
      touched += g.num_slots();
    }
    for (std::size_t x = 0; x < t.vertex_weight.size(); ++x) inst.util[x] -= 2 * t.scale * t.vertex_weight[x];
    touched += t.vertex_weight.size();
  }
  charge("potential", n + touched);
  return inst;
}

std::vector<std::uint8_t> PotentialSystem::untouched(const RoundingInstance& inst) const {
  std::vector<std::uint8_t> free(n, 1);
  for (std::size_t v = 0; v < n; ++v)
    if (inst.util[v] != 0) free[v] = 0;
  for (const CostEdge& e : inst.edges)
    if (e.cost > 0) free[e.u] = free[e.v] = 0;
  return free;
}

PotentialOutcome round_potential(const PotentialSystem& sys) {
  PotentialOutcome out;
  RoundingInstance inst = sys.to_rounding(1.0);
  long double total_cost = 0;
  for (const CostEdge& e : inst.edges) total_cost += e.cost;
  out.total_cost = static_cast<double>(total_cost);
  const double slack = sys.bound - sys.nominal_expectation;
  if (total_cost > 0 && !(slack > 0))
    throw ContractViolation("round_potential: bound leaves no slack over the expectation");
  out.eps = total_cost > 0 ? static_cast<double>(std::min<long double>(1.0L, slack / total_cost)) : 1.0;
  inst.eps = out.eps;
  RoundingResult rr = local_round(inst);
  out.s = std::move(rr.selected);
  const std::vector<std::uint8_t> free = sys.untouched(inst);
  std::uint64_t rank = 0;
  for (std::size_t v = 0; v < sys.n; ++v)
    if (free[v]) out.s[v] = (rank++ % 2 == 0) ? 1 : 0;
  out.values = sys.evaluate_terms(out.s);
  long double total = 0;
  for (double v : out.values) total += v;
  out.total = static_cast<double>(total);
  require_certificate("potential." + sys.name, total, sys.bound);
  return out;
}

}  // namespace dpar
