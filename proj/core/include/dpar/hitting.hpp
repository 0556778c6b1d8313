#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dpar/params.hpp"
#include "dpar/potential.hpp"
#include "dpar/types.hpp"

namespace dpar {

// Bipartite H = (U, V) given by sorted U-side adjacency, with importances on
// U and sampling levels k_v (probability 2^-k_v) on V.
struct BipartiteInstance {
  std::size_t num_u = 0;
  std::size_t num_v = 0;
  std::vector<edge_index> offsets{0};
  std::vector<node_id> adj;
  std::vector<double> imp;
  std::vector<std::int32_t> level;
  std::uint64_t N = 2;
  ParamSet params = ParamSet::desk();

  std::size_t num_edges() const { return adj.size(); }
  std::uint64_t degree(node_id u) const { return offsets[u + 1] - offsets[u]; }
  // Sum of 2^-k over u's neighbours, optionally restricted to a V mask.
  long double prob_sum(node_id u, const std::vector<std::uint8_t>* mask = nullptr) const;
  void validate() const;  // throws MalformedInput
};

struct BipartiteEdge {
  node_id u = 0;
  node_id v = 0;
};

BipartiteInstance make_bipartite(std::size_t num_u, std::size_t num_v, std::vector<BipartiteEdge> edges,
                                 std::vector<double> imp, std::vector<std::int32_t> level, std::uint64_t N,
                                 ParamSet params = ParamSet::desk());

// Induced sub-instance on masked U and V nodes; ids are compacted in order.
struct SubInstance {
  BipartiteInstance inst;
  std::vector<node_id> u_ids;  // local -> parent
  std::vector<node_id> v_ids;
};
SubInstance induced_subinstance(const BipartiteInstance& h, const std::vector<std::uint8_t>& keep_u,
                                const std::vector<std::uint8_t>& keep_v,
                                const std::vector<std::uint8_t>* keep_edge = nullptr);

struct PotentialReport {
  std::vector<std::string> names;
  std::vector<double> values;
  std::vector<double> expectations;
  double total = 0;
  double bound = 0;
  double eps = 0;
};

struct HalfSampleResult {
  std::vector<std::uint8_t> in_s;    // per V node
  std::vector<std::uint8_t> u_good;  // per U node
  std::vector<std::uint8_t> kept;    // per adjacency slot: edge survives trimming (H')
  std::uint64_t b = 0;
  double gamma = 0;
  PotentialReport potential;
  // measured guarantee sides (value <= bound form)
  double shrink_value = 0, shrink_bound = 0;
  double importance_good = 0, importance_total = 0;
  std::uint64_t max_dropped = 0;
  double aux_value = 0, aux_bound = 0;
  double aux_pairs_value = 0, aux_pairs_bound = 0;
  std::uint64_t prob_violations = 0;  // U_good nodes outside the per-node window
};

struct RoundTrace {
  std::uint32_t round = 0;
  double gamma = 0;
  std::uint64_t b = 0;
  std::uint64_t u_nodes = 0, v_nodes = 0, edges = 0, selected = 0;
  double potential = 0, potential_bound = 0;
  double max_u_sum = 0;
};

struct RegimeResult {
  std::vector<std::uint8_t> in_s;
  std::vector<std::uint8_t> u_good;
  std::vector<RoundTrace> rounds;
  double aux_value = 0, aux_bound = 0;  // MIS variants only
};

struct HittingResult {
  std::vector<std::uint8_t> in_s;
  std::vector<std::uint8_t> u_good;
  std::uint32_t K = 0;
  std::uint64_t low_v = 0, low_u = 0;
  std::vector<RoundTrace> low_rounds, high_rounds;
  double importance_good = 0, importance_total = 0;
};

// Lemma-level operations. Levels for the low variants must exceed K; the high
// variants ignore levels.
HalfSampleResult low_prob_half(const BipartiteInstance& h, double gamma);
HalfSampleResult high_prob_half(const BipartiteInstance& h, double gamma);
RegimeResult low_prob_regime(const BipartiteInstance& h);
RegimeResult high_prob_regime(const BipartiteInstance& h);
HittingResult hitting_set(const BipartiteInstance& h);

// The potential systems behind the half samplers, exposed for calibration.
struct HalfSystem {
  PotentialSystem sys;
  std::vector<std::uint8_t> kept;
  std::uint64_t b = 0;
};
HalfSystem build_low_half_system(const BipartiteInstance& h, double gamma);
HalfSystem build_high_half_system(const BipartiteInstance& h, double gamma);

struct HittingVerdict {
  bool pass = false;
  double importance_fraction = 0;
  double measured_c = 0;             // max over U_good of hits / (sum + 1)
  std::uint64_t lower_violations = 0;
  std::uint64_t upper_violations = 0;
  std::string message;
};

// Full-scan check of hits in [lo_scale*sum - lo_add, c*sum + c] on U_good and of the importance target.
HittingVerdict verify_hitting(const BipartiteInstance& h, const std::vector<std::uint8_t>& in_s,
                              const std::vector<std::uint8_t>& u_good, double importance_target, double c_limit,
                              double lo_scale = 0.5, double lo_add = 0.5);

// "HSET1" text format: header, "nu nv [N]", nu lines "u imp", nv lines "v k", then "u v" edges.
BipartiteInstance read_hset(std::istream& in, const std::string& source = "<stream>");
BipartiteInstance read_hset_file(const std::string& path);
void write_hset(std::ostream& out, const BipartiteInstance& h);

}  // namespace dpar
