#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dpar/graph.hpp"
#include "dpar/hitting.hpp"
#include "dpar/params.hpp"

namespace dpar {

// Buckets of exactly b edges; special endpoints are pairwise distinct per bucket.
struct EdgeBucketing {
  std::uint64_t b = 0;
  std::vector<edge_index> offsets{0};
  std::vector<Edge> edges;          // endpoints as (u < v)
  std::vector<node_id> special;     // parallel to edges
  std::vector<Edge> leftover;

  std::size_t size() const { return offsets.size() - 1; }
};

EdgeBucketing edge_buckets(const Graph& g, std::uint64_t b);

// Leftover ceiling of the construction: fewer than b nodes per owned degree d < b.
inline std::uint64_t edge_bucket_leftover_cap(std::uint64_t b) { return b * b * b; }

// Hitting instance plus auxiliary weighted graph G' on V and vertex weights.
struct MisAuxInstance {
  BipartiteInstance core;
  Graph aux;                         // on core.num_v nodes, weighted
  std::vector<double> vertex_weight; // empty means zero

  void validate() const;
};

struct CoreMisResult {
  HittingResult hit;
  double aux_value = 0;   // sum over selected aux pairs of w(e')
  double aux_bound = 0;   // C * sum w(e') 2^-(k_v + k_v')
  double measured_c = 0;  // aux_value / reference sum
  std::uint64_t pre_sum_violations = 0;
  double max_high_sum = 0;  // largest per-u sum entering the high phase
};

HalfSampleResult mis_low_prob_half(const MisAuxInstance& inst, double gamma);
HalfSampleResult mis_high_prob_half(const MisAuxInstance& inst, double gamma);
RegimeResult mis_low_prob_regime(const MisAuxInstance& inst);
RegimeResult mis_high_prob_regime(const MisAuxInstance& inst);
CoreMisResult core_mis_hitting(const MisAuxInstance& inst);

// Potential systems behind the MIS half samplers (for calibration).
HalfSystem build_mis_low_half_system(const MisAuxInstance& inst, double gamma);
HalfSystem build_mis_high_half_system(const MisAuxInstance& inst, double gamma);

struct IndependentishResult {
  std::vector<std::uint8_t> in_s;   // S*
  std::uint64_t max_outdegree = 0;  // in G[S*] under the (deg, id) orientation
  std::uint64_t outdegree_cap = 0;
  double covered_degree = 0;        // sum of deg over S* and N(S*)
  std::uint64_t edges = 0;
  std::uint64_t marked = 0, filtered = 0, u_nodes = 0;
  std::uint64_t overshoot_drops = 0;  // IN* prefixes that needed trimming
  bool used_hitting = false;
};

IndependentishResult independentish_set(const Graph& g, const ParamSet& params, std::uint64_t N);

struct IterationTrace {
  std::uint64_t nodes = 0, edges = 0;
  std::uint64_t candidate = 0, chosen = 0, isolated_added = 0;
  std::uint64_t colors = 0;
  std::uint64_t removed_edges = 0;
  double removed_fraction = 0;
  bool progress_guard = false;  // candidate set was empty; one node forced
};

struct IndependentSet {
  std::vector<std::uint8_t> in_set;
  std::vector<IterationTrace> trace;
  std::uint64_t size() const;
};

IndependentSet maximal_independent_set(const Graph& g, const ParamSet& params = ParamSet::desk());
IndependentSet luby_mis_baseline(const Graph& g, std::uint64_t seed);

struct Matching {
  std::vector<Edge> edges;
  std::vector<node_id> mate;  // no_node if unmatched
  std::vector<IterationTrace> trace;
};

Matching maximal_matching(const Graph& g, const ParamSet& params = ParamSet::desk());

// Full-scan oracles; return an empty string on success, else a description.
std::string check_independent_set(const Graph& g, const std::vector<std::uint8_t>& in_set);
std::string check_maximal_matching(const Graph& g, const std::vector<Edge>& edges);

}  // namespace dpar
