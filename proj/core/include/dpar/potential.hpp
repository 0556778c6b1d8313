#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dpar/graph.hpp"
#include "dpar/rounding.hpp"

namespace dpar {

// Equal-size groups of V nodes. owner/scale are bookkeeping for callers
// (owning U node, 2^-level weight); unused by the potential itself.
struct BucketSet {
  std::uint64_t b = 0;
  std::vector<edge_index> offsets{0};
  std::vector<node_id> members;
  std::vector<node_id> owner;
  std::vector<double> scale;

  std::size_t size() const { return offsets.size() - 1; }
  void add(const node_id* first, std::size_t count, node_id owner_id = no_node, double scale_value = 1.0);
  std::uint64_t selected_in(std::size_t bucket, const std::vector<std::uint8_t>& s) const;
};

// sum_i coeff_i (|S cap B_i| - b/2)^2 over the buckets of one set.
struct BucketTerm {
  std::string name;
  std::size_t set = 0;
  std::vector<double> coeff;
};

// scale * (4 sum_{e in S^2} w(e) + 2 sum_{v in S} w(v)).
struct WeightedTerm {
  std::string name;
  double scale = 0;
  const Graph* aux = nullptr;
  std::vector<double> vertex_weight;  // empty means all zero
};

struct PotentialSystem {
  std::string name;
  std::size_t n = 0;
  std::vector<BucketSet> sets;
  std::vector<BucketTerm> bucket_terms;
  std::vector<WeightedTerm> weighted_terms;
  double bound = 0;                 // the lemma's asserted ceiling
  double nominal_expectation = 0;   // expectation with every term active

  // Exact expectation of each term under independent fair coins.
  std::vector<double> term_expectations() const;
  std::vector<std::string> term_names() const;
  std::vector<double> evaluate_terms(const std::vector<std::uint8_t>& s) const;
  double evaluate(const std::vector<std::uint8_t>& s) const;

  // Utility/cost form: Phi(S) = const - sum util + sum cost.
  RoundingInstance to_rounding(double eps) const;
  // Nodes with no utility and no positive cost edge.
  std::vector<std::uint8_t> untouched(const RoundingInstance& inst) const;
};

struct PotentialOutcome {
  std::vector<std::uint8_t> s;
  std::vector<double> values;
  double total = 0;
  double eps = 0;
  double total_cost = 0;
};

// Rounds the system, resolves untouched nodes by alternating halving in id
// order, and asserts total <= bound.
PotentialOutcome round_potential(const PotentialSystem& sys);

}  // namespace dpar
