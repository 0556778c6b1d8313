#pragma once

#include <cstdint>
#include <vector>

#include "dpar/graph.hpp"

namespace dpar {

struct CostEdge {
  node_id u = 0;
  node_id v = 0;
  double cost = 0;
};

// Maximise sum_{v in S} util(v) - sum_{e in S^2} cost(e); parallel edges allowed.
struct RoundingInstance {
  std::size_t n = 0;
  std::vector<double> util;
  std::vector<CostEdge> edges;
  double eps = 0.1;
};

struct RoundingResult {
  std::vector<std::uint8_t> selected;
  std::vector<std::uint32_t> color;  // defective color class of each node
  std::uint64_t num_classes = 0;
  long double objective = 0;
  long double bound = 0;  // sum util / 2 - sum cost / 4 - eps sum cost
  long double total_util = 0;
  long double total_cost = 0;
  double mono_cost = 0;
};

// Derandomized 1/2-sampling: process defective color classes in order and
// keep a node iff its conditional marginal (decided neighbours exact,
// undecided ones at 1/2) is non-negative.
RoundingResult local_round(const RoundingInstance& inst);

// Objective of an arbitrary selection, summed in a fixed order.
long double rounding_objective(const RoundingInstance& inst, const std::vector<std::uint8_t>& selected);

struct CutResult {
  std::vector<std::uint8_t> side;
  double cut_weight = 0;
  double total_weight = 0;
  double eps = 0;
};

// Greedy over defective color classes; cuts at least (1/2 - eps) of the weight.
CutResult max_cut_half(const Graph& g, double eps);

}  // namespace dpar
