#pragma once

#include <cstdint>
#include <string>

#include "dpar/graph.hpp"
#include "dpar/hitting.hpp"

namespace dpar::tools {

struct GraphSpec {
  std::string kind = "gnm";  // gnm, grid, star, complete, powerlaw
  std::uint64_t n = 0;
  std::uint64_t m = 0;       // gnm and powerlaw only
  std::uint64_t seed = 1;
  double exponent = 2.5;     // powerlaw degree exponent
  std::uint32_t max_weight = 0;  // > 0 draws integer edge weights in [1, max_weight]

  std::string describe() const;
};

// Deterministic for a fixed spec. ParameterError on infeasible requests.
Graph generate_graph(const GraphSpec& spec);

struct HittingSpec {
  std::uint64_t num_u = 50;
  std::uint64_t num_v = 400;
  double sum_lo = 1;        // per-u sum of 2^-k over neighbours lands in [sum_lo, sum_hi]
  double sum_hi = 10;
  std::int32_t min_level = 0;
  std::int32_t max_level = 6;
  std::uint64_t N = 0;      // 0 means num_u + num_v
  std::uint64_t seed = 1;

  std::string describe() const;
};

BipartiteInstance generate_hitting_instance(const HittingSpec& spec, const ParamSet& params = ParamSet::desk());

}  // namespace dpar::tools
