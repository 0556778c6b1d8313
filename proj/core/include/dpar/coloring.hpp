#pragma once

#include <cstdint>
#include <vector>

#include "dpar/graph.hpp"

namespace dpar {

struct Coloring {
  std::vector<std::uint32_t> color;
  std::uint64_t num_colors = 0;  // palette size; every color is below it
  std::uint32_t rounds = 0;
  std::uint64_t delta = 0;       // max (out)degree the reduction was run against
};

enum class ReduceMode {
  standard,  // k' = max(3 ceil(k^(1/3)), 3 delta)
  tight,     // k' = max(ceil(k^(1/3)), 3 delta, 3), used once the standard rule stalls
};

Coloring identity_coloring(std::size_t n);

// One polynomial reduction step: k colors -> p^2 colors for a prime p in
// [k', 2k']. Respects the graph's orientation if it has one (only
// out-neighbours are avoided). The input must be proper on out-edges.
Coloring reduce_colors_once(const Graph& g, const Coloring& in, ReduceMode mode = ReduceMode::standard);

// Iterates reduce_colors_once until the palette stops shrinking.
Coloring color_delta_squared(const Graph& g);

// 5 * delta^2 * c0 with c0 = 4 (delta clamped to at least 1).
std::uint64_t proper_palette_bound(std::uint64_t delta);

// True iff no out-edge joins two equal colors.
bool is_proper_coloring(const Graph& g, const std::vector<std::uint32_t>& color);

struct DefectiveColoring {
  std::vector<std::uint32_t> color;
  std::uint64_t num_colors = 0;  // exactly 3 * ceil(1/eps)
  double eps = 0;
  double mono_weight = 0;
  double total_weight = 0;
  std::uint32_t phase1_rounds = 0;
};

// ceil(1/eps), treating values within 1e-9 of an integer as that integer.
std::uint64_t ceil_inverse(double eps);

// Colors with 3 ceil(1/eps) colors so that monochromatic edge weight is at most eps * total weight.
DefectiveColoring defective_coloring(const Graph& g, double eps);

}  // namespace dpar
