#pragma once

#include <cstdint>
#include <limits>

namespace dpar {

using node_id = std::uint32_t;
using edge_index = std::uint64_t;

inline constexpr node_id no_node = std::numeric_limits<node_id>::max();

}  // namespace dpar
