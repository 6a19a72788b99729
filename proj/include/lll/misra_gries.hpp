#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "lll/graph.hpp"

namespace lll {

// Proper edge coloring of a simple graph with colors in [0, palette).
// palette defaults to max degree + 1 and must be at least that.
std::vector<int> misra_gries(std::size_t node_count, const std::vector<std::pair<NodeId, NodeId>>& edges,
                             int palette = -1);

inline std::vector<int> misra_gries(const Graph& g, int palette = -1) {
  return misra_gries(g.node_count(), g.edges(), palette);
}

}  // namespace lll
