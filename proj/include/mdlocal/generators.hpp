#pragma once

#include <cstdint>

#include "mdlocal/graph.hpp"

namespace mdlocal {

// Uniform simple d-regular graph on n vertices: configuration-model pairing,
// rejected and redrawn until it has no loops or parallel edges.
// Requires n * d even and d < n.
Graph random_regular_graph(std::size_t n, std::size_t degree, std::uint64_t seed,
                           int max_attempts = 1000);

}  // namespace mdlocal
