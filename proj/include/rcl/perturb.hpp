#pragma once

#include <cstdint>

#include "rcl/graph.hpp"

namespace rcl {

struct AttackSpec {
  double ratio = 0.0;  // injected edges as a fraction of the original edge count
  std::uint64_t seed = 0;
};

/// Adds round(ratio * E) edges drawn uniformly without replacement from the
/// node pairs that are not yet linked. Features, labels and split are kept.
/// Injected edges are appended after the original ones.
/// Throws std::invalid_argument when not enough unlinked pairs exist.
Graph inject_edges(const Graph& g, const AttackSpec& spec);

}  // namespace rcl
