#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "rcl/curriculum.hpp"
#include "rcl/graph.hpp"
#include "rcl/training.hpp"

namespace rcl {

enum class PacingKind { kLinear, kRoot };
enum class OrderingKind { kResidual, kRandom };

std::string to_string(PacingKind kind);
std::string to_string(OrderingKind kind);

/// Number of edges admitted at iteration t of total: round(t/T * E) for linear,
/// round(sqrt(t/T) * E) for root.
std::size_t pace_count(PacingKind kind, int t, int total, std::size_t num_edges);

/// Edge indices, easiest first. Residual ordering sorts ascending by the
/// pretrained residual (ties by index); random ordering is a seeded shuffle.
std::vector<std::size_t> edge_ordering(const Graph& g, OrderingKind kind, const RclConfig& cfg);
std::vector<std::size_t> order_by_residual(const std::vector<double>& residuals);

/// Heuristic curriculum: at epoch t the first pace_count(t) edges of the
/// ordering carry weight 1, the rest 0. No mask, lambda or smoothing.
TrainedModel train_paced(const Graph& g, const RclConfig& cfg, OrderingKind ordering,
                         PacingKind pacing);
TrainedModel train_paced(const Graph& g, const RclConfig& cfg,
                         const std::vector<std::size_t>& ordering, PacingKind pacing);

/// Full structure, unit weights, plain cross-entropy.
TrainedModel train_vanilla(const Graph& g, const RclConfig& cfg);

}  // namespace rcl
