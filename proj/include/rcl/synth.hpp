#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "rcl/graph.hpp"

namespace rcl {

// Parameters of the circular-class homophily generator.
struct SynthParams {
  Index num_nodes = 2000;
  Index num_classes = 10;
  double homo = 0.5;
  double avg_degree = 10.0;
  Index feature_dim = 16;
  double gaussian_spread = 2.5;
  std::uint64_t seed = 0;
};

enum class Difficulty : std::uint8_t { kEasy, kMedium, kHard };

std::string to_string(Difficulty d);
Difficulty difficulty_from_string(const std::string& s);

struct EdgeDifficulty {
  std::vector<Difficulty> per_edge;  // aligned with Graph::edges
};

struct SyntheticGraph {
  Graph graph;
  EdgeDifficulty difficulty;
};

/// Shortest distance between two classes placed on a ring of C classes.
Index circular_class_distance(Index c1, Index c2, Index num_classes);

/// Easy / medium / hard by circular class distance 0 / 1 / >= 2.
Difficulty classify_edge(const Graph& g, const Edge& e);
EdgeDifficulty classify_edges(const Graph& g);

/// Throws std::invalid_argument when parameters are out of range or the
/// requested edge count cannot be placed.
SyntheticGraph generate(const SynthParams& p);

/// Fraction of edges whose endpoints share a label. Throws on an edgeless graph.
double empirical_homophily(const Graph& g);

/// Edge counts indexed by circular class distance, 0 .. floor(C/2).
std::vector<std::size_t> edge_counts_by_distance(const Graph& g);

// Sidecar format: one line per edge, "u v {easy|medium|hard}", in edge order.
void save_difficulty(const Graph& g, const EdgeDifficulty& d, const std::filesystem::path& path);
EdgeDifficulty load_difficulty(const Graph& g, const std::filesystem::path& path);

}  // namespace rcl
