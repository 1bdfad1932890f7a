#include <gtest/gtest.h>

#include <filesystem>
#include <map>

#include "rcl/synth.hpp"

namespace rcl {
namespace {

SynthParams params(double homo, std::uint64_t seed = 1) {
  SynthParams p;
  p.homo = homo;
  p.seed = seed;
  return p;
}

TEST(CircularDistance, Examples) {
  EXPECT_EQ(circular_class_distance(0, 0, 10), 0);
  EXPECT_EQ(circular_class_distance(0, 9, 10), 1);
  EXPECT_EQ(circular_class_distance(2, 7, 10), 5);
  EXPECT_THROW(circular_class_distance(0, 10, 10), std::out_of_range);
  EXPECT_THROW(circular_class_distance(-1, 0, 10), std::out_of_range);
}

TEST(CircularDistance, SymmetricAndBounded) {
  for (Index c = 2; c <= 11; ++c) {
    for (Index a = 0; a < c; ++a) {
      for (Index b = 0; b < c; ++b) {
        const Index d = circular_class_distance(a, b, c);
        EXPECT_EQ(d, circular_class_distance(b, a, c));
        EXPECT_EQ(d == 0, a == b);
        EXPECT_LE(d, c / 2);
      }
    }
  }
}

TEST(Generate, FullHomophilyGivesOnlyEasyEdges) {
  const auto sg = generate(params(1.0));
  EXPECT_DOUBLE_EQ(empirical_homophily(sg.graph), 1.0);
  for (auto d : sg.difficulty.per_edge) EXPECT_EQ(d, Difficulty::kEasy);
}

TEST(Generate, HomophilyWithinTolerance) {
  for (double h : {0.3, 0.5, 0.7}) {
    const auto sg = generate(params(h));
    EXPECT_NEAR(empirical_homophily(sg.graph), h, 0.03) << "homo " << h;
  }
}

TEST(Generate, CrossClassDistanceRatioNearE) {
  const auto counts = edge_counts_by_distance(generate(params(0.5)).graph);
  const double ratio = static_cast<double>(counts[1]) / static_cast<double>(counts[2]);
  EXPECT_NEAR(ratio, std::exp(1.0), 0.25 * std::exp(1.0));
}

TEST(Generate, CrossClassCountsNonIncreasing) {
  for (double h : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const auto counts = edge_counts_by_distance(generate(params(h)).graph);
    for (std::size_t d = 2; d < counts.size(); ++d) {
      EXPECT_LE(counts[d], counts[d - 1]) << "homo " << h << " distance " << d;
    }
  }
}

TEST(Generate, ShapeAndSplits) {
  const auto p = params(0.5);
  const auto sg = generate(p);
  const Graph& g = sg.graph;
  EXPECT_TRUE(validate(g).empty());
  EXPECT_EQ(g.num_edges(), 10000u);
  std::map<Index, int> sizes;
  for (Index y : g.labels) ++sizes[y];
  for (const auto& [c, n] : sizes) EXPECT_EQ(n, p.num_nodes / p.num_classes);
  const std::size_t a = g.split.train.size(), b = g.split.val.size(), c = g.split.test.size();
  EXPECT_EQ(a + b + c, static_cast<std::size_t>(p.num_nodes));
  EXPECT_LE(std::max({a, b, c}) - std::min({a, b, c}), 1u);
  EXPECT_EQ(sg.difficulty.per_edge.size(), g.num_edges());
  EXPECT_EQ(sg.difficulty.per_edge, classify_edges(g).per_edge);
}

TEST(Generate, SeedDeterminism) {
  const auto a = generate(params(0.4, 9));
  const auto b = generate(params(0.4, 9));
  const auto c = generate(params(0.4, 10));
  EXPECT_EQ(a.graph, b.graph);
  EXPECT_NE(a.graph.edges, c.graph.edges);
}

TEST(Generate, AdjacentClassMeansCloserThanOpposite) {
  const auto p = params(0.5);
  const Graph g = generate(p).graph;
  Matrix means = Matrix::Zero(p.num_classes, g.num_features);
  for (Index i = 0; i < g.num_nodes; ++i) means.row(g.labels[i]) += g.features.row(i);
  means /= static_cast<double>(p.num_nodes / p.num_classes);
  double adjacent = 0.0, opposite = 0.0;
  for (Index c = 0; c < p.num_classes; ++c) {
    adjacent += (means.row(c) - means.row((c + 1) % p.num_classes)).norm();
    opposite += (means.row(c) - means.row((c + p.num_classes / 2) % p.num_classes)).norm();
  }
  EXPECT_LT(adjacent, opposite);
}

TEST(Generate, RejectsBadParameters) {
  SynthParams p = params(0.5);
  p.homo = 1.5;
  EXPECT_THROW(generate(p), std::invalid_argument);
  p = params(0.0);
  EXPECT_THROW(generate(p), std::invalid_argument);
  p = params(0.5);
  p.num_nodes = 2005;
  EXPECT_THROW(generate(p), std::invalid_argument);
  // Same-class pairs cannot host this many edges.
  p = params(1.0);
  p.num_nodes = 100;
  p.avg_degree = 40;
  EXPECT_THROW(generate(p), std::invalid_argument);
}

TEST(Homophily, Examples) {
  Graph g;
  g.num_nodes = 4;
  g.num_classes = 2;
  g.labels = {0, 0, 1, 1};
  g.edges = {{0, 1}, {2, 3}};
  EXPECT_DOUBLE_EQ(empirical_homophily(g), 1.0);
  g.edges = {{0, 2}, {1, 3}, {0, 3}};
  EXPECT_DOUBLE_EQ(empirical_homophily(g), 0.0);
  g.edges.clear();
  EXPECT_THROW(empirical_homophily(g), std::invalid_argument);
}

TEST(DifficultySidecar, RoundTrip) {
  SynthParams p = params(0.5);
  p.num_nodes = 200;
  const auto sg = generate(p);
  const auto path = std::filesystem::temp_directory_path() / "rcl_synth_test.difficulty";
  save_difficulty(sg.graph, sg.difficulty, path);
  EXPECT_EQ(load_difficulty(sg.graph, path).per_edge, sg.difficulty.per_edge);
  EXPECT_EQ(difficulty_from_string(to_string(Difficulty::kHard)), Difficulty::kHard);
  EXPECT_THROW(difficulty_from_string("tricky"), std::invalid_argument);
}

}  // namespace
}  // namespace rcl
