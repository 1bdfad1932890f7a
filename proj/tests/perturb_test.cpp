#include <gtest/gtest.h>

#include <set>

#include "rcl/perturb.hpp"
#include "rcl/synth.hpp"
#include "test_graphs.hpp"

namespace rcl {
namespace {

Graph base_graph() {
  SynthParams p;
  p.num_nodes = 500;
  p.homo = 0.8;
  p.seed = 4;
  return generate(p).graph;
}

TEST(InjectEdges, ZeroRatioIsIdentity) {
  const Graph g = base_graph();
  EXPECT_EQ(inject_edges(g, {0.0, 1}), g);
}

TEST(InjectEdges, FullRatioDoublesEdges) {
  const Graph g = base_graph();
  const Graph h = inject_edges(g, {1.0, 1});
  EXPECT_EQ(h.num_edges(), 2 * g.num_edges());
  EXPECT_TRUE(validate(h).empty());
  // Originals first, untouched; no injected edge duplicates an original.
  std::set<std::pair<Index, Index>> seen;
  for (std::size_t k = 0; k < h.num_edges(); ++k) {
    if (k < g.num_edges()) {
      EXPECT_EQ(h.edges[k], g.edges[k]);
    }
    EXPECT_TRUE(seen.insert({h.edges[k].u, h.edges[k].v}).second);
  }
  EXPECT_EQ(h.labels, g.labels);
  EXPECT_EQ(h.features, g.features);
}

TEST(InjectEdges, RoundsRequestedCount) {
  const Graph g = base_graph();
  for (double r : {0.1, 0.25, 0.33, 0.5}) {
    const auto expect = static_cast<std::size_t>(std::llround(r * static_cast<double>(g.num_edges())));
    EXPECT_EQ(inject_edges(g, {r, 2}).num_edges(), g.num_edges() + expect);
  }
}

TEST(InjectEdges, CompleteGraphCannotTakeMore) {
  Graph g = testing::path_graph(5);
  g.edges.clear();
  for (Index u = 0; u < 5; ++u) {
    for (Index v = u + 1; v < 5; ++v) g.edges.push_back({u, v});
  }
  EXPECT_THROW(inject_edges(g, {0.1, 0}), std::invalid_argument);
  EXPECT_THROW(inject_edges(base_graph(), {-0.5, 0}), std::invalid_argument);
}

TEST(InjectEdges, DenseRegimeFillsAllFreePairs) {
  // 6 nodes, 5 path edges, 10 free pairs: ratio 2 takes every one of them.
  const Graph g = testing::path_graph(6);
  const Graph h = inject_edges(g, {2.0, 7});
  EXPECT_EQ(h.num_edges(), 15u);
  EXPECT_TRUE(validate(h).empty());
}

TEST(InjectEdges, DeterministicPerSeed) {
  const Graph g = base_graph();
  EXPECT_EQ(inject_edges(g, {0.5, 3}), inject_edges(g, {0.5, 3}));
  EXPECT_NE(inject_edges(g, {0.5, 3}).edges, inject_edges(g, {0.5, 4}).edges);
}

TEST(InjectEdges, LowersHomophily) {
  const Graph g = base_graph();
  const double before = empirical_homophily(g);
  const double after = empirical_homophily(inject_edges(g, {1.0, 5}));
  EXPECT_LT(after, before);
  // Random pairs share a label with probability about 1/C.
  EXPECT_NEAR(after, (before + 0.1) / 2.0, 0.03);
}

}  // namespace
}  // namespace rcl
