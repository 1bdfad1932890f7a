#include <gtest/gtest.h>

#include <algorithm>
#include <clocale>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "rcl/graph.hpp"
#include "test_graphs.hpp"

namespace rcl {
namespace {

namespace fs = std::filesystem;

bool has_prefix(const std::vector<std::string>& v, const std::string& prefix) {
  return std::any_of(v.begin(), v.end(), [&](const std::string& s) { return s.rfind(prefix, 0) == 0; });
}

fs::path temp_file(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "rcl_graph_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(GraphFormat, MinimalFileParses) {
  const Graph g = parse_graph("2 1 2 1\n0.5\n-1.5\n0 1\n0 1\n\n\n0 1\n");
  EXPECT_EQ(g.num_nodes, 2);
  EXPECT_EQ(g.num_edges(), 1u);
  EXPECT_EQ(g.edges[0], (Edge{0, 1}));
  EXPECT_DOUBLE_EQ(g.features(1, 0), -1.5);
}

TEST(GraphFormat, AcceptsScientificNotation) {
  const Graph g = parse_graph("2 1 2 0\n1e-3\n-2.5E+2\n0 1\n0 1\n\n\n");
  EXPECT_DOUBLE_EQ(g.features(0, 0), 1e-3);
  EXPECT_DOUBLE_EQ(g.features(1, 0), -250.0);
}

TEST(GraphFormat, SelfLoopReportsLine) {
  const std::string text = "4 1 2 2\n0\n0\n0\n0\n0 1 0 1\n0 1\n2\n3\n0 1\n3 3\n";
  try {
    parse_graph(text);
    FAIL() << "expected a format error";
  } catch (const GraphFormatError& e) {
    EXPECT_EQ(e.line(), 11u);
    EXPECT_NE(std::string(e.what()).find("self_loop"), std::string::npos);
  }
}

TEST(GraphFormat, ErrorsCarryLineNumbers) {
  // Bad header.
  EXPECT_THROW(parse_graph("2 1 x 1\n"), GraphFormatError);
  // Node index out of range on the edge line.
  try {
    parse_graph("2 1 2 1\n0\n0\n0 1\n0 1\n\n\n0 5\n");
    FAIL();
  } catch (const GraphFormatError& e) {
    EXPECT_EQ(e.line(), 8u);
  }
  // Duplicate edge.
  try {
    parse_graph("3 1 2 2\n0\n0\n0\n0 1 0\n0 1\n2\n\n0 1\n0 1\n");
    FAIL();
  } catch (const GraphFormatError& e) {
    EXPECT_EQ(e.line(), 10u);
  }
  // Split overlap.
  try {
    parse_graph("3 1 2 0\n0\n0\n0\n0 1 0\n0 1\n1\n2\n");
    FAIL();
  } catch (const GraphFormatError& e) {
    EXPECT_NE(std::string(e.what()).find("split_overlap"), std::string::npos);
  }
}

TEST(GraphFormat, TruncatedFileFails) {
  EXPECT_THROW(parse_graph("2 1 2 1\n0\n0\n0 1\n0 1\n\n\n"), GraphFormatError);
}

TEST(GraphIo, RoundTripIsIdentity) {
  std::mt19937_64 rng(3);
  Graph g = testing::random_graph(rng, 30, 4, 3, 0.2);
  g.features = g.features.unaryExpr([](double v) { return quantize_real(v); });
  const auto path = temp_file("round_trip.graph");
  save_graph(g, path);
  EXPECT_EQ(load_graph(path), g);
}

TEST(GraphIo, SaveIsDeterministic) {
  const Graph g = testing::path_graph(6, 2);
  const auto a = temp_file("a.graph");
  const auto b = temp_file("b.graph");
  save_graph(g, a);
  save_graph(g, b);
  EXPECT_EQ(read_file(a), read_file(b));
}

TEST(GraphIo, EmptyEdgeSetRoundTrips) {
  Graph g = testing::path_graph(4);
  g.edges.clear();
  const auto path = temp_file("empty.graph");
  save_graph(g, path);
  const Graph back = load_graph(path);
  EXPECT_EQ(back.num_edges(), 0u);
  EXPECT_EQ(back, g);
}

TEST(GraphIo, ParsingIgnoresLocale) {
  const Graph g = testing::path_graph(4);
  const std::string text = format_graph(g);
  const char* old = std::setlocale(LC_NUMERIC, nullptr);
  const std::string saved = old ? old : "C";
  if (std::setlocale(LC_NUMERIC, "de_DE.UTF-8") == nullptr) GTEST_SKIP() << "locale unavailable";
  const Graph back = parse_graph(text);
  std::setlocale(LC_NUMERIC, saved.c_str());
  EXPECT_EQ(back, g);
}

TEST(GraphIo, MissingFileThrows) {
  EXPECT_THROW(load_graph(temp_file("does_not_exist.graph")), GraphIoError);
}

TEST(Reals, NineSignificantDigits) {
  EXPECT_EQ(format_real(0.1), "0.1");
  EXPECT_EQ(format_real(1.0 / 3.0), "0.333333333");
  EXPECT_DOUBLE_EQ(parse_real(format_real(2.0 / 3.0)), quantize_real(2.0 / 3.0));
  EXPECT_THROW(parse_real("1.5x"), std::invalid_argument);
  EXPECT_THROW(parse_real(""), std::invalid_argument);
}

TEST(Validate, WellFormedGraphIsClean) {
  EXPECT_TRUE(validate(testing::path_graph(5)).empty());
}

TEST(Validate, LabelOutOfRange) {
  Graph g = testing::path_graph(5);
  g.labels[3] = g.num_classes;
  const auto v = validate(g);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0], "label_out_of_range node=3");
}

TEST(Validate, SplitOverlap) {
  Graph g = testing::path_graph(5);
  g.split.test.push_back(g.split.train[0]);
  EXPECT_TRUE(has_prefix(validate(g), "split_overlap"));
}

TEST(Validate, EdgeInvariants) {
  Graph g = testing::path_graph(5);
  g.edges.push_back({2, 2});
  g.edges.push_back({0, 1});
  g.edges.push_back({3, 1});
  g.edges.push_back({0, 9});
  const auto v = validate(g);
  EXPECT_TRUE(has_prefix(v, "self_loop"));
  EXPECT_TRUE(has_prefix(v, "duplicate_edge"));
  EXPECT_TRUE(has_prefix(v, "edge_not_ordered"));
  EXPECT_TRUE(has_prefix(v, "edge_out_of_range"));
}

TEST(Validate, ClassMissingFromTrain) {
  Graph g = testing::path_graph(5);
  g.split.train = {0};
  EXPECT_TRUE(has_prefix(validate(g), "class_missing_from_train"));
}

// Each corruption breaks exactly one invariant; validate must flag it, and
// the untouched graph must stay clean.
TEST(Validate, RandomCorruptionsAreDetected) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    Graph g = testing::random_graph(rng, 12, 2, 3, 0.3);
    ASSERT_TRUE(validate(g).empty());
    if (g.edges.empty()) continue;
    const int kind = static_cast<int>(rng() % 6);
    switch (kind) {
      case 0: g.labels[rng() % g.num_nodes] = g.num_classes + static_cast<Index>(rng() % 3); break;
      case 1: g.edges.push_back(g.edges[rng() % g.edges.size()]); break;
      case 2: { const Index u = static_cast<Index>(rng() % g.num_nodes); g.edges.push_back({u, u}); break; }
      case 3: g.edges.push_back({0, g.num_nodes + static_cast<Index>(rng() % 5)}); break;
      case 4: g.split.val.push_back(g.split.test.front()); break;
      case 5: g.features(rng() % g.num_nodes, 0) = std::numeric_limits<double>::quiet_NaN(); break;
    }
    EXPECT_FALSE(validate(g).empty()) << "corruption kind " << kind;
  }
}

TEST(WeightedDegrees, PathGraph) {
  const Graph g = testing::path_graph(3);
  EXPECT_EQ(weighted_degrees(g, EdgeWeights::ones(2)), (std::vector<double>{1, 2, 1}));
  EXPECT_EQ(weighted_degrees(g, EdgeWeights::zeros(2)), (std::vector<double>{0, 0, 0}));
}

TEST(WeightedDegrees, StarWithHalfWeights) {
  Graph g = testing::path_graph(4);
  g.edges = {{0, 1}, {0, 2}, {0, 3}};
  const auto d = weighted_degrees(g, EdgeWeights{{0.5, 0.5, 0.5}});
  EXPECT_DOUBLE_EQ(d[0], 1.5);
  EXPECT_DOUBLE_EQ(d[1], 0.5);
}

TEST(WeightedDegrees, LengthMismatchThrows) {
  EXPECT_THROW(weighted_degrees(testing::path_graph(3), EdgeWeights::ones(5)), std::invalid_argument);
}

TEST(WeightedDegrees, UnitWeightsMatchAdjacencyRowSums) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = testing::random_graph(rng, 5 + static_cast<Index>(rng() % 45), 1, 2, 0.15);
    const auto deg = weighted_degrees(g, EdgeWeights::ones(g.num_edges()));
    Matrix a = Matrix::Zero(g.num_nodes, g.num_nodes);
    for (const auto& e : g.edges) a(e.u, e.v) = a(e.v, e.u) = 1.0;
    for (Index i = 0; i < g.num_nodes; ++i) EXPECT_DOUBLE_EQ(deg[i], a.row(i).sum());
  }
}

TEST(Csr, NeighborsAreSymmetric) {
  const Graph g = testing::path_graph(4);
  const auto csr = CsrAdjacency::build(g);
  EXPECT_EQ(csr.degree(0), 1u);
  EXPECT_EQ(csr.degree(1), 2u);
  const auto n1 = csr.neighbors_of(1);
  EXPECT_TRUE(std::find(n1.begin(), n1.end(), 0) != n1.end());
  EXPECT_TRUE(std::find(n1.begin(), n1.end(), 2) != n1.end());
}

}  // namespace
}  // namespace rcl
