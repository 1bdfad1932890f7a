#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace rcl {

using Index = std::int32_t;
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Undirected edge stored once with u < v.
struct Edge {
  Index u = 0;
  Index v = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct Split {
  std::vector<Index> train;
  std::vector<Index> val;
  std::vector<Index> test;

  friend bool operator==(const Split&, const Split&) = default;
};

enum class SplitKind { kTrain, kVal, kTest };

std::string to_string(SplitKind kind);

// Attributed, labeled, undirected graph with a node split. Treated as
// immutable once built; consumers share it by const reference.
struct Graph {
  Index num_nodes = 0;
  Index num_features = 0;
  Index num_classes = 0;
  Matrix features;  // num_nodes x num_features
  std::vector<Index> labels;
  std::vector<Edge> edges;
  Split split;

  std::size_t num_edges() const { return edges.size(); }
  const std::vector<Index>& nodes_in(SplitKind kind) const;

  friend bool operator==(const Graph& a, const Graph& b);
};

// Per-edge weights aligned with Graph::edges, each in [0,1].
struct EdgeWeights {
  std::vector<double> values;

  static EdgeWeights ones(std::size_t num_edges) {
    return EdgeWeights{std::vector<double>(num_edges, 1.0)};
  }
  static EdgeWeights zeros(std::size_t num_edges) {
    return EdgeWeights{std::vector<double>(num_edges, 0.0)};
  }
  std::size_t size() const { return values.size(); }
};

// Symmetric neighbor view: every stored edge appears in both endpoint rows.
// edge_ids maps each slot back to its index in Graph::edges.
struct CsrAdjacency {
  std::vector<std::size_t> offsets;  // num_nodes + 1
  std::vector<Index> neighbors;
  std::vector<Index> edge_ids;

  static CsrAdjacency build(const Graph& g);

  Index num_nodes() const { return static_cast<Index>(offsets.size()) - 1; }
  std::size_t degree(Index i) const { return offsets[i + 1] - offsets[i]; }
  std::span<const Index> neighbors_of(Index i) const {
    return {neighbors.data() + offsets[i], degree(i)};
  }
  std::span<const Index> edge_ids_of(Index i) const {
    return {edge_ids.data() + offsets[i], degree(i)};
  }
};

class GraphFormatError : public std::runtime_error {
 public:
  GraphFormatError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class GraphIoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Lists every violated invariant as "<kind> <detail>". Empty iff valid.
std::vector<std::string> validate(const Graph& g);

/// Throws std::invalid_argument carrying the first violation, if any.
void require_valid(const Graph& g);

Graph load_graph(const std::filesystem::path& path);
void save_graph(const Graph& g, const std::filesystem::path& path);

// Text forms used by load/save; exposed for in-memory round trips.
Graph parse_graph(const std::string& text);
std::string format_graph(const Graph& g);

/// Formats a real with 9 significant digits, locale-independent.
std::string format_real(double value);
/// Locale-independent parse of a full token; throws std::invalid_argument.
double parse_real(std::string_view token);
/// Rounds a value to what format_real followed by parsing would yield.
double quantize_real(double value);

std::vector<double> weighted_degrees(const Graph& g, const EdgeWeights& w);

}  // namespace rcl
