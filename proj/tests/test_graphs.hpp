#pragma once

#include <random>
#include <set>
#include <vector>

#include "rcl/graph.hpp"

namespace rcl::testing {

// Two-class path 0-1-...-(n-1) with labels alternating and one node of each
// class in the training split.
inline Graph path_graph(Index n, Index features = 1) {
  Graph g;
  g.num_nodes = n;
  g.num_features = features;
  g.num_classes = 2;
  g.features = Matrix::Zero(n, features);
  for (Index i = 0; i < n; ++i) {
    g.labels.push_back(i % 2);
    for (Index f = 0; f < features; ++f) g.features(i, f) = 0.25 * (i + 1) - 0.5 * f;
  }
  for (Index i = 0; i + 1 < n; ++i) g.edges.push_back({i, i + 1});
  g.split.train = {0, 1};
  for (Index i = 2; i < n; ++i) (i % 2 ? g.split.val : g.split.test).push_back(i);
  return g;
}

// Random valid graph; every class appears in the training split.
inline Graph random_graph(std::mt19937_64& rng, Index n, Index features, Index classes,
                          double edge_prob) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  Graph g;
  g.num_nodes = n;
  g.num_features = features;
  g.num_classes = classes;
  g.features = Matrix(n, features);
  for (Index i = 0; i < n; ++i) {
    for (Index f = 0; f < features; ++f) g.features(i, f) = normal(rng);
  }
  for (Index i = 0; i < n; ++i) g.labels.push_back(i < classes ? i : static_cast<Index>(rng() % classes));
  for (Index u = 0; u < n; ++u) {
    for (Index v = u + 1; v < n; ++v) {
      if (unit(rng) < edge_prob) g.edges.push_back({u, v});
    }
  }
  // Requires n >= classes + 2.
  for (Index i = 0; i < n; ++i) {
    if (i < classes) {
      g.split.train.push_back(i);
    } else if (i == classes) {
      g.split.val.push_back(i);
    } else if (i == classes + 1) {
      g.split.test.push_back(i);
    } else {
      const auto r = rng() % 3;
      (r == 0 ? g.split.train : r == 1 ? g.split.val : g.split.test).push_back(i);
    }
  }
  return g;
}

}  // namespace rcl::testing
