#include "rcl/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <unordered_set>

namespace rcl {

namespace {

std::uint64_t pair_key(Index u, Index v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v);
}

}  // namespace

Graph inject_edges(const Graph& g, const AttackSpec& spec) {
  if (!(spec.ratio >= 0.0) || !std::isfinite(spec.ratio)) {
    throw std::invalid_argument("attack ratio must be a finite value >= 0");
  }
  const auto m = static_cast<std::size_t>(std::llround(spec.ratio * static_cast<double>(g.num_edges())));
  const double n = g.num_nodes;
  const double free_pairs = n * (n - 1.0) / 2.0 - static_cast<double>(g.num_edges());
  if (static_cast<double>(m) > free_pairs) {
    throw std::invalid_argument("infeasible attack: " + std::to_string(m) + " edges requested but only " +
                                std::to_string(static_cast<long long>(free_pairs)) + " unlinked pairs");
  }

  Graph out = g;
  if (m == 0) return out;
  out.edges.reserve(g.num_edges() + m);
  std::mt19937_64 rng(spec.seed);
  std::unordered_set<std::uint64_t> linked;
  linked.reserve(2 * (g.num_edges() + m));
  for (const auto& e : g.edges) linked.insert(pair_key(e.u, e.v));

  if (static_cast<double>(m) <= 0.25 * free_pairs) {
    std::uniform_int_distribution<Index> node(0, g.num_nodes - 1);
    const std::size_t cap = 64 * m + 1024;
    std::size_t attempts = 0;
    while (out.edges.size() < g.num_edges() + m) {
      if (++attempts > cap) throw std::runtime_error("inject_edges: rejection sampling cap reached");
      Index u = node(rng);
      Index v = node(rng);
      if (u == v) continue;
      if (!linked.insert(pair_key(u, v)).second) continue;
      out.edges.push_back({std::min(u, v), std::max(u, v)});
    }
    return out;
  }

  // Dense regime: enumerate unlinked pairs, then a partial Fisher-Yates draw.
  std::vector<Edge> candidates;
  candidates.reserve(static_cast<std::size_t>(free_pairs));
  for (Index u = 0; u < g.num_nodes; ++u) {
    for (Index v = u + 1; v < g.num_nodes; ++v) {
      if (!linked.contains(pair_key(u, v))) candidates.push_back({u, v});
    }
  }
  for (std::size_t k = 0; k < m; ++k) {
    std::uniform_int_distribution<std::size_t> pick(k, candidates.size() - 1);
    std::swap(candidates[k], candidates[pick(rng)]);
    out.edges.push_back(candidates[k]);
  }
  return out;
}

}  // namespace rcl
