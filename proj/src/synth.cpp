#include "rcl/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace rcl {

std::string to_string(Difficulty d) {
  switch (d) {
    case Difficulty::kEasy:
      return "easy";
    case Difficulty::kMedium:
      return "medium";
    case Difficulty::kHard:
      return "hard";
  }
  return "unknown";
}

Difficulty difficulty_from_string(const std::string& s) {
  if (s == "easy") return Difficulty::kEasy;
  if (s == "medium") return Difficulty::kMedium;
  if (s == "hard") return Difficulty::kHard;
  throw std::invalid_argument("unknown difficulty '" + s + "'");
}

Index circular_class_distance(Index c1, Index c2, Index num_classes) {
  if (num_classes <= 0 || c1 < 0 || c2 < 0 || c1 >= num_classes || c2 >= num_classes) {
    throw std::out_of_range("class index out of range");
  }
  const Index diff = c1 > c2 ? c1 - c2 : c2 - c1;
  return std::min(diff, num_classes - diff);
}

Difficulty classify_edge(const Graph& g, const Edge& e) {
  const Index d = circular_class_distance(g.labels[e.u], g.labels[e.v], g.num_classes);
  if (d == 0) return Difficulty::kEasy;
  if (d == 1) return Difficulty::kMedium;
  return Difficulty::kHard;
}

EdgeDifficulty classify_edges(const Graph& g) {
  EdgeDifficulty out;
  out.per_edge.reserve(g.edges.size());
  for (const auto& e : g.edges) out.per_edge.push_back(classify_edge(g, e));
  return out;
}

namespace {

void check_params(const SynthParams& p) {
  if (p.num_classes < 2) throw std::invalid_argument("num_classes must be >= 2");
  if (p.num_nodes <= 0 || p.num_nodes % p.num_classes != 0) {
    throw std::invalid_argument("num_nodes must be a positive multiple of num_classes");
  }
  if (!(p.homo > 0.0 && p.homo <= 1.0)) throw std::invalid_argument("homo must lie in (0, 1]");
  if (!(p.avg_degree > 0.0)) throw std::invalid_argument("avg_degree must be positive");
  if (p.feature_dim < 2) throw std::invalid_argument("feature_dim must be >= 2");
  if (!(p.gaussian_spread > 0.0)) throw std::invalid_argument("gaussian_spread must be positive");
}

}  // namespace

SyntheticGraph generate(const SynthParams& p) {
  check_params(p);
  std::mt19937_64 rng(p.seed);
  const Index n = p.num_nodes;
  const Index classes = p.num_classes;
  const Index per_class = n / classes;

  Graph g;
  g.num_nodes = n;
  g.num_features = p.feature_dim;
  g.num_classes = classes;

  g.labels.resize(n);
  for (Index i = 0; i < n; ++i) g.labels[i] = i % classes;
  std::shuffle(g.labels.begin(), g.labels.end(), rng);
  std::vector<std::vector<Index>> members(classes);
  for (Index i = 0; i < n; ++i) members[g.labels[i]].push_back(i);

  // Class means on a ring in the first two coordinates; the rest is noise.
  std::normal_distribution<double> noise(0.0, 1.0);
  g.features.resize(n, p.feature_dim);
  for (Index i = 0; i < n; ++i) {
    const double angle = 2.0 * std::numbers::pi * g.labels[i] / classes;
    for (Index f = 0; f < p.feature_dim; ++f) {
      double x = noise(rng);
      if (f == 0) x += p.gaussian_spread * std::cos(angle);
      if (f == 1) x += p.gaussian_spread * std::sin(angle);
      g.features(i, f) = quantize_real(x);
    }
  }

  // Pair counts per circular distance d >= 1, weighted by exp(-d).
  const double s2 = static_cast<double>(per_class) * per_class;
  const Index max_d = classes / 2;
  std::vector<double> cross_weight(max_d + 1, 0.0);
  double cross_pairs = 0.0;
  for (Index d = 1; d <= max_d; ++d) {
    const double pairs = (2 * d == classes) ? 0.5 * classes * s2 : classes * s2;
    cross_pairs += pairs;
    cross_weight[d] = std::exp(-static_cast<double>(d)) * pairs;
  }
  const double same_pairs = classes * 0.5 * per_class * (per_class - 1.0);

  const auto num_edges = static_cast<std::size_t>(std::llround(n * p.avg_degree / 2.0));
  const double expected_same = p.homo * static_cast<double>(num_edges);
  const double expected_cross = static_cast<double>(num_edges) - expected_same;
  if (expected_same > 0.5 * same_pairs || expected_cross > 0.5 * cross_pairs) {
    throw std::invalid_argument("infeasible generator parameters: avg_degree too large for class sizes");
  }

  std::bernoulli_distribution same_class(p.homo);
  std::discrete_distribution<Index> pick_distance(cross_weight.begin(), cross_weight.end());
  std::uniform_int_distribution<Index> pick_class(0, classes - 1);
  std::uniform_int_distribution<Index> pick_member(0, per_class - 1);

  std::set<std::pair<Index, Index>> chosen;
  const std::size_t max_attempts = 100 * num_edges + 1000;
  std::size_t attempts = 0;
  while (chosen.size() < num_edges) {
    if (++attempts > max_attempts) {
      throw std::invalid_argument("infeasible generator parameters: edge sampling did not converge");
    }
    const Index c1 = pick_class(rng);
    Index c2 = c1;
    if (!same_class(rng)) c2 = (c1 + pick_distance(rng)) % classes;
    const Index a = members[c1][pick_member(rng)];
    const Index b = members[c2][pick_member(rng)];
    if (a == b) continue;
    chosen.emplace(std::min(a, b), std::max(a, b));
  }
  g.edges.reserve(num_edges);
  for (const auto& [u, v] : chosen) g.edges.push_back({u, v});

  std::vector<Index> order(n);
  for (Index i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  const Index third = n / 3;
  const Index sizes[3] = {third + (n % 3 > 0), third + (n % 3 > 1), third};
  auto from = order.begin();
  std::vector<Index>* parts[] = {&g.split.train, &g.split.val, &g.split.test};
  for (int k = 0; k < 3; ++k) {
    parts[k]->assign(from, from + sizes[k]);
    std::sort(parts[k]->begin(), parts[k]->end());
    from += sizes[k];
  }

  const auto violations = validate(g);
  if (!violations.empty()) {
    throw std::invalid_argument("generated graph is invalid (" + violations.front() +
                                "); increase num_nodes");
  }
  SyntheticGraph out{std::move(g), {}};
  out.difficulty = classify_edges(out.graph);
  return out;
}

double empirical_homophily(const Graph& g) {
  if (g.edges.empty()) throw std::invalid_argument("empirical_homophily: graph has no edges");
  std::size_t same = 0;
  for (const auto& e : g.edges) same += g.labels[e.u] == g.labels[e.v];
  return static_cast<double>(same) / static_cast<double>(g.edges.size());
}

std::vector<std::size_t> edge_counts_by_distance(const Graph& g) {
  std::vector<std::size_t> counts(g.num_classes / 2 + 1, 0);
  for (const auto& e : g.edges) {
    ++counts[circular_class_distance(g.labels[e.u], g.labels[e.v], g.num_classes)];
  }
  return counts;
}

void save_difficulty(const Graph& g, const EdgeDifficulty& d, const std::filesystem::path& path) {
  if (d.per_edge.size() != g.edges.size()) {
    throw std::invalid_argument("difficulty labels not aligned with edges");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw GraphIoError("cannot write difficulty file " + path.string());
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    out << g.edges[k].u << ' ' << g.edges[k].v << ' ' << to_string(d.per_edge[k]) << '\n';
  }
}

EdgeDifficulty load_difficulty(const Graph& g, const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw GraphIoError("cannot open difficulty file " + path.string());
  EdgeDifficulty d;
  std::string line;
  std::size_t ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream row(line);
    long long u = -1, v = -1;
    std::string label;
    if (!(row >> u >> v >> label)) throw GraphFormatError(ln, "malformed difficulty line");
    const std::size_t k = d.per_edge.size();
    if (k >= g.edges.size() || g.edges[k].u != u || g.edges[k].v != v) {
      throw GraphFormatError(ln, "difficulty line does not match edge order");
    }
    try {
      d.per_edge.push_back(difficulty_from_string(label));
    } catch (const std::invalid_argument& e) {
      throw GraphFormatError(ln, e.what());
    }
  }
  if (d.per_edge.size() != g.edges.size()) {
    throw GraphFormatError(ln, "difficulty file has " + std::to_string(d.per_edge.size()) +
                                   " lines, expected " + std::to_string(g.edges.size()));
  }
  return d;
}

}  // namespace rcl
