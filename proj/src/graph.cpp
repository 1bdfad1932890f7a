#include "rcl/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <string_view>

namespace rcl {

std::string to_string(SplitKind kind) {
  switch (kind) {
    case SplitKind::kTrain:
      return "train";
    case SplitKind::kVal:
      return "val";
    case SplitKind::kTest:
      return "test";
  }
  return "unknown";
}

const std::vector<Index>& Graph::nodes_in(SplitKind kind) const {
  switch (kind) {
    case SplitKind::kTrain:
      return split.train;
    case SplitKind::kVal:
      return split.val;
    case SplitKind::kTest:
      break;
  }
  return split.test;
}

bool operator==(const Graph& a, const Graph& b) {
  return a.num_nodes == b.num_nodes && a.num_features == b.num_features &&
         a.num_classes == b.num_classes && a.features.rows() == b.features.rows() &&
         a.features.cols() == b.features.cols() && a.features == b.features &&
         a.labels == b.labels && a.edges == b.edges && a.split == b.split;
}

CsrAdjacency CsrAdjacency::build(const Graph& g) {
  CsrAdjacency csr;
  const auto n = static_cast<std::size_t>(g.num_nodes);
  csr.offsets.assign(n + 1, 0);
  for (const auto& e : g.edges) {
    ++csr.offsets[e.u + 1];
    ++csr.offsets[e.v + 1];
  }
  for (std::size_t i = 0; i < n; ++i) csr.offsets[i + 1] += csr.offsets[i];
  csr.neighbors.resize(2 * g.edges.size());
  csr.edge_ids.resize(2 * g.edges.size());
  std::vector<std::size_t> cursor(csr.offsets.begin(), csr.offsets.end() - 1);
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    const auto [u, v] = g.edges[k];
    csr.neighbors[cursor[u]] = v;
    csr.edge_ids[cursor[u]++] = static_cast<Index>(k);
    csr.neighbors[cursor[v]] = u;
    csr.edge_ids[cursor[v]++] = static_cast<Index>(k);
  }
  return csr;
}

std::vector<std::string> validate(const Graph& g) {
  std::vector<std::string> out;
  const Index n = g.num_nodes;
  if (n < 0 || g.num_features < 0 || g.num_classes <= 0) {
    out.emplace_back("bad_dimensions");
    return out;
  }
  if (g.features.rows() != n || g.features.cols() != g.num_features) {
    out.emplace_back("feature_shape_mismatch");
  } else if (!g.features.allFinite()) {
    out.emplace_back("non_finite_feature");
  }
  if (static_cast<Index>(g.labels.size()) != n) {
    out.emplace_back("label_count_mismatch");
  } else {
    for (Index i = 0; i < n; ++i) {
      if (g.labels[i] < 0 || g.labels[i] >= g.num_classes) {
        out.push_back("label_out_of_range node=" + std::to_string(i));
      }
    }
  }

  std::set<std::pair<Index, Index>> seen;
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    const auto [u, v] = g.edges[k];
    const std::string at = " edge=" + std::to_string(k);
    if (u < 0 || v < 0 || u >= n || v >= n) {
      out.push_back("edge_out_of_range" + at);
      continue;
    }
    if (u == v) {
      out.push_back("self_loop" + at);
      continue;
    }
    if (u > v) out.push_back("edge_not_ordered" + at);
    if (!seen.emplace(std::min(u, v), std::max(u, v)).second) {
      out.push_back("duplicate_edge" + at);
    }
  }

  std::vector<int> owner(std::max<Index>(n, 0), -1);
  const std::vector<Index>* parts[] = {&g.split.train, &g.split.val, &g.split.test};
  for (int p = 0; p < 3; ++p) {
    for (Index i : *parts[p]) {
      if (i < 0 || i >= n) {
        out.push_back("split_out_of_range node=" + std::to_string(i));
        continue;
      }
      if (owner[i] != -1) {
        out.push_back("split_overlap node=" + std::to_string(i));
        continue;
      }
      owner[i] = p;
    }
  }

  if (static_cast<Index>(g.labels.size()) == n) {
    std::vector<bool> present(g.num_classes, false);
    for (Index i : g.split.train) {
      if (i >= 0 && i < n && g.labels[i] >= 0 && g.labels[i] < g.num_classes) {
        present[g.labels[i]] = true;
      }
    }
    for (Index c = 0; c < g.num_classes; ++c) {
      if (!present[c]) out.push_back("class_missing_from_train class=" + std::to_string(c));
    }
  }
  return out;
}

void require_valid(const Graph& g) {
  const auto violations = validate(g);
  if (!violations.empty()) {
    throw std::invalid_argument("invalid graph: " + violations.front());
  }
}

std::string format_real(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 9);
  return std::string(buf, res.ptr);
}

double quantize_real(double value) {
  const std::string s = format_real(value);
  double out = 0.0;
  std::from_chars(s.data(), s.data() + s.size(), out);
  return out;
}

double parse_real(std::string_view token) {
  auto tok = token;
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw std::invalid_argument("malformed real '" + std::string(token) + "'");
  }
  return value;
}

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

std::vector<std::string_view> tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view tok, std::size_t line, const char* what) {
  T value{};
  // from_chars rejects a leading '+', which some writers emit.
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw GraphFormatError(line, std::string("malformed ") + what + " '" + std::string(tok) + "'");
  }
  return value;
}

}  // namespace

Graph parse_graph(const std::string& text) {
  const auto lines = split_lines(text);
  auto line_at = [&](std::size_t idx) -> std::string_view {
    if (idx >= lines.size()) {
      throw GraphFormatError(idx + 1, "unexpected end of file");
    }
    return lines[idx];
  };

  Graph g;
  const auto header = tokens(line_at(0));
  if (header.size() != 4) throw GraphFormatError(1, "malformed header, expected 'N b C E'");
  const auto n = parse_number<long long>(header[0], 1, "header");
  const auto b = parse_number<long long>(header[1], 1, "header");
  const auto c = parse_number<long long>(header[2], 1, "header");
  const auto m = parse_number<long long>(header[3], 1, "header");
  if (n < 0 || b < 0 || c <= 0 || m < 0) throw GraphFormatError(1, "malformed header, negative size");
  g.num_nodes = static_cast<Index>(n);
  g.num_features = static_cast<Index>(b);
  g.num_classes = static_cast<Index>(c);

  g.features.resize(n, b);
  for (Index i = 0; i < g.num_nodes; ++i) {
    const std::size_t ln = 2 + static_cast<std::size_t>(i);
    const auto toks = tokens(line_at(ln - 1));
    if (static_cast<long long>(toks.size()) != b) {
      throw GraphFormatError(ln, "expected " + std::to_string(b) + " features");
    }
    for (Index f = 0; f < g.num_features; ++f) {
      g.features(i, f) = parse_number<double>(toks[f], ln, "feature");
    }
  }

  const std::size_t label_line = static_cast<std::size_t>(n) + 2;
  {
    const auto toks = tokens(line_at(label_line - 1));
    if (static_cast<long long>(toks.size()) != n) {
      throw GraphFormatError(label_line, "expected " + std::to_string(n) + " labels");
    }
    g.labels.reserve(n);
    for (Index i = 0; i < g.num_nodes; ++i) {
      const auto y = parse_number<long long>(toks[i], label_line, "label");
      if (y < 0 || y >= c) {
        throw GraphFormatError(label_line, "label_out_of_range node=" + std::to_string(i));
      }
      g.labels.push_back(static_cast<Index>(y));
    }
  }

  std::vector<int> owner(n, -1);
  std::vector<Index>* parts[] = {&g.split.train, &g.split.val, &g.split.test};
  for (int p = 0; p < 3; ++p) {
    const std::size_t ln = label_line + 1 + p;
    for (auto tok : tokens(line_at(ln - 1))) {
      const auto i = parse_number<long long>(tok, ln, "node index");
      if (i < 0 || i >= n) throw GraphFormatError(ln, "split_out_of_range node=" + std::to_string(i));
      if (owner[i] != -1) throw GraphFormatError(ln, "split_overlap node=" + std::to_string(i));
      owner[i] = p;
      parts[p]->push_back(static_cast<Index>(i));
    }
  }

  std::set<std::pair<Index, Index>> seen;
  const std::size_t first_edge_line = label_line + 4;
  g.edges.reserve(m);
  for (long long k = 0; k < m; ++k) {
    const std::size_t ln = first_edge_line + static_cast<std::size_t>(k);
    const auto toks = tokens(line_at(ln - 1));
    if (toks.size() != 2) throw GraphFormatError(ln, "malformed edge, expected 'u v'");
    const auto u = parse_number<long long>(toks[0], ln, "edge endpoint");
    const auto v = parse_number<long long>(toks[1], ln, "edge endpoint");
    if (u < 0 || v < 0 || u >= n || v >= n) throw GraphFormatError(ln, "edge_out_of_range");
    if (u == v) throw GraphFormatError(ln, "self_loop");
    if (u > v) throw GraphFormatError(ln, "edge_not_ordered, expected u < v");
    if (!seen.emplace(static_cast<Index>(u), static_cast<Index>(v)).second) {
      throw GraphFormatError(ln, "duplicate_edge");
    }
    g.edges.push_back({static_cast<Index>(u), static_cast<Index>(v)});
  }
  for (std::size_t extra = first_edge_line - 1 + static_cast<std::size_t>(m); extra < lines.size(); ++extra) {
    if (!tokens(lines[extra]).empty()) throw GraphFormatError(extra + 1, "trailing content after edges");
  }

  const auto violations = validate(g);
  if (!violations.empty()) throw GraphFormatError(label_line + 1, violations.front());
  return g;
}

std::string format_graph(const Graph& g) {
  std::string out;
  out.reserve(static_cast<std::size_t>(g.num_nodes) * g.num_features * 14 + g.edges.size() * 12 + 64);
  auto append_indices = [&out](const std::vector<Index>& idx) {
    for (std::size_t k = 0; k < idx.size(); ++k) {
      if (k) out += ' ';
      out += std::to_string(idx[k]);
    }
    out += '\n';
  };
  out += std::to_string(g.num_nodes) + ' ' + std::to_string(g.num_features) + ' ' +
         std::to_string(g.num_classes) + ' ' + std::to_string(g.edges.size()) + '\n';
  for (Index i = 0; i < g.num_nodes; ++i) {
    for (Index f = 0; f < g.num_features; ++f) {
      if (f) out += ' ';
      out += format_real(g.features(i, f));
    }
    out += '\n';
  }
  append_indices(g.labels);
  append_indices(g.split.train);
  append_indices(g.split.val);
  append_indices(g.split.test);
  for (const auto& e : g.edges) {
    out += std::to_string(e.u) + ' ' + std::to_string(e.v) + '\n';
  }
  return out;
}

Graph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw GraphIoError("cannot open graph file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_graph(buf.str());
}

void save_graph(const Graph& g, const std::filesystem::path& path) {
  require_valid(g);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw GraphIoError("cannot write graph file " + path.string());
  const auto text = format_graph(g);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw GraphIoError("write failed for " + path.string());
}

std::vector<double> weighted_degrees(const Graph& g, const EdgeWeights& w) {
  if (w.size() != g.edges.size()) {
    throw std::invalid_argument("edge weights length " + std::to_string(w.size()) +
                                " does not match edge count " + std::to_string(g.edges.size()));
  }
  std::vector<double> deg(g.num_nodes, 0.0);
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    deg[g.edges[k].u] += w.values[k];
    deg[g.edges[k].v] += w.values[k];
  }
  return deg;
}

}  // namespace rcl
