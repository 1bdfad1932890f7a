#include "rcl/nn.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "rcl/decoder.hpp"

namespace rcl {

double PropagationMatrix::at(Index i, Index j) const {
  for (std::size_t s = offsets[i]; s < offsets[i + 1]; ++s) {
    if (cols[s] == j) return values[s];
  }
  return 0.0;
}

Matrix PropagationMatrix::to_dense() const {
  const Index n = size();
  Matrix dense = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (std::size_t s = offsets[i]; s < offsets[i + 1]; ++s) dense(i, cols[s]) = values[s];
  }
  return dense;
}

PropagationMatrix normalize(const Graph& g, const EdgeWeights& w) {
  return normalize(CsrAdjacency::build(g), w);
}

PropagationMatrix normalize(const CsrAdjacency& adj, const EdgeWeights& w) {
  if (w.size() * 2 != adj.neighbors.size()) {
    throw std::invalid_argument("edge weights not aligned with adjacency");
  }
  const Index n = adj.num_nodes();
  std::vector<double> inv_sqrt_deg(n);
  for (Index i = 0; i < n; ++i) {
    double d = 1.0;
    for (Index k : adj.edge_ids_of(i)) d += w.values[k];
    inv_sqrt_deg[i] = 1.0 / std::sqrt(d);
  }

  PropagationMatrix p;
  p.offsets.resize(n + 1);
  p.cols.reserve(adj.neighbors.size() + n);
  p.values.reserve(adj.neighbors.size() + n);
  p.offsets[0] = 0;
  for (Index i = 0; i < n; ++i) {
    const auto nbrs = adj.neighbors_of(i);
    const auto ids = adj.edge_ids_of(i);
    p.cols.push_back(i);
    p.values.push_back(inv_sqrt_deg[i] * inv_sqrt_deg[i]);
    for (std::size_t s = 0; s < nbrs.size(); ++s) {
      const double wk = w.values[ids[s]];
      if (wk == 0.0) continue;
      p.cols.push_back(nbrs[s]);
      p.values.push_back(wk * inv_sqrt_deg[i] * inv_sqrt_deg[nbrs[s]]);
    }
    p.offsets[i + 1] = p.cols.size();
  }
  return p;
}

Matrix propagate(const PropagationMatrix& p, const Matrix& dense) {
  const Index n = p.size();
  if (dense.rows() != n) throw std::invalid_argument("propagate: row count mismatch");
  Matrix out = Matrix::Zero(n, dense.cols());
  for (Index i = 0; i < n; ++i) {
    auto row = out.row(i);
    for (std::size_t s = p.offsets[i]; s < p.offsets[i + 1]; ++s) {
      row.noalias() += p.values[s] * dense.row(p.cols[s]);
    }
  }
  return out;
}

GnnParams init_params(Index input_dim, Index hidden_dim, Index num_classes, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto glorot = [&rng](Index fan_in, Index fan_out) {
    const double a = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    std::uniform_real_distribution<double> dist(-a, a);
    Matrix m(fan_in, fan_out);
    for (Index r = 0; r < fan_in; ++r) {
      for (Index c = 0; c < fan_out; ++c) m(r, c) = dist(rng);
    }
    return m;
  };
  GnnParams p;
  p.w0 = glorot(input_dim, hidden_dim);
  p.w1 = glorot(hidden_dim, num_classes);
  p.m0 = Matrix::Zero(input_dim, hidden_dim);
  p.v0 = Matrix::Zero(input_dim, hidden_dim);
  p.m1 = Matrix::Zero(hidden_dim, num_classes);
  p.v1 = Matrix::Zero(hidden_dim, num_classes);
  return p;
}

ForwardCache forward(const GnnParams& p, const Matrix& x, const PropagationMatrix& prop) {
  if (x.cols() != p.w0.rows() || p.w0.cols() != p.w1.rows() || x.rows() != prop.size()) {
    throw std::invalid_argument("forward: shape mismatch");
  }
  if (!x.allFinite() || !p.w0.allFinite() || !p.w1.allFinite()) {
    throw std::domain_error("forward: non-finite input");
  }
  ForwardCache c;
  c.px = propagate(prop, x);
  c.pre.noalias() = c.px * p.w0;
  c.z = c.pre.cwiseMax(0.0);
  c.pz = propagate(prop, c.z);
  c.logits.noalias() = c.pz * p.w1;
  return c;
}

Matrix softmax_rows(const Matrix& logits) {
  Matrix out(logits.rows(), logits.cols());
  for (Index i = 0; i < logits.rows(); ++i) {
    const double mx = logits.row(i).maxCoeff();
    double sum = 0.0;
    for (Index c = 0; c < logits.cols(); ++c) {
      out(i, c) = std::exp(logits(i, c) - mx);
      sum += out(i, c);
    }
    out.row(i) /= sum;
  }
  return out;
}

LossResult loss_and_grads(const GnnParams& p, const Graph& g, const ForwardCache& cache,
                          const PropagationMatrix& prop, std::span<const double> mask,
                          const ObjectiveConfig& cfg) {
  const auto& train = g.split.train;
  if (train.empty()) throw std::invalid_argument("loss_and_grads: empty training split");
  const Index classes = static_cast<Index>(cache.logits.cols());
  const double inv_n = 1.0 / static_cast<double>(train.size());

  LossResult res;
  res.node_losses.resize(train.size());
  Matrix dlogits = Matrix::Zero(cache.logits.rows(), classes);
  for (std::size_t t = 0; t < train.size(); ++t) {
    const Index i = train[t];
    const auto row = cache.logits.row(i);
    const double mx = row.maxCoeff();
    double sum = 0.0;
    for (Index c = 0; c < classes; ++c) sum += std::exp(row(c) - mx);
    const double lse = mx + std::log(sum);
    res.node_losses[t] = lse - row(g.labels[i]);
    res.classification += res.node_losses[t];
    for (Index c = 0; c < classes; ++c) dlogits(i, c) = std::exp(row(c) - lse) * inv_n;
    dlogits(i, g.labels[i]) -= inv_n;
  }
  res.classification *= inv_n;

  res.grads.w1.noalias() = cache.pz.transpose() * dlogits;
  Matrix dpz;
  dpz.noalias() = dlogits * p.w1.transpose();
  Matrix dz = propagate(prop, dpz);  // P is symmetric

  const bool with_recon = cfg.recon_in_wstep && cfg.beta != 0.0;
  if (with_recon) {
    if (mask.size() != g.edges.size()) {
      throw std::invalid_argument("loss_and_grads: mask not aligned with edges");
    }
    const Matrix emb = decoder_embeddings(cache.z, cfg.decoder);
    Matrix demb = Matrix::Zero(emb.rows(), emb.cols());
    for (std::size_t k = 0; k < g.edges.size(); ++k) {
      if (mask[k] == 0.0) continue;
      const auto [u, v] = g.edges[k];
      const double a = logistic(emb.row(u).dot(emb.row(v)));
      res.reconstruction += mask[k] * (a - 1.0) * (a - 1.0);
      const double coef = cfg.beta * mask[k] * 2.0 * (a - 1.0) * a * (1.0 - a);
      demb.row(u).noalias() += coef * emb.row(v);
      demb.row(v).noalias() += coef * emb.row(u);
    }
    const double root = std::sqrt(cfg.decoder.scale);
    if (!cfg.decoder.normalize) {
      dz += root * demb;
    } else {
      // e = root * z / |z|  =>  dz = root / |z| * (de - (de . u) u), u = z / |z|
      for (Index i = 0; i < cache.z.rows(); ++i) {
        const double norm = cache.z.row(i).norm();
        if (norm == 0.0) continue;
        const auto unit = cache.z.row(i) / norm;
        const double along = demb.row(i).dot(unit);
        dz.row(i).noalias() += (root / norm) * (demb.row(i) - along * unit);
      }
    }
  }
  res.total = res.classification + (with_recon ? cfg.beta * res.reconstruction : 0.0);

  const Matrix dpre = (cache.pre.array() > 0.0).select(dz, 0.0);
  res.grads.w0.noalias() = cache.px.transpose() * dpre;
  return res;
}

LossResult loss_and_grads(const GnnParams& p, const Graph& g, const PropagationMatrix& prop,
                          std::span<const double> mask, const ObjectiveConfig& cfg) {
  return loss_and_grads(p, g, forward(p, g.features, prop), prop, mask, cfg);
}

void adam_step(GnnParams& p, const Gradients& grads, const AdamConfig& cfg) {
  if (grads.w0.rows() != p.w0.rows() || grads.w0.cols() != p.w0.cols() ||
      grads.w1.rows() != p.w1.rows() || grads.w1.cols() != p.w1.cols()) {
    throw std::invalid_argument("adam_step: gradient shape mismatch");
  }
  if (!grads.w0.allFinite() || !grads.w1.allFinite()) {
    throw std::domain_error("adam_step: non-finite gradient");
  }
  ++p.step;
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(p.step));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(p.step));
  auto update = [&](Matrix& w, Matrix& m, Matrix& v, const Matrix& grad) {
    m = cfg.beta1 * m + (1.0 - cfg.beta1) * grad;
    v = cfg.beta2 * v + (1.0 - cfg.beta2) * grad.cwiseProduct(grad);
    w.array() -= cfg.lr * (m.array() / bc1) / ((v.array() / bc2).sqrt() + cfg.eps);
  };
  update(p.w0, p.m0, p.v0, grads.w0);
  update(p.w1, p.m1, p.v1, grads.w1);
}

double accuracy(const Matrix& logits, const Graph& g, SplitKind split) {
  const auto& nodes = g.nodes_in(split);
  if (nodes.empty()) throw std::invalid_argument("accuracy: empty " + to_string(split) + " split");
  std::size_t correct = 0;
  for (Index i : nodes) {
    Index best = 0;
    for (Index c = 1; c < logits.cols(); ++c) {
      if (logits(i, c) > logits(i, best)) best = c;
    }
    correct += best == g.labels[i];
  }
  return static_cast<double>(correct) / static_cast<double>(nodes.size());
}

}  // namespace rcl
