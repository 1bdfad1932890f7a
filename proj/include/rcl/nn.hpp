#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rcl/decoder.hpp"
#include "rcl/graph.hpp"

namespace rcl {

// Sparse symmetric N x N matrix in CSR form, self-loops included.
struct PropagationMatrix {
  std::vector<std::size_t> offsets;
  std::vector<Index> cols;
  std::vector<double> values;

  Index size() const { return static_cast<Index>(offsets.size()) - 1; }
  double at(Index i, Index j) const;
  Matrix to_dense() const;
};

/// D^-1/2 (W + I) D^-1/2 with W the symmetric weighted adjacency and D the
/// self-loop-augmented weighted degrees.
PropagationMatrix normalize(const Graph& g, const EdgeWeights& w);
PropagationMatrix normalize(const CsrAdjacency& adj, const EdgeWeights& w);

/// out = P * dense
Matrix propagate(const PropagationMatrix& p, const Matrix& dense);

// Two-layer graph convolution: Z = relu(P X W0), logits = P Z W1.
struct GnnParams {
  Matrix w0;  // b x h
  Matrix w1;  // h x C
  Matrix m0, v0, m1, v1;
  std::int64_t step = 0;

  Index input_dim() const { return static_cast<Index>(w0.rows()); }
  Index hidden_dim() const { return static_cast<Index>(w0.cols()); }
  Index num_classes() const { return static_cast<Index>(w1.cols()); }
};

/// Glorot-uniform weights and zeroed optimizer moments.
GnnParams init_params(Index input_dim, Index hidden_dim, Index num_classes, std::uint64_t seed);

struct ForwardCache {
  Matrix px;          // P X
  Matrix pre;         // P X W0
  Matrix z;           // relu(pre), the node embeddings
  Matrix pz;          // P Z
  Matrix logits;      // P Z W1
};

ForwardCache forward(const GnnParams& p, const Matrix& x, const PropagationMatrix& prop);

struct Gradients {
  Matrix w0;
  Matrix w1;
};

struct ObjectiveConfig {
  double beta = 0.0;
  bool recon_in_wstep = true;
  DecoderConfig decoder;
};

struct LossResult {
  double total = 0.0;
  double classification = 0.0;   // mean cross-entropy over training nodes
  double reconstruction = 0.0;   // sum over edges of mask * residual
  std::vector<double> node_losses;  // aligned with Graph::split.train
  Gradients grads;
};

/// Mean training cross-entropy plus beta * sum_e mask_e * (sigmoid(e_u . e_v) - 1)^2
/// where e = decoder_embeddings(Z),
/// with exact gradients. `mask` is aligned with g.edges; it may be empty when
/// the reconstruction term is disabled (beta == 0 or !recon_in_wstep).
LossResult loss_and_grads(const GnnParams& p, const Graph& g, const ForwardCache& cache,
                          const PropagationMatrix& prop, std::span<const double> mask,
                          const ObjectiveConfig& cfg);

LossResult loss_and_grads(const GnnParams& p, const Graph& g, const PropagationMatrix& prop,
                          std::span<const double> mask, const ObjectiveConfig& cfg);

struct AdamConfig {
  double lr = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// One bias-corrected adaptive-moment update in place.
void adam_step(GnnParams& p, const Gradients& grads, const AdamConfig& cfg);

/// Row-wise softmax probabilities.
Matrix softmax_rows(const Matrix& logits);

/// Fraction of nodes in `split` whose argmax logit (lowest index on ties)
/// equals the label.
double accuracy(const Matrix& logits, const Graph& g, SplitKind split);

}  // namespace rcl
