#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "rcl/graph.hpp"

namespace rcl {

inline double logistic(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// Embeddings fed to the kernel: optionally L2-normalized rows times sqrt(scale),
// so the kernel argument becomes scale * cosine similarity.
struct DecoderConfig {
  bool normalize = true;
  double scale = 1.0;
};

Matrix decoder_embeddings(const Matrix& z, const DecoderConfig& cfg);

/// Inner-product kernel: reconstructed edge value sigmoid(z_u . z_v) per stored edge.
std::vector<double> decode(const Matrix& z, std::span<const Edge> edges);

/// Squared mismatch against the input adjacency, which is 1 on every stored edge.
std::vector<double> residuals(std::span<const double> reconstructed);

/// residuals(decode(decoder_embeddings(z, cfg), edges))
std::vector<double> edge_residuals(const Matrix& z, std::span<const Edge> edges,
                                   const DecoderConfig& cfg);

}  // namespace rcl
