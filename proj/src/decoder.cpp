#include "rcl/decoder.hpp"

namespace rcl {

Matrix decoder_embeddings(const Matrix& z, const DecoderConfig& cfg) {
  const double root = std::sqrt(cfg.scale);
  if (!cfg.normalize) return cfg.scale == 1.0 ? z : Matrix(root * z);
  Matrix out = z;
  for (Index i = 0; i < out.rows(); ++i) {
    const double norm = out.row(i).norm();
    if (norm > 0.0) out.row(i) *= root / norm;
  }
  return out;
}

std::vector<double> decode(const Matrix& z, std::span<const Edge> edges) {
  std::vector<double> out(edges.size());
  for (std::size_t k = 0; k < edges.size(); ++k) {
    out[k] = logistic(z.row(edges[k].u).dot(z.row(edges[k].v)));
  }
  return out;
}

std::vector<double> residuals(std::span<const double> reconstructed) {
  std::vector<double> out(reconstructed.size());
  for (std::size_t k = 0; k < reconstructed.size(); ++k) {
    const double diff = reconstructed[k] - 1.0;
    out[k] = diff * diff;
  }
  return out;
}

std::vector<double> edge_residuals(const Matrix& z, std::span<const Edge> edges,
                                   const DecoderConfig& cfg) {
  return residuals(decode(decoder_embeddings(z, cfg), edges));
}

}  // namespace rcl
