#include "rcl/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace rcl {

std::string to_string(PacingKind kind) { return kind == PacingKind::kLinear ? "linear" : "root"; }

std::string to_string(OrderingKind kind) {
  return kind == OrderingKind::kResidual ? "residual" : "random";
}

std::size_t pace_count(PacingKind kind, int t, int total, std::size_t num_edges) {
  if (total <= 0) throw std::invalid_argument("pace_count: total iterations must be positive");
  if (t < 0 || t > total) throw std::invalid_argument("pace_count: t outside [0, T]");
  double frac = static_cast<double>(t) / total;
  if (kind == PacingKind::kRoot) frac = std::sqrt(frac);
  return static_cast<std::size_t>(std::llround(frac * static_cast<double>(num_edges)));
}

std::vector<std::size_t> order_by_residual(const std::vector<double>& residuals) {
  std::vector<std::size_t> order(residuals.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return residuals[a] < residuals[b]; });
  return order;
}

std::vector<std::size_t> edge_ordering(const Graph& g, OrderingKind kind, const RclConfig& cfg) {
  if (kind == OrderingKind::kResidual) {
    return order_by_residual(pretrained_residuals(g, cfg.train_options()));
  }
  std::vector<std::size_t> order(g.num_edges());
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Offset so the shuffle stream differs from the weight-init stream of the same seed.
  std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

namespace {

class PacedStructure final : public StructureSchedule {
 public:
  PacedStructure(const std::vector<std::size_t>& ordering, PacingKind pacing, int total)
      : ordering_(ordering), pacing_(pacing), total_(total),
        w_(EdgeWeights::zeros(ordering.size())) {
    admit_up_to(1);
  }

  const EdgeWeights& weights() const override { return w_; }

  void advance(int epoch, const ForwardCache&, const LossResult&, double) override {
    if (epoch < total_) admit_up_to(epoch + 1);
  }

 private:
  void admit_up_to(int t) {
    const auto k = pace_count(pacing_, t, total_, ordering_.size());
    for (; admitted_ < k; ++admitted_) w_.values[ordering_[admitted_]] = 1.0;
  }

  const std::vector<std::size_t>& ordering_;
  PacingKind pacing_;
  int total_;
  EdgeWeights w_;
  std::size_t admitted_ = 0;
};

TrainedModel paced_run(const Graph& g, const RclConfig& cfg,
                       const std::vector<std::size_t>& ordering, PacingKind pacing,
                       GnnParams params) {
  if (ordering.size() != g.num_edges()) {
    throw std::invalid_argument("train_paced: ordering is not a permutation of the edges");
  }
  PacedStructure schedule(ordering, pacing, cfg.epochs);
  TrainOptions opts = cfg.train_options();
  opts.objective = ObjectiveConfig{};
  return run_training(g, std::move(params), opts, schedule);
}

}  // namespace

TrainedModel train_paced(const Graph& g, const RclConfig& cfg,
                         const std::vector<std::size_t>& ordering, PacingKind pacing) {
  cfg.validate();
  return paced_run(g, cfg, ordering, pacing,
                   init_params(g.num_features, cfg.hidden, g.num_classes, cfg.seed));
}

TrainedModel train_paced(const Graph& g, const RclConfig& cfg, OrderingKind ordering,
                         PacingKind pacing) {
  return train_paced(g, cfg, edge_ordering(g, ordering, cfg), pacing);
}

TrainedModel train_vanilla(const Graph& g, const RclConfig& cfg) {
  cfg.validate();
  return train_full_structure(g, cfg.train_options());
}

}  // namespace rcl
