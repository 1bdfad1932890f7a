#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rcl/graph.hpp"
#include "rcl/nn.hpp"

namespace rcl {

struct TrainOptions {
  int epochs = 300;
  double lr = 0.01;
  Index hidden = 64;
  std::uint64_t seed = 0;
  ObjectiveConfig objective;
};

struct RunMetrics {
  double best_val_acc = 0.0;
  double test_acc = 0.0;  // at the best-validation epoch
  int best_epoch = 0;     // 1-based
  double final_val_acc = 0.0;
  double final_test_acc = 0.0;
  double wall_time_s = 0.0;
  double mean_epoch_time_s = 0.0;
  std::vector<double> train_loss;  // mean training cross-entropy per epoch
};

struct TrainedModel {
  GnnParams params;       // snapshot at the best-validation epoch
  EdgeWeights weights;    // structure the snapshot was evaluated with
  RunMetrics metrics;
};

// Supplies the per-epoch training structure to run_training.
class StructureSchedule {
 public:
  virtual ~StructureSchedule() = default;
  // Structure for the upcoming epoch.
  virtual const EdgeWeights& weights() const = 0;
  // Mask multiplying the reconstruction term; empty when unused.
  virtual std::span<const double> recon_mask() const { return {}; }
  // Called after the epoch's forward pass and optimizer step.
  virtual void advance(int epoch, const ForwardCache& cache, const LossResult& loss,
                       double val_acc) = 0;
};

// Full structure with unit weights.
class FullStructure final : public StructureSchedule {
 public:
  explicit FullStructure(std::size_t num_edges) : w_(EdgeWeights::ones(num_edges)) {}
  const EdgeWeights& weights() const override { return w_; }
  void advance(int, const ForwardCache&, const LossResult&, double) override {}

 private:
  EdgeWeights w_;
};

/// Full-batch training: one forward, one backward and one Adam step per
/// epoch, with best-validation snapshotting. Epochs are numbered from 1.
TrainedModel run_training(const Graph& g, GnnParams params, const TrainOptions& opts,
                          StructureSchedule& schedule);

/// Vanilla backbone on the full structure, Glorot init from opts.seed.
TrainedModel train_full_structure(const Graph& g, const TrainOptions& opts);

}  // namespace rcl
