#include "rcl/training.hpp"

#include <chrono>
#include <stdexcept>

namespace rcl {

TrainedModel run_training(const Graph& g, GnnParams params, const TrainOptions& opts,
                          StructureSchedule& schedule) {
  if (opts.epochs <= 0) throw std::invalid_argument("epochs must be positive");
  const auto adj = CsrAdjacency::build(g);
  const AdamConfig adam{.lr = opts.lr};

  TrainedModel best;
  best.metrics.best_val_acc = -1.0;
  best.metrics.train_loss.reserve(opts.epochs);

  const auto start = std::chrono::steady_clock::now();
  for (int epoch = 1; epoch <= opts.epochs; ++epoch) {
    const EdgeWeights& w = schedule.weights();
    const auto prop = normalize(adj, w);
    const auto cache = forward(params, g.features, prop);
    auto loss = loss_and_grads(params, g, cache, prop, schedule.recon_mask(), opts.objective);

    const double val = accuracy(cache.logits, g, SplitKind::kVal);
    const double test = accuracy(cache.logits, g, SplitKind::kTest);
    if (val > best.metrics.best_val_acc) {
      best.params = params;
      best.weights = w;
      best.metrics.best_val_acc = val;
      best.metrics.test_acc = test;
      best.metrics.best_epoch = epoch;
    }
    best.metrics.final_val_acc = val;
    best.metrics.final_test_acc = test;
    best.metrics.train_loss.push_back(loss.classification);

    adam_step(params, loss.grads, adam);
    schedule.advance(epoch, cache, loss, val);
  }
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  best.metrics.wall_time_s = elapsed.count();
  best.metrics.mean_epoch_time_s = elapsed.count() / opts.epochs;
  return best;
}

TrainedModel train_full_structure(const Graph& g, const TrainOptions& opts) {
  FullStructure full(g.num_edges());
  TrainOptions plain = opts;
  plain.objective = ObjectiveConfig{};
  return run_training(g, init_params(g.num_features, opts.hidden, g.num_classes, opts.seed), plain, full);
}

}  // namespace rcl
