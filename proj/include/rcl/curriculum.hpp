#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rcl/graph.hpp"
#include "rcl/nn.hpp"
#include "rcl/synth.hpp"
#include "rcl/training.hpp"

namespace rcl {

struct RclConfig {
  double beta = 1.0;
  double gamma = 1.0;
  int pace = 1;               // 1..5; structure saturates at epoch epochs / pace
  int epochs = 300;
  double lr = 0.01;
  double epsilon_conv = 1e-3;
  double init_frac = 0.1;
  bool recon_in_wstep = true;
  bool smoothing = true;
  Index hidden = 64;
  std::uint64_t seed = 0;
  DecoderConfig decoder{true, 3.0};
  // Start the curriculum run from the pretrained backbone weights instead of
  // a fresh initialization.
  bool warm_start = false;
  // Ablation: keep S = 1 on every edge and skip the pretrained initialization.
  bool fixed_full_mask = false;

  /// Throws std::invalid_argument describing the first out-of-range field.
  void validate() const;
  TrainOptions train_options() const;
  double lambda_conv() const { return beta / (2.0 * epsilon_conv); }
};

// Relaxed edge mask plus the bookkeeping of the edge reweighting scheme.
struct MaskState {
  std::vector<double> s;             // aligned with Graph::edges, in [0,1]
  std::vector<std::int32_t> counts;  // iterations in which the edge had s > 0
  double lambda = 0.0;
  double lambda0 = 0.0;
  int iter = 0;
  std::vector<double> node_losses;   // per node; zero outside the training split
};

struct TraceRecord {
  int iter = 0;
  double lambda = 0.0;
  std::size_t num_selected = 0;
  std::optional<double> frac_easy;
  std::optional<double> frac_medium;
  std::optional<double> frac_hard;
  double train_loss = 0.0;
  double val_acc = 0.0;
};

struct CurriculumTrace {
  std::vector<TraceRecord> records;
};

/// Minimizer over [0,1] of beta*s*r + lambda*(s-1)^2 + gamma*(s-prev)^2.
double update_mask_entry(double residual, double prev, double lambda, double beta, double gamma);

std::vector<double> update_mask(std::span<const double> residuals, std::span<const double> prev,
                                double lambda, double beta, double gamma);

/// Geometric growth from lambda0 at t = 0 to lambda_conv at t = epochs / pace,
/// held constant afterwards.
double schedule_lambda(const RclConfig& cfg, int t, double lambda0);

/// Marks edges with s > 0 as selected in this iteration, then returns
/// psi(e) * rho(u) * rho(v) * s with psi = count / iter and rho = exp(-loss).
/// With smoothing disabled the counts still advance and s is returned as is.
EdgeWeights smooth_weights(MaskState& state, const Graph& g, bool smoothing);

struct InitialStructure {
  MaskState state;
  EdgeWeights weights;
  std::vector<double> residuals;
  GnnParams pretrained;
};

/// Sets lambda0 so that about init_frac of the edges pass the first mask
/// update from an empty mask.
InitialStructure init_from_residuals(std::vector<double> residuals, const RclConfig& cfg);

struct Pretrained {
  GnnParams params;  // best-validation snapshot
  std::vector<double> residuals;
};

/// Vanilla backbone trained on the full structure, and its edge residuals.
Pretrained pretrain(const Graph& g, const TrainOptions& opts);
std::vector<double> pretrained_residuals(const Graph& g, const TrainOptions& opts);

InitialStructure init_structure(const Graph& g, const RclConfig& cfg);

struct RclResult {
  TrainedModel model;
  CurriculumTrace trace;
  MaskState final_state;
};

RclResult train_rcl(const Graph& g, const RclConfig& cfg,
                    const EdgeDifficulty* difficulty = nullptr);

// CSV: iter,lambda,num_selected,frac_easy,frac_medium,frac_hard,train_loss,val_acc
std::string trace_csv_header();
void write_trace_csv(const CurriculumTrace& trace, const std::filesystem::path& path);
CurriculumTrace read_trace_csv(const std::filesystem::path& path);

}  // namespace rcl
