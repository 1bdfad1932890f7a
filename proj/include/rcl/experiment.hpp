#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rcl/curriculum.hpp"
#include "rcl/graph.hpp"
#include "rcl/synth.hpp"

namespace rcl {

enum class Method {
  kRcl,
  kVanilla,
  kCurriculumLinear,
  kCurriculumRoot,
  kRandomLinear,
  kRandomRoot,
};

std::string to_string(Method m);
/// Accepts the names produced by to_string(Method); throws std::invalid_argument otherwise.
Method method_from_string(const std::string& name);
const std::vector<std::string>& method_names();

// A graph ready for training, with the labels that describe where it came from.
struct Dataset {
  std::string name;
  Graph graph;
  EdgeDifficulty difficulty;
  double homo = 0.0;         // generator parameter, or measured homophily for loaded files
  double noise_ratio = 0.0;  // injected-edge ratio applied on top of the source
};

Dataset synthetic_dataset(const SynthParams& p);
/// Reads a graph file and its ".difficulty" sidecar when one exists and matches;
/// otherwise difficulty is derived from the labels.
Dataset load_dataset(const std::filesystem::path& path);
Dataset attacked(const Dataset& clean, double ratio, std::uint64_t seed);
std::string synthetic_name(const SynthParams& p);

struct MetricsRow {
  std::string run_id;
  std::string method;
  std::string dataset;
  double homo = 0.0;
  double noise_ratio = 0.0;
  std::uint64_t seed = 0;
  double best_val_acc = 0.0;
  double test_acc = 0.0;
  double wall_time_s = 0.0;

  bool operator==(const MetricsRow&) const = default;
};

struct MetricsTable {
  std::vector<MetricsRow> rows;
};

std::string metrics_csv_header();
std::string format_metrics_row(const MetricsRow& row);
void write_metrics_csv(const MetricsTable& table, const std::filesystem::path& path);
MetricsTable read_metrics_csv(const std::filesystem::path& path);

// One (dataset, method, seed) cell of an experiment.
struct RunRequest {
  std::string run_id;
  Method method = Method::kRcl;
  RclConfig cfg;  // cfg.seed selects the seed
  const Dataset* dataset = nullptr;
};

struct RunOutcome {
  MetricsRow row;
  std::optional<CurriculumTrace> trace;  // rcl only
};

RunOutcome run_one(const RunRequest& req);

struct RunFailure {
  std::string run_id;
  std::string error;
};

/// Runs every request on `workers` threads. `on_done` is called with each
/// outcome in request order, serialized, as soon as all earlier requests
/// have finished. Failed requests are skipped in the callback and returned.
std::vector<RunFailure> run_all(const std::vector<RunRequest>& requests, int workers,
                                const std::function<void(std::size_t, const RunOutcome&)>& on_done);

/// RCL_WORKERS when set to a positive integer, else 1.
int worker_count_from_env();

struct Summary {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation, 0 for a single value
  std::size_t n = 0;
};
Summary summarize(const std::vector<double>& values);

// Subcommand inputs. Paths are created as needed.
struct TrainConfig {
  std::vector<Method> methods{Method::kRcl};
  RclConfig rcl;
  std::filesystem::path dataset;  // empty: generate from `synth`
  SynthParams synth;
  double attack_ratio = 0.0;
  std::uint64_t attack_seed = 0;
  std::vector<std::uint64_t> seeds{0};
  std::filesystem::path out = "out";
  int workers = 1;
};

enum class SweepAxis { kHomo, kRatio, kPace };
std::string to_string(SweepAxis axis);
SweepAxis sweep_axis_from_string(const std::string& name);

struct SweepConfig {
  TrainConfig base;
  SweepAxis axis = SweepAxis::kHomo;
  std::vector<double> values;
};

/// Exit status is 0 iff every run completed.
int cmd_gen(const SynthParams& p, const std::filesystem::path& out, std::ostream& log);
int cmd_train(const TrainConfig& cfg, std::ostream& log);
int cmd_attack(const std::filesystem::path& dataset, const std::vector<double>& ratios,
               std::uint64_t seed, const std::filesystem::path& out_dir, std::ostream& log);
int cmd_sweep(const SweepConfig& cfg, std::ostream& log);
/// Long format: trace,iter,series,value with one row per non-empty cell.
int cmd_trace_plot(const std::vector<std::filesystem::path>& traces,
                   const std::filesystem::path& out, std::ostream& log);

std::filesystem::path attacked_file_name(const std::filesystem::path& dataset, double ratio,
                                         const std::filesystem::path& out_dir);

}  // namespace rcl
