// Command-line front end: dataset generation, attacks, training runs, sweeps
// and trace export. Worker count comes from RCL_WORKERS.

#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rcl/experiment.hpp"

namespace {

using rcl::RclConfig;
using rcl::SynthParams;
using rcl::TrainConfig;

void add_synth_options(CLI::App* app, SynthParams& p, const char* seed_flag) {
  app->add_option("--homo", p.homo, "Edge homophily of the generated graph")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  app->add_option("--nodes", p.num_nodes, "Number of nodes")->capture_default_str();
  app->add_option("--classes", p.num_classes, "Number of classes")->capture_default_str();
  app->add_option("--degree", p.avg_degree, "Average degree")->capture_default_str();
  app->add_option("--features", p.feature_dim, "Feature dimension")->capture_default_str();
  app->add_option("--spread", p.gaussian_spread, "Radius of the class-mean ring")
      ->capture_default_str();
  app->add_option(seed_flag, p.seed, "Generator seed")->capture_default_str();
}

void add_train_options(CLI::App* app, TrainConfig& c, std::vector<std::string>& methods) {
  RclConfig& r = c.rcl;
  app->add_option("--method,--methods", methods, "Comma-separated methods")
      ->delimiter(',')
      ->check(CLI::IsMember(rcl::method_names()))
      ->capture_default_str();
  app->add_option("--dataset", c.dataset, "Graph file; generated from the synth flags when empty");
  add_synth_options(app, c.synth, "--graph-seed");
  app->add_option("--attack-ratio", c.attack_ratio, "Inject this fraction of random edges first")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app->add_option("--attack-seed", c.attack_seed)->capture_default_str();
  app->add_option("--beta", r.beta, "Reconstruction weight")->capture_default_str();
  app->add_option("--gamma", r.gamma, "Mask proximity weight")->capture_default_str();
  app->add_option("--pace", r.pace, "Structure saturates at epoch epochs/pace")
      ->check(CLI::Range(1, 5))
      ->capture_default_str();
  app->add_option("--epochs", r.epochs)->check(CLI::PositiveNumber)->capture_default_str();
  app->add_option("--lr", r.lr)->check(CLI::PositiveNumber)->capture_default_str();
  app->add_option("--epsilon-conv", r.epsilon_conv)->capture_default_str();
  app->add_option("--init-frac", r.init_frac)->capture_default_str();
  app->add_option("--recon", r.recon_in_wstep, "Reconstruction term in the weight step")
      ->capture_default_str();
  app->add_option("--smoothing", r.smoothing)->capture_default_str();
  app->add_option("--hidden", r.hidden)->check(CLI::PositiveNumber)->capture_default_str();
  app->add_option("--decoder-scale", r.decoder.scale)->capture_default_str();
  app->add_option("--decoder-normalize", r.decoder.normalize)->capture_default_str();
  app->add_option("--warm-start", r.warm_start)->capture_default_str();
  app->add_option("--seeds", c.seeds, "Comma-separated training seeds")
      ->delimiter(',')
      ->capture_default_str();
  app->add_option("--out", c.out, "Output directory")->capture_default_str();
  // --config lives on the top-level app; fallthrough lets it follow the subcommand.
  app->fallthrough();
}

std::vector<rcl::Method> parse_methods(const std::vector<std::string>& names) {
  std::vector<rcl::Method> out;
  for (const auto& n : names) out.push_back(rcl::method_from_string(n));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Relational curriculum experiments for graph node classification"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value file with a [train] or [sweep] section")
      ->check(CLI::ExistingFile);

  SynthParams gen_params;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "Generate a synthetic graph and its difficulty sidecar");
  add_synth_options(gen, gen_params, "--seed");
  gen->add_option("--out", gen_out, "Graph file to write")->required();

  TrainConfig train_cfg;
  std::vector<std::string> train_methods{"rcl"};
  auto* train = app.add_subcommand("train", "Train one or more methods over several seeds");
  add_train_options(train, train_cfg, train_methods);

  std::string attack_dataset;
  std::vector<double> attack_ratios;
  std::uint64_t attack_seed = 0;
  std::string attack_out = ".";
  auto* attack = app.add_subcommand("attack", "Inject random edges at one or more ratios");
  attack->add_option("--dataset", attack_dataset)->required();
  attack->add_option("--ratios", attack_ratios, "Comma-separated ratios")
      ->delimiter(',')
      ->required();
  attack->add_option("--seed", attack_seed)->capture_default_str();
  attack->add_option("--out", attack_out, "Output directory")->capture_default_str();

  rcl::SweepConfig sweep_cfg;
  std::vector<std::string> sweep_methods{"rcl", "vanilla"};
  std::string axis = "homo";
  auto* sweep = app.add_subcommand("sweep", "Grid over homo, attack ratio or pace");
  add_train_options(sweep, sweep_cfg.base, sweep_methods);
  sweep->add_option("--axis", axis)->check(CLI::IsMember({"homo", "ratio", "pace"}))->capture_default_str();
  sweep->add_option("--values", sweep_cfg.values, "Comma-separated axis values")
      ->delimiter(',')
      ->required();

  std::vector<std::string> traces;
  std::string plot_out = "trace_long.csv";
  auto* plot = app.add_subcommand("trace-plot", "Merge trace CSVs into one long-format CSV");
  plot->add_option("traces", traces, "Trace CSV files")->required();
  plot->add_option("--out", plot_out)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return rcl::cmd_gen(gen_params, gen_out, std::cout);
    if (*train) {
      train_cfg.methods = parse_methods(train_methods);
      train_cfg.workers = rcl::worker_count_from_env();
      return rcl::cmd_train(train_cfg, std::cout);
    }
    if (*attack) {
      return rcl::cmd_attack(attack_dataset, attack_ratios, attack_seed, attack_out, std::cout);
    }
    if (*sweep) {
      sweep_cfg.base.methods = parse_methods(sweep_methods);
      sweep_cfg.base.workers = rcl::worker_count_from_env();
      sweep_cfg.axis = rcl::sweep_axis_from_string(axis);
      return rcl::cmd_sweep(sweep_cfg, std::cout);
    }
    if (*plot) {
      std::vector<std::filesystem::path> paths(traces.begin(), traces.end());
      return rcl::cmd_trace_plot(paths, plot_out, std::cout);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
