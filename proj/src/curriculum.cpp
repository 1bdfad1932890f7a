#include "rcl/curriculum.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "rcl/decoder.hpp"

namespace rcl {

void RclConfig::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument(msg); };
  if (!(beta > 0.0)) fail("beta must be > 0");
  if (!(gamma >= 0.0)) fail("gamma must be >= 0");
  if (pace < 1 || pace > 5) fail("pace must be in 1..5");
  if (epochs <= 0) fail("epochs must be positive");
  if (!(lr > 0.0)) fail("lr must be > 0");
  if (!(epsilon_conv > 0.0 && epsilon_conv < 1.0)) fail("epsilon_conv must be in (0,1)");
  if (!(init_frac > 0.0 && init_frac < 1.0)) fail("init_frac must be in (0,1)");
  if (hidden <= 0) fail("hidden must be positive");
}

TrainOptions RclConfig::train_options() const {
  return TrainOptions{.epochs = epochs,
                      .lr = lr,
                      .hidden = hidden,
                      .seed = seed,
                      .objective = ObjectiveConfig{
                          .beta = beta, .recon_in_wstep = recon_in_wstep, .decoder = decoder}};
}

double update_mask_entry(double residual, double prev, double lambda, double beta, double gamma) {
  const double s = (2.0 * lambda + 2.0 * gamma * prev - beta * residual) / (2.0 * lambda + 2.0 * gamma);
  return std::clamp(s, 0.0, 1.0);
}

std::vector<double> update_mask(std::span<const double> residuals, std::span<const double> prev,
                                double lambda, double beta, double gamma) {
  if (!(lambda > 0.0) || !(beta > 0.0) || !(gamma >= 0.0)) {
    throw std::invalid_argument("update_mask: need lambda > 0, beta > 0, gamma >= 0");
  }
  if (residuals.size() != prev.size()) throw std::invalid_argument("update_mask: length mismatch");
  std::vector<double> s(residuals.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    s[k] = update_mask_entry(residuals[k], prev[k], lambda, beta, gamma);
  }
  return s;
}

double schedule_lambda(const RclConfig& cfg, int t, double lambda0) {
  const double lconv = cfg.lambda_conv();
  if (!(lambda0 > 0.0)) throw std::invalid_argument("schedule_lambda: lambda0 must be positive");
  if (lambda0 >= lconv) {
    throw std::invalid_argument("schedule_lambda: initial lambda already at saturation");
  }
  if (t < 0) throw std::invalid_argument("schedule_lambda: negative iteration");
  if (static_cast<long long>(t) * cfg.pace >= cfg.epochs) return lconv;
  const double frac = static_cast<double>(t) * cfg.pace / cfg.epochs;
  return lambda0 * std::pow(lconv / lambda0, frac);
}

EdgeWeights smooth_weights(MaskState& state, const Graph& g, bool smoothing) {
  if (state.iter < 1) throw std::invalid_argument("smooth_weights: iteration count is zero");
  if (state.s.size() != g.edges.size() || state.counts.size() != g.edges.size()) {
    throw std::invalid_argument("smooth_weights: mask not aligned with edges");
  }
  EdgeWeights w;
  w.values.resize(state.s.size());
  for (std::size_t k = 0; k < state.s.size(); ++k) {
    if (state.s[k] > 0.0) ++state.counts[k];
  }
  if (!smoothing) {
    w.values = state.s;
    return w;
  }
  auto rho = [&state](Index v) {
    return state.node_losses.empty() ? 1.0 : std::exp(-state.node_losses[v]);
  };
  const double inv_iter = 1.0 / state.iter;
  for (std::size_t k = 0; k < state.s.size(); ++k) {
    const double psi = std::min(1.0, state.counts[k] * inv_iter);
    w.values[k] = psi * rho(g.edges[k].u) * rho(g.edges[k].v) * state.s[k];
  }
  return w;
}

InitialStructure init_from_residuals(std::vector<double> residuals, const RclConfig& cfg) {
  cfg.validate();
  const double lconv = cfg.lambda_conv();
  double lambda0 = 0.0;
  if (!residuals.empty()) {
    auto sorted = residuals;
    std::sort(sorted.begin(), sorted.end());
    const auto at = std::min(sorted.size() - 1,
                             static_cast<std::size_t>(std::floor(cfg.init_frac * sorted.size())));
    const double q = sorted[at];
    if (sorted.front() < sorted.back() && q > 0.0) {
      lambda0 = cfg.beta * q / 2.0;
    } else {
      lambda0 = cfg.beta * sorted.back() / 4.0;
    }
  }
  // All residuals zero (or no edges): any positive lambda selects everything.
  if (!(lambda0 > 0.0)) lambda0 = lconv * 1e-3;
  lambda0 = std::min(lambda0, lconv * 0.5);

  InitialStructure init;
  init.state.lambda0 = lambda0;
  init.state.lambda = lambda0;
  const std::vector<double> empty(residuals.size(), 0.0);
  init.state.s = update_mask(residuals, empty, lambda0, cfg.beta, 0.0);
  init.state.counts.assign(residuals.size(), 0);
  init.weights.values = init.state.s;
  init.residuals = std::move(residuals);
  return init;
}

Pretrained pretrain(const Graph& g, const TrainOptions& opts) {
  auto model = train_full_structure(g, opts);
  const auto prop = normalize(g, EdgeWeights::ones(g.num_edges()));
  const auto cache = forward(model.params, g.features, prop);
  return Pretrained{std::move(model.params), edge_residuals(cache.z, g.edges, opts.objective.decoder)};
}

std::vector<double> pretrained_residuals(const Graph& g, const TrainOptions& opts) {
  return pretrain(g, opts).residuals;
}

InitialStructure init_structure(const Graph& g, const RclConfig& cfg) {
  cfg.validate();
  auto pre = pretrain(g, cfg.train_options());
  auto init = init_from_residuals(std::move(pre.residuals), cfg);
  init.pretrained = std::move(pre.params);
  return init;
}

namespace {

class RclSchedule final : public StructureSchedule {
 public:
  RclSchedule(const Graph& g, const RclConfig& cfg, InitialStructure init,
              const EdgeDifficulty* difficulty)
      : g_(g), cfg_(cfg), state_(std::move(init.state)), weights_(std::move(init.weights)),
        difficulty_(difficulty) {
    state_.node_losses.assign(g.num_nodes, 0.0);
    trace_.records.reserve(cfg.epochs);
  }

  const EdgeWeights& weights() const override { return weights_; }
  std::span<const double> recon_mask() const override { return state_.s; }

  void advance(int epoch, const ForwardCache& cache, const LossResult& loss, double val_acc) override {
    const auto& train = g_.split.train;
    for (std::size_t t = 0; t < train.size(); ++t) state_.node_losses[train[t]] = loss.node_losses[t];

    if (!cfg_.fixed_full_mask) {
      const auto r = edge_residuals(cache.z, g_.edges, cfg_.decoder);
      if (!saturated()) state_.lambda = schedule_lambda(cfg_, epoch, state_.lambda0);
      state_.s = update_mask(r, state_.s, state_.lambda, cfg_.beta, cfg_.gamma);
    }
    state_.iter = epoch;
    weights_ = smooth_weights(state_, g_, cfg_.smoothing);
    record(epoch, loss.classification, val_acc);
  }

  CurriculumTrace take_trace() { return std::move(trace_); }
  MaskState take_state() { return std::move(state_); }

 private:
  bool saturated() const {
    return std::all_of(state_.s.begin(), state_.s.end(),
                       [eps = cfg_.epsilon_conv](double s) { return s >= 1.0 - eps; });
  }

  void record(int epoch, double train_loss, double val_acc) {
    TraceRecord rec;
    rec.iter = epoch;
    rec.lambda = state_.lambda;
    rec.train_loss = train_loss;
    rec.val_acc = val_acc;
    std::size_t total[3] = {0, 0, 0};
    std::size_t picked[3] = {0, 0, 0};
    for (std::size_t k = 0; k < state_.s.size(); ++k) {
      const bool sel = state_.s[k] > 0.0;
      rec.num_selected += sel;
      if (difficulty_) {
        const auto c = static_cast<int>(difficulty_->per_edge[k]);
        ++total[c];
        picked[c] += sel;
      }
    }
    if (difficulty_) {
      auto frac = [&](int c) -> std::optional<double> {
        if (total[c] == 0) return std::nullopt;
        return static_cast<double>(picked[c]) / static_cast<double>(total[c]);
      };
      rec.frac_easy = frac(0);
      rec.frac_medium = frac(1);
      rec.frac_hard = frac(2);
    }
    trace_.records.push_back(rec);
  }

  const Graph& g_;
  const RclConfig& cfg_;
  MaskState state_;
  EdgeWeights weights_;
  const EdgeDifficulty* difficulty_;
  CurriculumTrace trace_;
};

}  // namespace

RclResult train_rcl(const Graph& g, const RclConfig& cfg, const EdgeDifficulty* difficulty) {
  cfg.validate();
  if (difficulty && difficulty->per_edge.size() != g.edges.size()) {
    throw std::invalid_argument("train_rcl: difficulty labels not aligned with edges");
  }
  InitialStructure init;
  if (cfg.fixed_full_mask) {
    init.state.s.assign(g.num_edges(), 1.0);
    init.state.counts.assign(g.num_edges(), 0);
    init.weights = EdgeWeights::ones(g.num_edges());
  } else {
    init = init_structure(g, cfg);
  }
  auto params = init_params(g.num_features, cfg.hidden, g.num_classes, cfg.seed);
  if (cfg.warm_start && !cfg.fixed_full_mask) {
    params.w0 = init.pretrained.w0;
    params.w1 = init.pretrained.w1;
  }
  if (cfg.smoothing && !cfg.fixed_full_mask) {
    // The first epoch gets the same confidence reweighting as later ones. No
    // selection history exists yet, so psi is 1 on every selected edge.
    const auto loss = loss_and_grads(params, g, normalize(g, init.weights), {}, ObjectiveConfig{});
    std::vector<double> rho(g.num_nodes, 1.0);
    for (std::size_t t = 0; t < g.split.train.size(); ++t) {
      rho[g.split.train[t]] = std::exp(-loss.node_losses[t]);
    }
    for (std::size_t k = 0; k < g.edges.size(); ++k) {
      init.weights.values[k] *= rho[g.edges[k].u] * rho[g.edges[k].v];
    }
  }
  RclSchedule schedule(g, cfg, std::move(init), difficulty);
  RclResult out;
  out.model = run_training(g, std::move(params), cfg.train_options(), schedule);
  out.trace = schedule.take_trace();
  out.final_state = schedule.take_state();
  return out;
}

std::string trace_csv_header() {
  return "iter,lambda,num_selected,frac_easy,frac_medium,frac_hard,train_loss,val_acc";
}

void write_trace_csv(const CurriculumTrace& trace, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write trace file " + path.string());
  auto opt = [](const std::optional<double>& v) { return v ? format_real(*v) : std::string(); };
  out << trace_csv_header() << '\n';
  for (const auto& r : trace.records) {
    out << r.iter << ',' << format_real(r.lambda) << ',' << r.num_selected << ',' << opt(r.frac_easy)
        << ',' << opt(r.frac_medium) << ',' << opt(r.frac_hard) << ',' << format_real(r.train_loss)
        << ',' << format_real(r.val_acc) << '\n';
  }
}

CurriculumTrace read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open trace file " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != trace_csv_header()) {
    throw std::runtime_error("trace file " + path.string() + " has an unexpected header");
  }
  CurriculumTrace trace;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.emplace_back();
    if (cells.size() != 8) throw std::runtime_error("malformed trace row: " + line);
    auto opt = [](const std::string& s) -> std::optional<double> {
      if (s.empty()) return std::nullopt;
      return parse_real(s);
    };
    TraceRecord r;
    r.iter = std::stoi(cells[0]);
    r.lambda = parse_real(cells[1]);
    r.num_selected = std::stoull(cells[2]);
    r.frac_easy = opt(cells[3]);
    r.frac_medium = opt(cells[4]);
    r.frac_hard = opt(cells[5]);
    r.train_loss = parse_real(cells[6]);
    r.val_acc = parse_real(cells[7]);
    trace.records.push_back(r);
  }
  return trace;
}

}  // namespace rcl
