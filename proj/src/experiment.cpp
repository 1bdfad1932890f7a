#include "rcl/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "rcl/baselines.hpp"
#include "rcl/perturb.hpp"

namespace rcl {

namespace fs = std::filesystem;

namespace {

constexpr Method kAllMethods[] = {Method::kRcl,           Method::kVanilla,
                                  Method::kCurriculumLinear, Method::kCurriculumRoot,
                                  Method::kRandomLinear,  Method::kRandomRoot};

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

void require_plain_field(const std::string& s, const char* what) {
  if (s.find_first_of(",\r\n") != std::string::npos) {
    throw std::invalid_argument(std::string(what) + " must not contain commas or newlines: " + s);
  }
}

std::ofstream open_for_write(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::string percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", 100.0 * v);
  return buf;
}

std::string join_seeds(const std::vector<std::uint64_t>& seeds) {
  std::string s;
  for (std::size_t i = 0; i < seeds.size(); ++i) s += (i ? "," : "") + std::to_string(seeds[i]);
  return s;
}

std::string bool_text(bool b) { return b ? "true" : "false"; }

// Keys match the command-line flags, under a section named after the
// subcommand, so the file can be passed back with --config.
std::string describe(const TrainConfig& c, const std::string& section) {
  std::ostringstream o;
  o << '[' << section << "]\n";
  std::string methods;
  for (std::size_t i = 0; i < c.methods.size(); ++i) {
    methods += (i ? "," : "") + to_string(c.methods[i]);
  }
  o << "method=" << methods << '\n'
    << "dataset=" << c.dataset.string() << '\n'
    << "homo=" << format_real(c.synth.homo) << '\n'
    << "nodes=" << c.synth.num_nodes << '\n'
    << "classes=" << c.synth.num_classes << '\n'
    << "degree=" << format_real(c.synth.avg_degree) << '\n'
    << "features=" << c.synth.feature_dim << '\n'
    << "spread=" << format_real(c.synth.gaussian_spread) << '\n'
    << "graph-seed=" << c.synth.seed << '\n'
    << "attack-ratio=" << format_real(c.attack_ratio) << '\n'
    << "attack-seed=" << c.attack_seed << '\n'
    << "beta=" << format_real(c.rcl.beta) << '\n'
    << "gamma=" << format_real(c.rcl.gamma) << '\n'
    << "pace=" << c.rcl.pace << '\n'
    << "epochs=" << c.rcl.epochs << '\n'
    << "lr=" << format_real(c.rcl.lr) << '\n'
    << "epsilon-conv=" << format_real(c.rcl.epsilon_conv) << '\n'
    << "init-frac=" << format_real(c.rcl.init_frac) << '\n'
    << "recon=" << bool_text(c.rcl.recon_in_wstep) << '\n'
    << "smoothing=" << bool_text(c.rcl.smoothing) << '\n'
    << "hidden=" << c.rcl.hidden << '\n'
    << "decoder-scale=" << format_real(c.rcl.decoder.scale) << '\n'
    << "decoder-normalize=" << bool_text(c.rcl.decoder.normalize) << '\n'
    << "warm-start=" << bool_text(c.rcl.warm_start) << '\n'
    << "seeds=" << join_seeds(c.seeds) << '\n'
    << "out=" << c.out.string() << '\n';
  return o.str();
}

void write_failures(const std::vector<RunFailure>& failures, const fs::path& path) {
  auto out = open_for_write(path);
  out << "run_id,error\n";
  for (const auto& f : failures) {
    std::string msg = f.error;
    std::replace_if(msg.begin(), msg.end(), [](char c) { return c == ',' || c == '\n'; }, ';');
    out << f.run_id << ',' << msg << '\n';
  }
}

// Appends rows as they arrive, flushing after each so partial results survive.
class MetricsSink {
 public:
  explicit MetricsSink(const fs::path& path) : out_(open_for_write(path)) {
    out_ << metrics_csv_header() << '\n';
    out_.flush();
  }
  void add(const MetricsRow& row) {
    out_ << format_metrics_row(row) << '\n';
    out_.flush();
  }

 private:
  std::ofstream out_;
};

void print_summary(const std::string& label, const std::vector<double>& accs, std::ostream& log) {
  const auto s = summarize(accs);
  log << label << ": " << percent(s.mean) << " ± " << percent(s.stddev) << " (n=" << s.n << ")\n";
}

Dataset base_dataset(const TrainConfig& c) {
  Dataset d = c.dataset.empty() ? synthetic_dataset(c.synth) : load_dataset(c.dataset);
  if (c.attack_ratio > 0.0) d = attacked(d, c.attack_ratio, c.attack_seed);
  return d;
}

}  // namespace

std::string to_string(Method m) {
  switch (m) {
    case Method::kRcl: return "rcl";
    case Method::kVanilla: return "vanilla";
    case Method::kCurriculumLinear: return "curriculum-linear";
    case Method::kCurriculumRoot: return "curriculum-root";
    case Method::kRandomLinear: return "random-linear";
    case Method::kRandomRoot: return "random-root";
  }
  throw std::invalid_argument("unknown method");
}

Method method_from_string(const std::string& name) {
  for (Method m : kAllMethods) {
    if (to_string(m) == name) return m;
  }
  throw std::invalid_argument("unknown method '" + name + "'");
}

const std::vector<std::string>& method_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (Method m : kAllMethods) v.push_back(to_string(m));
    return v;
  }();
  return names;
}

std::string synthetic_name(const SynthParams& p) {
  return "synth-h" + format_real(p.homo) + "-n" + std::to_string(p.num_nodes) + "-d" +
         format_real(p.avg_degree) + "-s" + std::to_string(p.seed);
}

Dataset synthetic_dataset(const SynthParams& p) {
  auto sg = generate(p);
  Dataset d;
  d.name = synthetic_name(p);
  d.graph = std::move(sg.graph);
  d.difficulty = std::move(sg.difficulty);
  d.homo = p.homo;
  return d;
}

Dataset load_dataset(const fs::path& path) {
  Dataset d;
  d.name = path.stem().string();
  d.graph = load_graph(path);
  auto sidecar = path;
  sidecar.replace_extension(".difficulty");
  d.difficulty = fs::exists(sidecar) ? load_difficulty(d.graph, sidecar) : classify_edges(d.graph);
  d.homo = d.graph.edges.empty() ? 0.0 : empirical_homophily(d.graph);
  return d;
}

Dataset attacked(const Dataset& clean, double ratio, std::uint64_t seed) {
  Dataset d;
  d.name = clean.name;
  d.graph = inject_edges(clean.graph, AttackSpec{ratio, seed});
  d.difficulty = classify_edges(d.graph);
  d.homo = clean.homo;
  d.noise_ratio = ratio;
  return d;
}

std::string metrics_csv_header() {
  return "run_id,method,dataset,homo,noise_ratio,seed,best_val_acc,test_acc,wall_time_s";
}

std::string format_metrics_row(const MetricsRow& r) {
  require_plain_field(r.run_id, "run_id");
  require_plain_field(r.dataset, "dataset name");
  std::ostringstream o;
  o << r.run_id << ',' << r.method << ',' << r.dataset << ',' << format_real(r.homo) << ','
    << format_real(r.noise_ratio) << ',' << r.seed << ',' << format_real(r.best_val_acc) << ','
    << format_real(r.test_acc) << ',' << format_real(r.wall_time_s);
  return o.str();
}

void write_metrics_csv(const MetricsTable& table, const fs::path& path) {
  auto out = open_for_write(path);
  out << metrics_csv_header() << '\n';
  for (const auto& r : table.rows) out << format_metrics_row(r) << '\n';
}

MetricsTable read_metrics_csv(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open metrics file " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != metrics_csv_header()) {
    throw std::runtime_error("metrics file " + path.string() + " has an unexpected header");
  }
  MetricsTable table;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c = split_csv_line(line);
    if (c.size() != 9) throw std::runtime_error("malformed metrics row: " + line);
    MetricsRow r;
    r.run_id = c[0];
    r.method = c[1];
    r.dataset = c[2];
    r.homo = parse_real(c[3]);
    r.noise_ratio = parse_real(c[4]);
    r.seed = std::stoull(c[5]);
    r.best_val_acc = parse_real(c[6]);
    r.test_acc = parse_real(c[7]);
    r.wall_time_s = parse_real(c[8]);
    table.rows.push_back(std::move(r));
  }
  return table;
}

RunOutcome run_one(const RunRequest& req) {
  if (!req.dataset) throw std::invalid_argument("run_one: no dataset");
  const Dataset& d = *req.dataset;
  const auto start = std::chrono::steady_clock::now();
  RunOutcome out;
  RunMetrics m;
  switch (req.method) {
    case Method::kRcl: {
      auto r = train_rcl(d.graph, req.cfg, &d.difficulty);
      m = r.model.metrics;
      out.trace = std::move(r.trace);
      break;
    }
    case Method::kVanilla:
      m = train_vanilla(d.graph, req.cfg).metrics;
      break;
    case Method::kCurriculumLinear:
      m = train_paced(d.graph, req.cfg, OrderingKind::kResidual, PacingKind::kLinear).metrics;
      break;
    case Method::kCurriculumRoot:
      m = train_paced(d.graph, req.cfg, OrderingKind::kResidual, PacingKind::kRoot).metrics;
      break;
    case Method::kRandomLinear:
      m = train_paced(d.graph, req.cfg, OrderingKind::kRandom, PacingKind::kLinear).metrics;
      break;
    case Method::kRandomRoot:
      m = train_paced(d.graph, req.cfg, OrderingKind::kRandom, PacingKind::kRoot).metrics;
      break;
  }
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  out.row = MetricsRow{.run_id = req.run_id,
                       .method = to_string(req.method),
                       .dataset = d.name,
                       .homo = d.homo,
                       .noise_ratio = d.noise_ratio,
                       .seed = req.cfg.seed,
                       .best_val_acc = m.best_val_acc,
                       .test_acc = m.test_acc,
                       .wall_time_s = elapsed.count()};
  return out;
}

std::vector<RunFailure> run_all(const std::vector<RunRequest>& requests, int workers,
                                const std::function<void(std::size_t, const RunOutcome&)>& on_done) {
  const std::size_t n = requests.size();
  std::vector<std::optional<RunOutcome>> results(n);
  std::vector<std::string> errors(n);
  std::vector<char> finished(n, 0);
  std::vector<RunFailure> failures;
  std::mutex mu;
  std::size_t emitted = 0;
  std::atomic<std::size_t> next{0};

  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      std::optional<RunOutcome> result;
      std::string error;
      try {
        result = run_one(requests[i]);
      } catch (const std::exception& e) {
        error = e.what();
      }
      std::lock_guard lock(mu);
      results[i] = std::move(result);
      errors[i] = std::move(error);
      finished[i] = 1;
      for (; emitted < n && finished[emitted]; ++emitted) {
        if (results[emitted]) {
          on_done(emitted, *results[emitted]);
          results[emitted].reset();
        } else {
          failures.push_back({requests[emitted].run_id, errors[emitted]});
        }
      }
    }
  };

  const int count = std::max(1, std::min<int>(workers, static_cast<int>(n)));
  std::vector<std::thread> pool;
  for (int t = 1; t < count; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return failures;
}

int worker_count_from_env() {
  const char* env = std::getenv("RCL_WORKERS");
  if (!env || !*env) return 1;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1) return 1;
  return static_cast<int>(std::min<long>(v, 256));
}

Summary summarize(const std::vector<double>& values) {
  Summary s;
  s.n = values.size();
  if (values.empty()) return s;
  for (double v : values) s.mean += v;
  s.mean /= static_cast<double>(s.n);
  if (s.n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(s.n - 1));
  }
  return s;
}

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kHomo: return "homo";
    case SweepAxis::kRatio: return "ratio";
    case SweepAxis::kPace: return "pace";
  }
  throw std::invalid_argument("unknown sweep axis");
}

SweepAxis sweep_axis_from_string(const std::string& name) {
  for (SweepAxis a : {SweepAxis::kHomo, SweepAxis::kRatio, SweepAxis::kPace}) {
    if (to_string(a) == name) return a;
  }
  throw std::invalid_argument("unknown sweep axis '" + name + "'");
}

int cmd_gen(const SynthParams& p, const fs::path& out, std::ostream& log) {
  const auto sg = generate(p);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  save_graph(sg.graph, out);
  auto sidecar = out;
  sidecar.replace_extension(".difficulty");
  save_difficulty(sg.graph, sg.difficulty, sidecar);
  log << "wrote " << out.string() << " (" << sg.graph.num_nodes << " nodes, "
      << sg.graph.num_edges() << " edges), homophily " << format_real(empirical_homophily(sg.graph))
      << '\n';
  return 0;
}

int cmd_train(const TrainConfig& cfg, std::ostream& log) {
  cfg.rcl.validate();
  if (cfg.methods.empty()) throw std::invalid_argument("no methods requested");
  if (cfg.seeds.empty()) throw std::invalid_argument("no seeds requested");
  const Dataset data = base_dataset(cfg);

  fs::create_directories(cfg.out);
  open_for_write(cfg.out / "config.txt") << describe(cfg, "train");

  std::vector<RunRequest> requests;
  for (Method m : cfg.methods) {
    for (auto seed : cfg.seeds) {
      RunRequest r{.run_id = data.name + "/" + to_string(m) + "/seed" + std::to_string(seed),
                   .method = m,
                   .cfg = cfg.rcl,
                   .dataset = &data};
      r.cfg.seed = seed;
      requests.push_back(std::move(r));
    }
  }

  MetricsSink sink(cfg.out / "metrics.csv");
  std::map<std::string, std::vector<double>> accs;
  const auto failures = run_all(requests, cfg.workers, [&](std::size_t i, const RunOutcome& o) {
    sink.add(o.row);
    accs[o.row.method].push_back(o.row.test_acc);
    if (o.trace) {
      write_trace_csv(*o.trace, cfg.out / ("trace_" + o.row.method + "_seed" +
                                           std::to_string(requests[i].cfg.seed) + ".csv"));
    }
  });

  log << "dataset " << data.name << " (homo " << format_real(data.homo) << ", noise "
      << format_real(data.noise_ratio) << ")\n";
  for (Method m : cfg.methods) {
    const auto name = to_string(m);
    if (accs.count(name)) print_summary(name, accs[name], log);
  }
  if (!failures.empty()) {
    write_failures(failures, cfg.out / "failures.csv");
    log << failures.size() << " run(s) failed, see failures.csv\n";
    return 1;
  }
  return 0;
}

fs::path attacked_file_name(const fs::path& dataset, double ratio, const fs::path& out_dir) {
  const auto ext = dataset.has_extension() ? dataset.extension().string() : std::string(".graph");
  return out_dir / (dataset.stem().string() + "_ratio" + format_real(ratio) + ext);
}

int cmd_attack(const fs::path& dataset, const std::vector<double>& ratios, std::uint64_t seed,
               const fs::path& out_dir, std::ostream& log) {
  const Graph clean = load_graph(dataset);
  fs::create_directories(out_dir);
  int status = 0;
  for (double ratio : ratios) {
    try {
      const Graph g = inject_edges(clean, AttackSpec{ratio, seed});
      const auto path = attacked_file_name(dataset, ratio, out_dir);
      save_graph(g, path);
      auto sidecar = path;
      sidecar.replace_extension(".difficulty");
      save_difficulty(g, classify_edges(g), sidecar);
      log << "wrote " << path.string() << " (" << g.num_edges() << " edges)\n";
    } catch (const std::exception& e) {
      log << "ratio " << format_real(ratio) << " failed: " << e.what() << '\n';
      status = 1;
    }
  }
  return status;
}

int cmd_sweep(const SweepConfig& cfg, std::ostream& log) {
  const TrainConfig& base = cfg.base;
  base.rcl.validate();
  if (cfg.values.empty()) throw std::invalid_argument("sweep: no values");
  if (base.methods.empty() || base.seeds.empty()) {
    throw std::invalid_argument("sweep: methods and seeds must be non-empty");
  }
  if (cfg.axis == SweepAxis::kHomo && !base.dataset.empty()) {
    throw std::invalid_argument("sweep: the homo axis generates its own datasets; drop --dataset");
  }
  if (cfg.axis == SweepAxis::kPace) {
    for (double v : cfg.values) {
      if (v != std::floor(v) || v < 1 || v > 5) {
        throw std::invalid_argument("sweep: pace values must be integers in 1..5");
      }
    }
  }

  fs::create_directories(base.out);
  {
    auto out = open_for_write(base.out / "config.txt");
    out << describe(base, "sweep") << "axis=" << to_string(cfg.axis) << "\nvalues=";
    for (std::size_t i = 0; i < cfg.values.size(); ++i) out << (i ? "," : "") << format_real(cfg.values[i]);
    out << '\n';
  }

  // Datasets first; a value whose dataset cannot be built fails all its runs.
  std::vector<std::optional<Dataset>> datasets(cfg.values.size());
  std::vector<RunFailure> failures;
  std::optional<Dataset> shared;
  if (cfg.axis != SweepAxis::kHomo) shared = base_dataset(base);
  for (std::size_t v = 0; v < cfg.values.size(); ++v) {
    try {
      switch (cfg.axis) {
        case SweepAxis::kHomo: {
          SynthParams p = base.synth;
          p.homo = cfg.values[v];
          datasets[v] = synthetic_dataset(p);
          if (base.attack_ratio > 0.0) {
            datasets[v] = attacked(*datasets[v], base.attack_ratio, base.attack_seed);
          }
          break;
        }
        case SweepAxis::kRatio:
          datasets[v] = cfg.values[v] > 0.0 ? attacked(*shared, cfg.values[v], base.attack_seed)
                                            : *shared;
          break;
        case SweepAxis::kPace:
          break;
      }
    } catch (const std::exception& e) {
      const std::string label = to_string(cfg.axis) + "=" + format_real(cfg.values[v]);
      for (Method m : base.methods) {
        for (auto seed : base.seeds) {
          failures.push_back({label + "/" + to_string(m) + "/seed" + std::to_string(seed), e.what()});
        }
      }
    }
  }

  std::vector<RunRequest> requests;
  std::vector<std::size_t> value_of;
  for (std::size_t v = 0; v < cfg.values.size(); ++v) {
    const Dataset* d = cfg.axis == SweepAxis::kPace ? &*shared
                       : datasets[v]                 ? &*datasets[v]
                                                     : nullptr;
    if (!d) continue;
    for (Method m : base.methods) {
      for (auto seed : base.seeds) {
        RunRequest r{.run_id = to_string(cfg.axis) + "=" + format_real(cfg.values[v]) + "/" +
                               to_string(m) + "/seed" + std::to_string(seed),
                     .method = m,
                     .cfg = base.rcl,
                     .dataset = d};
        r.cfg.seed = seed;
        if (cfg.axis == SweepAxis::kPace) r.cfg.pace = static_cast<int>(cfg.values[v]);
        requests.push_back(std::move(r));
        value_of.push_back(v);
      }
    }
  }

  MetricsSink sink(base.out / "sweep.csv");
  std::map<std::pair<std::size_t, std::string>, std::vector<double>> accs;
  auto run_failures = run_all(requests, base.workers, [&](std::size_t i, const RunOutcome& o) {
    sink.add(o.row);
    accs[{value_of[i], o.row.method}].push_back(o.row.test_acc);
  });
  failures.insert(failures.end(), run_failures.begin(), run_failures.end());

  for (Method m : base.methods) {
    const auto name = to_string(m);
    std::vector<double> means;
    for (std::size_t v = 0; v < cfg.values.size(); ++v) {
      auto it = accs.find({v, name});
      if (it == accs.end()) continue;
      print_summary(to_string(cfg.axis) + "=" + format_real(cfg.values[v]) + " " + name, it->second,
                    log);
      means.push_back(summarize(it->second).mean);
    }
    if (cfg.axis == SweepAxis::kPace && means.size() > 1) {
      log << name << ": std of per-pace means " << percent(summarize(means).stddev) << '\n';
    }
  }
  if (!failures.empty()) {
    write_failures(failures, base.out / "failures.csv");
    log << failures.size() << " run(s) failed, see failures.csv\n";
    return 1;
  }
  return 0;
}

int cmd_trace_plot(const std::vector<fs::path>& traces, const fs::path& out, std::ostream& log) {
  if (traces.empty()) throw std::invalid_argument("trace-plot: no trace files");
  auto csv = open_for_write(out);
  csv << "trace,iter,series,value\n";
  std::size_t rows = 0;
  for (const auto& path : traces) {
    const auto name = path.stem().string();
    require_plain_field(name, "trace name");
    const auto trace = read_trace_csv(path);
    for (const auto& r : trace.records) {
      auto emit = [&](const char* series, const std::string& value) {
        csv << name << ',' << r.iter << ',' << series << ',' << value << '\n';
        ++rows;
      };
      emit("lambda", format_real(r.lambda));
      emit("num_selected", std::to_string(r.num_selected));
      if (r.frac_easy) emit("frac_easy", format_real(*r.frac_easy));
      if (r.frac_medium) emit("frac_medium", format_real(*r.frac_medium));
      if (r.frac_hard) emit("frac_hard", format_real(*r.frac_hard));
      emit("train_loss", format_real(r.train_loss));
      emit("val_acc", format_real(r.val_acc));
    }
  }
  log << "wrote " << out.string() << " (" << rows << " rows from " << traces.size() << " traces)\n";
  return 0;
}

}  // namespace rcl
