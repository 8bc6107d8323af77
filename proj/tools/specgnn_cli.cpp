// specgnn: command-line front end tying data generation, constrained
// training, robustness evaluation, and frequency-response profiling into
// reproducible runs. Every command is a pure function of (config, input
// files, seed); all machine-readable artifacts land in the output directory
// and rerunning reproduces them byte-exactly. Timestamps and wall-clock
// timings live only in the sidecar run.log.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "specgnn/checkpoint.hpp"
#include "specgnn/constraints.hpp"
#include "specgnn/gnn.hpp"
#include "specgnn/graph.hpp"
#include "specgnn/rng.hpp"
#include "specgnn/robustness.hpp"
#include "specgnn/run_config.hpp"
#include "specgnn/svg.hpp"
#include "specgnn/tasks.hpp"
#include "specgnn/training.hpp"

namespace fs = std::filesystem;
using namespace specgnn;

namespace {

std::string timestamp_utc() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Sidecar log: the only artifact allowed to differ between reruns.
class RunLog {
 public:
  explicit RunLog(const std::string& path) : out_(path, std::ios::trunc) {
    if (!out_) throw std::runtime_error("cannot open log file " + path);
  }
  void line(const std::string& msg) {
    out_ << timestamp_utc() << ' ' << msg << '\n';
    out_.flush();
  }

 private:
  std::ofstream out_;
};

void prepare_out_dir(const std::string& dir, bool force) {
  if (dir.empty()) {
    throw std::invalid_argument("an output directory is required (--out or config out_dir)");
  }
  fs::path p(dir);
  if (fs::exists(p)) {
    if (!fs::is_directory(p)) {
      throw std::invalid_argument(dir + " exists and is not a directory");
    }
    if (!fs::is_empty(p) && !force) {
      throw std::invalid_argument("output directory " + dir +
                                  " is not empty; pass --force to overwrite");
    }
  } else {
    fs::create_directories(p);
  }
}

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

// A dataset directory loaded into train/test splits plus whatever the
// constraint builders need (the static shift operator or the dynamic
// family's frequency interval).
struct LoadedTask {
  std::string kind;
  TrainSet train;
  TrainSet test;
  std::optional<GraphShiftOperator> static_shift;
  std::optional<EigenvalueInterval> family_interval;
  std::size_t channels = 1;
  std::size_t label_classes = 0;
};

LoadedTask load_task(const std::string& dir) {
  if (dir.empty()) {
    throw std::invalid_argument("a dataset directory is required (--data or config data_dir)");
  }
  if (!fs::exists(fs::path(dir) / "manifest.json")) {
    throw std::invalid_argument("no dataset manifest in " + dir + "; run gen-data first");
  }
  LoadedTask t;
  t.kind = dataset_kind(dir);
  if (t.kind == "source_localization") {
    SourceLocDataset ds = load_source_localization(dir);
    t.train = to_train_set(ds, ds.train_idx);
    t.test = to_train_set(ds, ds.test_idx);
    t.static_shift = ds.shift;
    t.channels = ds.params.channels;
    t.label_classes = ds.params.communities;
  } else {
    DynamicEvalSet ds = load_dynamic_task(dir);
    t.train = to_train_set(ds, ds.train_idx);
    t.test = to_train_set(ds, ds.test_idx);
    t.family_interval = harvest_interval(ds.shifts);
    t.channels = 1;
    t.label_classes = ds.raw.node_count();
  }
  return t;
}

GnnModel build_model(const ModelConfig& mc, const LoadedTask& task) {
  if (mc.feature_dims.empty() || mc.feature_dims.front() != task.channels) {
    throw std::invalid_argument(fmt("model.feature_dims must start with the dataset's %zu input "
                                    "channel(s)",
                                    task.channels));
  }
  if (mc.output_dim != task.label_classes) {
    throw std::invalid_argument(fmt("model.output_dim is %zu but the dataset has %zu classes",
                                    mc.output_dim, task.label_classes));
  }
  const ReadoutMode mode = readout_mode_from_string(mc.readout_mode);
  const std::size_t nodes =
      mode == ReadoutMode::flatten ? task.train.graphs.front().node_count() : 0;
  return GnnModel(mc.feature_dims, mc.taps, nonlinearity_from_string(mc.nonlinearity), mode,
                  mc.output_dim, nodes);
}

ConstraintSpec build_constraint(const RunConfig& cfg, const LoadedTask& task) {
  const ConstraintConfig& cc = cfg.constraint;
  if (cc.mode == "static") {
    if (!task.static_shift) {
      throw std::invalid_argument(
          "constraint mode 'static' needs a single-graph dataset; use 'scenario' for dynamic "
          "families");
    }
    return build_static_spec(*task.static_shift, cfg.model.taps, cc.bound_c);
  }
  if (cc.mode == "scenario") {
    double a = cc.interval_a;
    double b = cc.interval_b;
    if (cc.harvest) {
      if (!task.family_interval) {
        throw std::invalid_argument("constraint.harvest = true requires a dynamic dataset");
      }
      a = task.family_interval->lo;
      b = task.family_interval->hi;
    }
    ScenarioPlan plan = make_scenario_plan(a, b, cc.epsilon, cc.delta, cfg.model.taps, cc.seed);
    if (cc.m_override > 0) {
      plan.undersample_override = cc.m_override < plan.m_required;
      plan.m_used = cc.m_override;
    }
    return build_scenario_spec(plan, cfg.model.taps, cc.bound_c);
  }
  throw std::invalid_argument("train.method 'lipschitz' requires constraint.mode 'static' or "
                              "'scenario', got '" +
                              cc.mode + "'");
}

// "name=path" picks the report name explicitly; a bare path uses the file
// name up to its first dot ("runs/lipschitz.ckpt.json" -> "lipschitz").
std::pair<std::string, std::string> parse_model_arg(const std::string& arg) {
  std::string name;
  std::string path = arg;
  auto eq = arg.find('=');
  if (eq != std::string::npos && eq > 0) {
    name = arg.substr(0, eq);
    path = arg.substr(eq + 1);
  } else {
    name = fs::path(arg).filename().string();
    auto dot = name.find('.');
    if (dot != std::string::npos && dot > 0) name = name.substr(0, dot);
  }
  if (path.empty() || name.empty()) {
    throw std::invalid_argument("bad checkpoint argument '" + arg + "' (use path or name=path)");
  }
  if (!fs::exists(path)) {
    throw std::invalid_argument("checkpoint not found: " + path);
  }
  return {name, path};
}

std::vector<std::pair<std::string, Checkpoint>> load_named_checkpoints(
    const std::vector<std::string>& args) {
  std::vector<std::pair<std::string, Checkpoint>> out;
  for (const std::string& arg : args) {
    auto [name, path] = parse_model_arg(arg);
    for (const auto& [seen, _] : out) {
      if (seen == name) {
        throw std::invalid_argument("duplicate model name '" + name +
                                    "'; disambiguate with name=path");
      }
    }
    out.emplace_back(name, load_checkpoint(path));
  }
  return out;
}

int cmd_gen_data(RunConfig cfg, bool force) {
  prepare_out_dir(cfg.out_dir, force);
  RunLog log(cfg.out_dir + "/run.log");
  log.line("gen-data start");
  save_run_config(cfg.out_dir + "/config.json", cfg);

  const TaskConfig& t = cfg.task;
  if (t.kind == "source_localization") {
    SourceLocParams p{t.n, t.communities, t.p_in, t.p_out, t.num_samples,
                      t.horizon, t.channels, t.seed};
    SourceLocDataset ds = gen_source_localization(p);
    save_dataset(cfg.out_dir, ds);
    std::cerr << fmt("generated %zu diffusion samples on a %zu-node SBM (%zu communities)\n",
                     ds.size(), t.n, t.communities);
  } else {
    DynamicGraphSequence seq = generate_rgg_sequence(t.n, t.radius, t.sequence_length,
                                                     t.step_scale, derive_seed(t.seed, 0));
    DynamicEvalSet ds = gen_dynamic_task(seq, t.num_samples, t.horizon, derive_seed(t.seed, 1));
    save_dataset(cfg.out_dir, ds);
    std::cerr << fmt("generated %zu diffusion samples on a %zu-step dynamic family (%zu nodes)\n",
                     ds.size(), t.sequence_length, t.n);
  }
  log.line("gen-data done");
  return 0;
}

int cmd_train(RunConfig cfg, const std::string& resume_path, std::size_t threads, bool force) {
  prepare_out_dir(cfg.out_dir, force);
  RunLog log(cfg.out_dir + "/run.log");
  log.line("train start (method " + cfg.train.method + ")");
  save_run_config(cfg.out_dir + "/config.json", cfg);

  LoadedTask task = load_task(cfg.data_dir);
  GnnModel model = build_model(cfg.model, task);
  TrainMethod method = train_method_from_string(cfg.train.method);

  std::optional<ConstraintSpec> spec;
  std::uint64_t start_epoch = 0;
  if (!resume_path.empty()) {
    Checkpoint cp = load_checkpoint(resume_path);
    bool same_arch = cp.model.feature_dims() == cfg.model.feature_dims &&
                     cp.model.taps() == cfg.model.taps &&
                     to_string(cp.model.nonlinearity()) == cfg.model.nonlinearity &&
                     to_string(cp.model.readout_mode()) == cfg.model.readout_mode &&
                     cp.model.output_dim() == cfg.model.output_dim &&
                     cp.model.nodes() == model.nodes();
    if (!same_arch) {
      throw std::invalid_argument("checkpoint architecture differs from model config; refusing "
                                  "to resume");
    }
    model = std::move(cp.model);
    spec = std::move(cp.constraint);
    start_epoch = cp.epochs_completed;
    log.line(fmt("resumed from %s at epoch %llu", resume_path.c_str(),
                 static_cast<unsigned long long>(start_epoch)));
    std::cerr << fmt("resuming at epoch %llu/%zu\n", static_cast<unsigned long long>(start_epoch),
                     cfg.train.epochs);
  } else {
    Rng init_rng(derive_seed(cfg.train.seed, 0, 2));
    model.init_random(init_rng);
  }
  if (method == TrainMethod::lipschitz && !spec) spec = build_constraint(cfg, task);

  TrainConfig tc;
  tc.method = method;
  tc.step_size = cfg.train.step_size;
  tc.schedule = step_schedule_from_string(cfg.train.schedule);
  tc.batch_size = cfg.train.batch_size;
  tc.epochs = cfg.train.epochs;
  tc.loss = loss_kind_from_string(cfg.train.loss);
  tc.seed = cfg.train.seed;
  tc.constraint = spec;
  tc.per_layer_bounds = cfg.train.per_layer_bounds;
  tc.noise_sigma = cfg.train.noise_sigma;
  tc.pgd_epsilon = cfg.train.pgd_epsilon;
  tc.pgd_steps = cfg.train.pgd_steps;
  tc.pgd_step_size = cfg.train.pgd_step_size;
  tc.start_epoch = start_epoch;
  tc.threads = threads;
  tc.on_epoch = [&](const EpochStats& st) {
    std::string v = std::isnan(st.violation) ? std::string("n/a") : fmt("%.3e", st.violation);
    std::cerr << fmt("epoch %zu/%zu loss=%.6f violation=%s\n", st.epoch + 1, cfg.train.epochs,
                     st.loss, v.c_str());
    log.line(fmt("epoch %zu loss=%.17g violation=%s seconds=%.3f", st.epoch, st.loss, v.c_str(),
                 st.seconds));
  };

  TrainTrace trace = train(model, task.train, tc);
  write_trace_csv(cfg.out_dir + "/trace.csv", trace, /*include_seconds=*/false);
  if (trace.aborted) {
    log.line("train aborted: " + trace.abort_reason);
    std::cerr << "training aborted: " << trace.abort_reason << "\n";
    return 1;
  }

  Checkpoint cp;
  cp.model = std::move(model);
  if (method == TrainMethod::lipschitz) cp.constraint = spec;
  cp.epochs_completed = cfg.train.epochs;
  save_checkpoint(cfg.out_dir + "/checkpoint.json", cp);

  if (method == TrainMethod::lipschitz) {
    const std::size_t grid_points = 100001;
    FeasibilityReport rep = check_feasibility(cp.model.layers(), *spec, grid_points);
    double lo = spec->lambdas().front();
    double hi = spec->lambdas().back();
    if (spec->plan()) {
      lo = spec->plan()->interval_a;
      hi = spec->plan()->interval_b;
    }
    std::cout << fmt("feasibility over %zu constraint frequencies (c = %.17g):\n",
                     spec->lambdas().size(), spec->bound_c());
    std::cout << fmt("  max violation max|H(lambda)| - c : %.3e\n", rep.max_violation);
    std::cout << fmt("  rotated-box violation            : %.3e\n", rep.rotated_violation);
    std::cout << fmt("  grid violation fraction          : %.6f over [%g, %g] (%zu points)\n",
                     rep.grid_violation_fraction, lo, hi, grid_points);
    std::cout << fmt("  unconstrained singular directions: %zu\n", rep.unconstrained_directions);
    nlohmann::json j;
    j["max_violation"] = rep.max_violation;
    j["rotated_violation"] = rep.rotated_violation;
    j["grid_violation_fraction"] = rep.grid_violation_fraction;
    j["unconstrained_directions"] = rep.unconstrained_directions;
    j["grid_points"] = grid_points;
    j["interval"] = {lo, hi};
    std::ofstream out(cfg.out_dir + "/feasibility.json");
    out << j.dump(2) << "\n";
  } else {
    std::cout << "feasibility: violation n/a (method " << cfg.train.method
              << " trains without a constraint)\n";
  }
  log.line("train done");
  return 0;
}

int cmd_eval(RunConfig cfg, const std::vector<std::string>& ckpt_args, std::size_t threads,
             bool force) {
  prepare_out_dir(cfg.out_dir, force);
  RunLog log(cfg.out_dir + "/run.log");
  log.line("eval start");
  save_run_config(cfg.out_dir + "/config.json", cfg);

  LoadedTask task = load_task(cfg.data_dir);
  std::vector<NamedModel> models;
  for (auto& [name, cp] : load_named_checkpoints(ckpt_args)) {
    models.push_back({name, std::move(cp.model)});
  }

  SweepConfig sc;
  sc.perturbation = perturbation_from_string(cfg.sweep.perturbation);
  sc.magnitudes = cfg.sweep.magnitudes;
  sc.trials = cfg.sweep.trials;
  sc.seed = cfg.sweep.seed;
  sc.metric = metric_from_string(cfg.sweep.metric);
  sc.attack_loss = sc.metric == Metric::accuracy ? LossKind::cross_entropy_with_logits
                                                 : LossKind::mean_squared_error;
  sc.pgd_steps = cfg.sweep.pgd_steps;
  sc.threads = threads;

  std::cerr << fmt("sweeping %zu model(s) over %zu magnitude(s) x %zu trial(s) on %zu test "
                   "samples\n",
                   models.size(), sc.magnitudes.size(), sc.trials, task.test.size());
  RobustnessReport report = run_sweep(models, task.test, sc);
  write_report_csv(cfg.out_dir + "/report.csv", report);

  std::ofstream clean(cfg.out_dir + "/clean.csv");
  if (!clean) throw std::runtime_error("cannot open " + cfg.out_dir + "/clean.csv");
  clean << "method,clean_metric,checksum\n";
  for (const auto& [name, value] : report.clean_metric) {
    clean << name << ',' << fmt("%.17g", value) << ',' << report.model_checksums.at(name) << "\n";
  }
  clean.close();

  const bool awgn = sc.perturbation == Perturbation::awgn;
  std::vector<SvgSeries> series;
  for (const NamedModel& nm : models) {
    SvgSeries s;
    s.label = nm.name;
    for (const SweepRow& row : report.rows) {
      if (row.method == nm.name) {
        s.x.push_back(row.magnitude);
        s.y.push_back(row.metric_mean);
      }
    }
    series.push_back(std::move(s));
  }
  write_line_chart_svg(cfg.out_dir + "/report.svg",
                       awgn ? "Robustness under AWGN" : "Robustness under PGD attack",
                       awgn ? "noise level sigma" : "attack budget epsilon", cfg.sweep.metric,
                       series);

  std::cout << fmt("%-16s %12s %22s\n", "model", "clean",
                   fmt("at %s=%g", awgn ? "sigma" : "epsilon", sc.magnitudes.back()).c_str());
  for (const NamedModel& nm : models) {
    double last_mean = 0.0, last_err = 0.0;
    for (const SweepRow& row : report.rows) {
      if (row.method == nm.name && row.magnitude == sc.magnitudes.back()) {
        last_mean = row.metric_mean;
        last_err = row.metric_stderr;
      }
    }
    std::cout << fmt("%-16s %12.4f %14.4f +- %.4f\n", nm.name.c_str(),
                     report.clean_metric.at(nm.name), last_mean, last_err);
  }
  log.line("eval done");
  return 0;
}

int cmd_freq_response(const std::vector<std::string>& ckpt_args, double a, double b,
                      std::size_t grid_points, const std::string& out_dir, bool force) {
  if (!(a < b)) throw std::invalid_argument("--a must be strictly below --b");
  prepare_out_dir(out_dir, force);
  RunLog log(out_dir + "/run.log");
  log.line("freq-response start");

  auto checkpoints = load_named_checkpoints(ckpt_args);
  std::vector<NamedModel> models;
  for (auto& [name, cp] : checkpoints) models.push_back({name, cp.model});

  ProfileTable table = profile_frequency_response(models, a, b, grid_points);
  write_profile_table_csv(out_dir + "/profile.csv", table);

  std::optional<double> reference;
  for (const auto& [name, cp] : checkpoints) {
    if (cp.constraint) {
      reference = cp.constraint->bound_c();
      break;
    }
  }
  std::vector<SvgSeries> series;
  for (const auto& [name, profile] : table.profiles) {
    series.push_back({name, table.grid, profile});
  }
  write_line_chart_svg(out_dir + "/profile.svg", "Max absolute frequency response", "lambda",
                       "H*(lambda)", series, reference);

  nlohmann::json params;
  params["interval"] = {a, b};
  params["grid_points"] = grid_points;
  params["models"] = nlohmann::json::array();
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    const auto& [name, cp] = checkpoints[i];
    const std::vector<double>& profile = table.profiles[i].second;
    double peak = *std::max_element(profile.begin(), profile.end());
    nlohmann::json m;
    m["name"] = name;
    m["max_h_star"] = peak;
    m["checksum"] = model_checksum(cp.model);
    if (cp.constraint) {
      double c = cp.constraint->bound_c();
      double fraction = profile_violation_fraction(profile, c);
      m["bound_c"] = c;
      m["grid_violation_fraction"] = fraction;
      std::cout << fmt("%-16s max H* = %.6f, violation fraction over [%g, %g] = %.6f (c = %g)\n",
                       name.c_str(), peak, a, b, fraction, c);
    } else {
      std::cout << fmt("%-16s max H* = %.6f (unconstrained)\n", name.c_str(), peak);
    }
    params["models"].push_back(m);
  }
  std::ofstream rec(out_dir + "/freq_response.json");
  rec << params.dump(2) << "\n";
  log.line("freq-response done");
  return 0;
}

int cmd_scenario_sample_size(double epsilon, double delta, std::size_t taps) {
  std::cout << scenario_sample_size(epsilon, delta, taps) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Train and audit graph neural networks whose filter frequency responses are "
               "bounded during training (exact projection on a fixed graph spectrum, or sampled "
               "scenario constraints over a frequency interval), then certify robustness under "
               "AWGN and PGD perturbation sweeps."};
  app.require_subcommand(1);

  std::string config_path, out_dir, data_dir, resume_path;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  bool force = false;
  std::vector<std::string> ckpt_args;
  double fr_a = -0.75, fr_b = 1.25;
  std::size_t fr_grid = 512;
  double ss_epsilon = 0.0, ss_delta = 0.0;
  std::size_t ss_taps = 0;

  auto add_config = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "run configuration (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
  };
  auto add_out = [&](CLI::App* cmd) {
    cmd->add_option("--out", out_dir, "output directory (overrides config out_dir)");
    cmd->add_flag("--force", force, "allow writing into a non-empty output directory");
  };

  CLI::App* gen = app.add_subcommand("gen-data", "generate a dataset directory from a config");
  add_config(gen);
  add_out(gen);
  CLI::Option* gen_seed = gen->add_option("--seed", seed, "override task.seed");

  CLI::App* train_cmd =
      app.add_subcommand("train", "train a model per the config; writes checkpoint and trace");
  add_config(train_cmd);
  add_out(train_cmd);
  train_cmd->add_option("--data", data_dir, "dataset directory (overrides config data_dir)");
  CLI::Option* train_seed = train_cmd->add_option("--seed", seed, "override train.seed");
  train_cmd->add_option("--threads", threads, "worker thread cap")->check(CLI::PositiveNumber);
  train_cmd->add_option("--resume", resume_path, "checkpoint to continue from")
      ->check(CLI::ExistingFile);

  CLI::App* eval_cmd =
      app.add_subcommand("eval", "robustness sweep over trained checkpoints (path or name=path)");
  add_config(eval_cmd);
  add_out(eval_cmd);
  eval_cmd->add_option("--data", data_dir, "dataset directory (overrides config data_dir)");
  CLI::Option* eval_seed = eval_cmd->add_option("--seed", seed, "override sweep.seed");
  eval_cmd->add_option("--threads", threads, "worker thread cap")->check(CLI::PositiveNumber);
  eval_cmd->add_option("checkpoints", ckpt_args, "checkpoint files to compare")->required();

  CLI::App* fr = app.add_subcommand(
      "freq-response", "max |H(lambda)| profile of checkpointed models over a frequency grid");
  fr->add_option("checkpoints", ckpt_args, "checkpoint files to profile")->required();
  fr->add_option("--a", fr_a, "grid lower end");
  fr->add_option("--b", fr_b, "grid upper end");
  fr->add_option("--grid", fr_grid, "grid points")->check(CLI::Range(std::size_t{2}, SIZE_MAX));
  fr->add_option("--out", out_dir, "output directory")->required();
  fr->add_flag("--force", force, "allow writing into a non-empty output directory");

  CLI::App* ss = app.add_subcommand("scenario-sample-size",
                                    "print the frequency sample count m(epsilon, delta, K) that "
                                    "makes sampled constraints generalize");
  ss->add_option("--epsilon", ss_epsilon, "violation budget in (0, 1)")->required();
  ss->add_option("--delta", ss_delta, "confidence slack in (0, 1)")->required();
  ss->add_option("--taps", ss_taps, "filter tap count K")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed() || train_cmd->parsed() || eval_cmd->parsed()) {
      RunConfig cfg = load_run_config(config_path);
      if (!out_dir.empty()) cfg.out_dir = out_dir;
      if (!data_dir.empty()) cfg.data_dir = data_dir;
      if (gen->parsed()) {
        if (gen_seed->count() > 0) cfg.task.seed = seed;
        return cmd_gen_data(std::move(cfg), force);
      }
      if (train_cmd->parsed()) {
        if (train_seed->count() > 0) cfg.train.seed = seed;
        return cmd_train(std::move(cfg), resume_path, threads, force);
      }
      if (eval_seed->count() > 0) cfg.sweep.seed = seed;
      return cmd_eval(std::move(cfg), ckpt_args, threads, force);
    }
    if (fr->parsed()) {
      return cmd_freq_response(ckpt_args, fr_a, fr_b, fr_grid, out_dir, force);
    }
    return cmd_scenario_sample_size(ss_epsilon, ss_delta, ss_taps);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
