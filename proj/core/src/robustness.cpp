#include "specgnn/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "specgnn/checkpoint.hpp"
#include "specgnn/parallel.hpp"
#include "specgnn/rng.hpp"

namespace specgnn {

namespace {

void validate_sweep(const std::vector<NamedModel>& models, const TrainSet& data,
                    const SweepConfig& cfg) {
  if (models.empty()) throw std::invalid_argument("run_sweep: no models given");
  if (data.samples.empty()) throw std::invalid_argument("run_sweep: evaluation set is empty");
  if (cfg.magnitudes.empty()) throw std::invalid_argument("run_sweep: magnitude grid is empty");
  if (cfg.trials == 0) throw std::invalid_argument("run_sweep: trials must be >= 1");
  double prev = -1.0;
  for (double m : cfg.magnitudes) {
    if (!(m >= 0.0) || !std::isfinite(m)) {
      throw std::invalid_argument("run_sweep: magnitudes must be nonnegative and finite");
    }
    if (m < prev) throw std::invalid_argument("run_sweep: magnitudes must be ascending");
    prev = m;
  }
}

// Kahan-compensated mean so aggregation stays deterministic at 1e-12 even if
// per-trial work was computed concurrently.
double compensated_mean(const std::vector<double>& values) {
  double sum = 0.0, comp = 0.0;
  for (double v : values) {
    const double y = v - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum / static_cast<double>(values.size());
}

double standard_error(const std::vector<double>& values, double mean) {
  if (values.size() < 2) return 0.0;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double variance = ss / static_cast<double>(values.size() - 1);
  return std::sqrt(variance / static_cast<double>(values.size()));
}

// Metric over one perturbed copy of the evaluation set.
double evaluate_perturbed(const GnnModel& model, const TrainSet& data, const SweepConfig& cfg,
                          double magnitude, std::uint64_t trial_seed) {
  double correct = 0.0;
  std::size_t rows = 0;
  double loss_sum = 0.0;
  for (std::size_t i = 0; i < data.samples.size(); ++i) {
    const TrainSample& sample = data.samples[i];
    const GraphShiftOperator& s = data.graphs[sample.graph_index];

    GraphSignal x = sample.x;
    if (magnitude > 0.0) {
      if (cfg.perturbation == Perturbation::awgn) {
        x = awgn_perturb(x, magnitude, derive_seed(trial_seed, i));
      } else {
        const double step = 2.5 * magnitude / static_cast<double>(cfg.pgd_steps);
        x = pgd_attack(model, s, x, sample.target, cfg.attack_loss, magnitude, cfg.pgd_steps,
                       step);
      }
    }

    const DenseMatrix out = forward(model, s, x);
    if (cfg.metric == Metric::accuracy) {
      const std::vector<std::size_t> pred = argmax_rows(out);
      const std::vector<std::size_t> truth = argmax_rows(sample.target);
      for (std::size_t r = 0; r < pred.size(); ++r) {
        if (pred[r] == truth[r]) correct += 1.0;
      }
      rows += pred.size();
    } else {
      loss_sum += loss(out, sample.target, LossKind::mean_squared_error);
    }
  }
  if (cfg.metric == Metric::accuracy) return correct / static_cast<double>(rows);
  return loss_sum / static_cast<double>(data.samples.size());
}

}  // namespace

std::string to_string(Perturbation p) {
  switch (p) {
    case Perturbation::awgn:
      return "awgn";
    case Perturbation::pgd:
      return "pgd";
  }
  throw std::logic_error("to_string: unknown perturbation");
}

Perturbation perturbation_from_string(const std::string& s) {
  if (s == "awgn") return Perturbation::awgn;
  if (s == "pgd") return Perturbation::pgd;
  throw std::invalid_argument("unknown perturbation '" + s + "' (expected awgn|pgd)");
}

std::string to_string(Metric m) {
  switch (m) {
    case Metric::accuracy:
      return "accuracy";
    case Metric::mse:
      return "mse";
  }
  throw std::logic_error("to_string: unknown metric");
}

Metric metric_from_string(const std::string& s) {
  if (s == "accuracy") return Metric::accuracy;
  if (s == "mse") return Metric::mse;
  throw std::invalid_argument("unknown metric '" + s + "' (expected accuracy|mse)");
}

double evaluate_accuracy(const GnnModel& model, const TrainSet& data) {
  if (data.samples.empty()) throw std::invalid_argument("evaluate_accuracy: empty set");
  double correct = 0.0;
  std::size_t rows = 0;
  for (const TrainSample& sample : data.samples) {
    const DenseMatrix out = forward(model, data.graphs[sample.graph_index], sample.x);
    const std::vector<std::size_t> pred = argmax_rows(out);
    const std::vector<std::size_t> truth = argmax_rows(sample.target);
    for (std::size_t r = 0; r < pred.size(); ++r) {
      if (pred[r] == truth[r]) correct += 1.0;
    }
    rows += pred.size();
  }
  return correct / static_cast<double>(rows);
}

double evaluate_loss(const GnnModel& model, const TrainSet& data, LossKind kind) {
  if (data.samples.empty()) throw std::invalid_argument("evaluate_loss: empty set");
  double total = 0.0;
  for (const TrainSample& sample : data.samples) {
    const DenseMatrix out = forward(model, data.graphs[sample.graph_index], sample.x);
    total += loss(out, sample.target, kind);
  }
  return total / static_cast<double>(data.samples.size());
}

std::string model_checksum(const GnnModel& model) {
  // FNV-1a over the exact parameter bit patterns.
  std::uint64_t hash = 14695981039346656037ull;
  auto mix = [&hash](const std::vector<double>& values) {
    for (double v : values) {
      std::uint64_t bits = 0;
      static_assert(sizeof(bits) == sizeof(v));
      std::memcpy(&bits, &v, sizeof(bits));
      for (int byte = 0; byte < 8; ++byte) {
        hash ^= (bits >> (8 * byte)) & 0xFFu;
        hash *= 1099511628211ull;
      }
    }
  };
  for (const FilterTensor& t : model.layers()) mix(t.values());
  mix(model.readout().entries());
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

RobustnessReport run_sweep(const std::vector<NamedModel>& models, const TrainSet& data,
                           const SweepConfig& cfg) {
  validate_sweep(models, data, cfg);

  RobustnessReport report;
  for (const NamedModel& nm : models) {
    report.clean_metric[nm.name] = evaluate_perturbed(nm.model, data, cfg, 0.0, 0);
    report.model_checksums[nm.name] = model_checksum(nm.model);
  }

  for (const NamedModel& nm : models) {
    for (std::size_t mi = 0; mi < cfg.magnitudes.size(); ++mi) {
      const double magnitude = cfg.magnitudes[mi];
      std::vector<double> trial_metrics(cfg.trials);
      parallel_for(0, cfg.trials, cfg.threads, [&](std::size_t trial) {
        // Noise seeds depend only on (sweep seed, magnitude, trial), so every
        // model sees identical AWGN inputs; PGD ignores the seed entirely.
        const std::uint64_t trial_seed = derive_seed(cfg.seed, mi, trial);
        trial_metrics[trial] = evaluate_perturbed(nm.model, data, cfg, magnitude, trial_seed);
      });

      SweepRow row;
      row.method = nm.name;
      row.perturbation = to_string(cfg.perturbation);
      row.magnitude = magnitude;
      row.trial_count = cfg.trials;
      row.metric_mean = compensated_mean(trial_metrics);
      row.metric_stderr = standard_error(trial_metrics, row.metric_mean);
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

void write_report_csv(const std::string& path, const RobustnessReport& report) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_report_csv: cannot open " + path);
  out << "method,perturbation,magnitude,trial_count,metric_mean,metric_stderr\n";
  char buf[160];
  for (const SweepRow& row : report.rows) {
    std::snprintf(buf, sizeof(buf), ",%.17g,%zu,%.17g,%.17g\n", row.magnitude, row.trial_count,
                  row.metric_mean, row.metric_stderr);
    out << row.method << "," << row.perturbation << buf;
  }
}

ProfileTable profile_frequency_response(const std::vector<NamedModel>& models, double a, double b,
                                        std::size_t grid_points) {
  if (models.empty()) {
    throw std::invalid_argument("profile_frequency_response: no models given");
  }
  ProfileTable table;
  table.grid = uniform_grid(a, b, grid_points);
  for (const NamedModel& nm : models) {
    table.profiles.emplace_back(nm.name, max_response_profile(nm.model.layers(), table.grid));
  }
  return table;
}

void write_profile_table_csv(const std::string& path, const ProfileTable& table) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_profile_table_csv: cannot open " + path);
  out << "model,lambda,h_star\n";
  char buf[96];
  for (const auto& [name, profile] : table.profiles) {
    for (std::size_t i = 0; i < table.grid.size(); ++i) {
      std::snprintf(buf, sizeof(buf), ",%.17g,%.17g\n", table.grid[i], profile[i]);
      out << name << buf;
    }
  }
}

double profile_violation_fraction(const std::vector<double>& profile, double bound) {
  if (profile.empty()) throw std::invalid_argument("profile_violation_fraction: empty profile");
  std::size_t violations = 0;
  for (double v : profile) {
    if (v > bound) ++violations;
  }
  return static_cast<double>(violations) / static_cast<double>(profile.size());
}

}  // namespace specgnn
