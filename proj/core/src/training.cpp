#include "specgnn/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "specgnn/parallel.hpp"
#include "specgnn/rng.hpp"

namespace specgnn {

namespace {

double step_for(const TrainConfig& cfg, std::size_t global_step) {
  if (cfg.schedule == StepSchedule::inv_sqrt) {
    return cfg.step_size / std::sqrt(static_cast<double>(global_step + 1));
  }
  return cfg.step_size;
}

void validate(const GnnModel& model, const TrainSet& data, const TrainConfig& cfg) {
  if (!(cfg.step_size > 0.0) || !std::isfinite(cfg.step_size)) {
    throw std::invalid_argument("train: step size must be positive and finite");
  }
  if (cfg.batch_size == 0) throw std::invalid_argument("train: batch size must be >= 1");
  if (cfg.start_epoch > cfg.epochs) {
    throw std::invalid_argument("train: start_epoch " + std::to_string(cfg.start_epoch) +
                                " exceeds epochs " + std::to_string(cfg.epochs));
  }
  if (data.samples.empty()) throw std::invalid_argument("train: dataset is empty");
  if (data.graphs.empty()) throw std::invalid_argument("train: dataset has no graphs");
  for (const TrainSample& sample : data.samples) {
    if (sample.graph_index >= data.graphs.size()) {
      throw std::invalid_argument("train: sample references graph " +
                                  std::to_string(sample.graph_index) + " but only " +
                                  std::to_string(data.graphs.size()) + " exist");
    }
  }
  if (cfg.method == TrainMethod::lipschitz) {
    if (!cfg.constraint) {
      throw std::invalid_argument("train: the lipschitz method requires a constraint spec");
    }
    if (cfg.constraint->taps() != model.taps()) {
      throw std::invalid_argument("train: constraint expects " +
                                  std::to_string(cfg.constraint->taps()) +
                                  " taps but the model has " + std::to_string(model.taps()));
    }
    if (!cfg.per_layer_bounds.empty() && cfg.per_layer_bounds.size() != model.layer_count()) {
      throw std::invalid_argument("train: per_layer_bounds has " +
                                  std::to_string(cfg.per_layer_bounds.size()) +
                                  " entries but the model has " +
                                  std::to_string(model.layer_count()) + " layers");
    }
  }
  if (cfg.method == TrainMethod::awgn_augment && !(cfg.noise_sigma >= 0.0)) {
    throw std::invalid_argument("train: noise_sigma must be >= 0");
  }
  if (!(cfg.readout_norm_cap >= 0.0) || !std::isfinite(cfg.readout_norm_cap)) {
    throw std::invalid_argument("train: readout_norm_cap must be >= 0 and finite");
  }
  if (cfg.method == TrainMethod::pgd_adversarial && !(cfg.pgd_epsilon >= 0.0)) {
    throw std::invalid_argument("train: pgd_epsilon must be >= 0");
  }
}

// One spec per layer: the shared spec, re-bounded per layer when overridden.
std::vector<ConstraintSpec> layer_specs(const GnnModel& model, const TrainConfig& cfg) {
  std::vector<ConstraintSpec> specs;
  if (cfg.method != TrainMethod::lipschitz) return specs;
  specs.reserve(model.layer_count());
  for (std::size_t q = 0; q < model.layer_count(); ++q) {
    if (cfg.per_layer_bounds.empty()) {
      specs.push_back(*cfg.constraint);
    } else {
      specs.push_back(cfg.constraint->with_bound(cfg.per_layer_bounds[q]));
    }
  }
  return specs;
}

void project_layers(GnnModel& model, const std::vector<ConstraintSpec>& specs) {
  for (std::size_t q = 0; q < model.layer_count(); ++q) {
    FilterTensor& t = model.layers()[q];
    for (std::size_t f = 0; f < t.in_banks(); ++f) {
      for (std::size_t g = 0; g < t.out_filters(); ++g) {
        specs[q].project_in_place(t.filter(f, g));
      }
    }
  }
}

double model_violation(const GnnModel& model, const std::vector<ConstraintSpec>& specs) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t q = 0; q < model.layer_count(); ++q) {
    const FilterTensor& t = model.layers()[q];
    for (std::size_t f = 0; f < t.in_banks(); ++f) {
      for (std::size_t g = 0; g < t.out_filters(); ++g) {
        worst = std::max(worst, specs[q].max_response(t.filter(f, g)) - specs[q].bound_c());
      }
    }
  }
  return worst;
}

void accumulate(Gradients& total, const Gradients& g) {
  for (std::size_t q = 0; q < total.layers.size(); ++q) {
    std::vector<double>& acc = total.layers[q].values();
    const std::vector<double>& inc = g.layers[q].values();
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += inc[i];
  }
  total.readout += g.readout;
}

void apply_step(GnnModel& model, const Gradients& grads, const TrainConfig& cfg, double eta) {
  for (std::size_t q = 0; q < model.layer_count(); ++q) {
    std::vector<double>& w = model.layers()[q].values();
    const std::vector<double>& g = grads.layers[q].values();
    for (std::size_t i = 0; i < w.size(); ++i) w[i] -= eta * g[i];
  }
  if (cfg.train_readout) {
    model.readout().add_scaled(grads.readout, -eta);
    if (cfg.readout_norm_cap > 0.0) {
      const double norm = frobenius_norm(model.readout());
      if (norm > cfg.readout_norm_cap) model.readout() *= cfg.readout_norm_cap / norm;
    }
  }
}

Gradients zero_gradients(const GnnModel& model) {
  Gradients g;
  g.layers.reserve(model.layer_count());
  for (const FilterTensor& t : model.layers()) {
    g.layers.emplace_back(t.in_banks(), t.out_filters(), t.taps());
  }
  g.readout = DenseMatrix(model.readout().rows(), model.readout().cols());
  return g;
}

}  // namespace

std::string to_string(TrainMethod m) {
  switch (m) {
    case TrainMethod::unconstrained:
      return "unconstrained";
    case TrainMethod::lipschitz:
      return "lipschitz";
    case TrainMethod::awgn_augment:
      return "awgn_augment";
    case TrainMethod::pgd_adversarial:
      return "pgd_adversarial";
  }
  throw std::logic_error("to_string: unknown train method");
}

TrainMethod train_method_from_string(const std::string& s) {
  if (s == "unconstrained") return TrainMethod::unconstrained;
  if (s == "lipschitz") return TrainMethod::lipschitz;
  if (s == "awgn_augment") return TrainMethod::awgn_augment;
  if (s == "pgd_adversarial") return TrainMethod::pgd_adversarial;
  throw std::invalid_argument(
      "unknown train method '" + s +
      "' (expected unconstrained|lipschitz|awgn_augment|pgd_adversarial)");
}

std::string to_string(StepSchedule s) {
  switch (s) {
    case StepSchedule::constant:
      return "constant";
    case StepSchedule::inv_sqrt:
      return "inv_sqrt";
  }
  throw std::logic_error("to_string: unknown step schedule");
}

StepSchedule step_schedule_from_string(const std::string& s) {
  if (s == "constant") return StepSchedule::constant;
  if (s == "inv_sqrt") return StepSchedule::inv_sqrt;
  throw std::invalid_argument("unknown step schedule '" + s + "' (expected constant|inv_sqrt)");
}

void write_trace_csv(const std::string& path, const TrainTrace& trace, bool include_seconds) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_trace_csv: cannot open " + path);
  out << (include_seconds ? "epoch,loss,violation,seconds\n" : "epoch,loss,violation\n");
  char buf[128];
  for (const EpochStats& row : trace.epochs) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g", row.epoch, row.loss);
    out << buf;
    if (std::isnan(row.violation)) {
      out << ",n/a";
    } else {
      std::snprintf(buf, sizeof(buf), ",%.17g", row.violation);
      out << buf;
    }
    if (include_seconds) {
      std::snprintf(buf, sizeof(buf), ",%.6f", row.seconds);
      out << buf;
    }
    out << "\n";
  }
}

TrainTrace train(GnnModel& model, const TrainSet& data, const TrainConfig& cfg) {
  validate(model, data, cfg);
  const std::vector<ConstraintSpec> specs = layer_specs(model, cfg);
  const bool constrained = !specs.empty();

  // Start feasible so every observable model state satisfies the constraint.
  if (constrained) project_layers(model, specs);

  TrainTrace trace;
  const std::size_t sample_count = data.samples.size();
  const std::size_t batches_per_epoch = (sample_count + cfg.batch_size - 1) / cfg.batch_size;

  std::vector<std::size_t> order(sample_count);
  for (std::uint64_t epoch = cfg.start_epoch; epoch < cfg.epochs; ++epoch) {
    const auto epoch_start = std::chrono::steady_clock::now();

    Rng shuffle_rng(derive_seed(cfg.seed, epoch, 0));
    std::iota(order.begin(), order.end(), std::size_t{0});
    shuffle_rng.shuffle(order);
    const std::uint64_t noise_base = derive_seed(cfg.seed, epoch, 1);

    double loss_sum = 0.0;
    for (std::size_t b = 0; b < batches_per_epoch; ++b) {
      const std::size_t lo = b * cfg.batch_size;
      const std::size_t hi = std::min(sample_count, lo + cfg.batch_size);
      const std::size_t batch_n = hi - lo;

      std::vector<Gradients> sample_grads(batch_n);
      std::vector<double> sample_losses(batch_n);
      parallel_for(0, batch_n, cfg.threads, [&](std::size_t j) {
        const TrainSample& sample = data.samples[order[lo + j]];
        const GraphShiftOperator& s = data.graphs[sample.graph_index];

        GraphSignal x = sample.x;
        if (cfg.method == TrainMethod::awgn_augment && cfg.noise_sigma > 0.0) {
          x = awgn_perturb(x, cfg.noise_sigma, derive_seed(noise_base, b, j));
        } else if (cfg.method == TrainMethod::pgd_adversarial && cfg.pgd_epsilon > 0.0) {
          const double step = cfg.pgd_step_size > 0.0
                                  ? cfg.pgd_step_size
                                  : 2.5 * cfg.pgd_epsilon / static_cast<double>(cfg.pgd_steps);
          x = pgd_attack(model, s, x, sample.target, cfg.loss, cfg.pgd_epsilon, cfg.pgd_steps,
                         step);
        }

        ForwardCache cache;
        forward(model, s, x, cache);
        sample_losses[j] = loss(cache.output, sample.target, cfg.loss);
        sample_grads[j] = backward(model, s, cache, sample.target, cfg.loss);
      });

      // Fixed-order reduction keeps results independent of thread count.
      Gradients total = zero_gradients(model);
      double batch_loss = 0.0;
      for (std::size_t j = 0; j < batch_n; ++j) {
        accumulate(total, sample_grads[j]);
        batch_loss += sample_losses[j];
      }
      const double inv_n = 1.0 / static_cast<double>(batch_n);
      for (FilterTensor& t : total.layers) {
        for (double& v : t.values()) v *= inv_n;
      }
      total.readout *= inv_n;
      batch_loss *= inv_n;

      apply_step(model, total, cfg, step_for(cfg, epoch * batches_per_epoch + b));
      if (constrained) project_layers(model, specs);
      loss_sum += batch_loss;
    }

    EpochStats stats;
    stats.epoch = epoch;
    stats.loss = loss_sum / static_cast<double>(batches_per_epoch);
    stats.violation = constrained ? model_violation(model, specs)
                                  : std::numeric_limits<double>::quiet_NaN();
    stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - epoch_start)
                        .count();
    trace.epochs.push_back(stats);
    if (cfg.on_epoch) cfg.on_epoch(stats);

    if (!std::isfinite(stats.loss) || !model.all_finite()) {
      trace.aborted = true;
      trace.abort_reason = "non-finite loss or parameters at epoch " + std::to_string(epoch) +
                           "; reduce the step size";
      break;
    }
  }
  return trace;
}

GraphSignal pgd_attack(const GnnModel& model, const GraphShiftOperator& s, const GraphSignal& x,
                       const DenseMatrix& target, LossKind kind, double epsilon,
                       std::size_t steps, double step_size) {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("pgd_attack: epsilon must be >= 0 and finite");
  }
  if (epsilon == 0.0 || steps == 0) return x;
  if (!(step_size > 0.0)) {
    throw std::invalid_argument("pgd_attack: step size must be positive");
  }

  ForwardCache cache;
  forward(model, s, x, cache);
  double best_loss = loss(cache.output, target, kind);
  GraphSignal best = x;

  GraphSignal current = x;
  for (std::size_t step = 0; step < steps; ++step) {
    forward(model, s, current, cache);
    DenseMatrix input_grad;
    backward(model, s, cache, target, kind, &input_grad);

    for (std::size_t i = 0; i < current.rows(); ++i) {
      for (std::size_t j = 0; j < current.cols(); ++j) {
        const double g = input_grad(i, j);
        const double sign = g > 0.0 ? 1.0 : (g < 0.0 ? -1.0 : 0.0);
        const double moved = current(i, j) + step_size * sign;
        current(i, j) = std::clamp(moved, x(i, j) - epsilon, x(i, j) + epsilon);
      }
    }

    forward(model, s, current, cache);
    const double current_loss = loss(cache.output, target, kind);
    if (current_loss > best_loss) {
      best_loss = current_loss;
      best = current;
    }
  }
  return best;
}

GraphSignal awgn_perturb(const GraphSignal& x, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("awgn_perturb: sigma must be >= 0 and finite");
  }
  if (sigma == 0.0) return x;
  Rng rng(seed);
  GraphSignal out = x;
  for (double& v : out.entries()) v += sigma * rng.gaussian();
  return out;
}

}  // namespace specgnn
