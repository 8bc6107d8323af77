#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "specgnn/constraints.hpp"
#include "specgnn/gnn.hpp"
#include "specgnn/graph.hpp"

namespace specgnn {

enum class TrainMethod { unconstrained, lipschitz, awgn_augment, pgd_adversarial };
enum class StepSchedule { constant, inv_sqrt };

std::string to_string(TrainMethod m);
TrainMethod train_method_from_string(const std::string& s);
std::string to_string(StepSchedule s);
StepSchedule step_schedule_from_string(const std::string& s);

struct EpochStats;

/// One labeled example: a signal on graphs[graph_index] and a target shaped
/// like the model output (one-hot rows for classification).
struct TrainSample {
  std::size_t graph_index = 0;
  GraphSignal x;
  DenseMatrix target;
};

/// Self-contained training/evaluation split; samples reference the shared
/// graph table by index so dynamic families need only one operator per step.
struct TrainSet {
  std::vector<GraphShiftOperator> graphs;
  std::vector<TrainSample> samples;

  std::size_t size() const { return samples.size(); }
};

struct TrainConfig {
  TrainMethod method = TrainMethod::unconstrained;
  double step_size = 0.05;
  StepSchedule schedule = StepSchedule::constant;
  std::size_t batch_size = 32;
  std::size_t epochs = 0;
  LossKind loss = LossKind::cross_entropy_with_logits;
  std::uint64_t seed = 0;

  /// Required for the lipschitz method; ignored by the others.
  std::optional<ConstraintSpec> constraint;
  /// Optional per-layer bounds overriding constraint->bound_c() (same length
  /// as the model's layer list).
  std::vector<double> per_layer_bounds;

  /// When false the readout matrix keeps its initial value and only the
  /// filter taps receive gradient steps (the parameter set the projection
  /// acts on). Used by experiments whose readout is a fixed structural map.
  bool train_readout = true;

  /// When positive, the readout is projected onto the Frobenius ball of this
  /// radius after every step (for every training method). Without a cap an
  /// unconstrained readout can rescale away any filter normalization, so
  /// filter-level constraints stop being visible in the end-to-end map.
  double readout_norm_cap = 0.0;

  double noise_sigma = 0.0;  // awgn_augment: training noise level

  double pgd_epsilon = 0.0;   // pgd_adversarial: training attack budget
  std::size_t pgd_steps = 10;
  double pgd_step_size = 0.0;  // 0 selects the default 2.5 * epsilon / steps

  /// First epoch index to run (resume support): epochs [start_epoch, epochs)
  /// execute with per-epoch seeds derived from `seed`, so a resumed run is
  /// bit-identical to an uninterrupted one.
  std::uint64_t start_epoch = 0;

  std::size_t threads = 1;

  /// Invoked after each completed epoch (progress reporting); may be empty.
  std::function<void(const EpochStats&)> on_epoch;
};

struct EpochStats {
  std::size_t epoch = 0;
  double loss = 0.0;
  /// Max over filters and constraint frequencies of |H(lambda)| - c after the
  /// epoch; NaN when training is unconstrained.
  double violation = 0.0;
  double seconds = 0.0;
};

struct TrainTrace {
  std::vector<EpochStats> epochs;
  bool aborted = false;
  std::string abort_reason;
};

/// CSV export (epoch, loss, violation, seconds). Violation is written as
/// "n/a" for unconstrained methods. Timing is wall-clock and thus not
/// reproducible; pass include_seconds=false for byte-exact artifacts and keep
/// timings in a sidecar log.
void write_trace_csv(const std::string& path, const TrainTrace& trace,
                     bool include_seconds = true);

/// Projected minibatch SGD. For the lipschitz method the model is projected
/// before the first epoch and after every gradient step, so it is feasible at
/// every point a caller can observe it. Deterministic for fixed (cfg, seed)
/// regardless of thread count. A non-finite loss or parameter aborts training
/// and returns the trace accumulated so far.
TrainTrace train(GnnModel& model, const TrainSet& data, const TrainConfig& cfg);

/// Iterative sign-gradient ascent on the loss, clipped to the
/// infinity-norm ball of radius epsilon around x after every step. Returns
/// the iterate with the highest loss seen (never worse than x itself).
GraphSignal pgd_attack(const GnnModel& model, const GraphShiftOperator& s, const GraphSignal& x,
                       const DenseMatrix& target, LossKind kind, double epsilon,
                       std::size_t steps, double step_size);

/// x + N(0, sigma^2 I), deterministic per seed.
GraphSignal awgn_perturb(const GraphSignal& x, double sigma, std::uint64_t seed);

}  // namespace specgnn
