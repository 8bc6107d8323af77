#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "specgnn/gnn.hpp"
#include "specgnn/training.hpp"

namespace specgnn {

enum class Perturbation { awgn, pgd };
enum class Metric { accuracy, mse };

std::string to_string(Perturbation p);
Perturbation perturbation_from_string(const std::string& s);
std::string to_string(Metric m);
Metric metric_from_string(const std::string& s);

struct NamedModel {
  std::string name;
  GnnModel model;
};

struct SweepConfig {
  Perturbation perturbation = Perturbation::awgn;
  /// Noise levels (sigma) or attack budgets (epsilon); nonnegative ascending.
  std::vector<double> magnitudes;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  Metric metric = Metric::accuracy;
  /// Loss the attack ascends (and the mse metric reports against targets).
  LossKind attack_loss = LossKind::cross_entropy_with_logits;
  /// Fixed evaluation attack budget, uniform across defenses.
  std::size_t pgd_steps = 20;
  std::size_t threads = 1;
};

struct SweepRow {
  std::string method;
  std::string perturbation;
  double magnitude = 0.0;
  std::size_t trial_count = 0;
  double metric_mean = 0.0;
  double metric_stderr = 0.0;
};

struct RobustnessReport {
  std::vector<SweepRow> rows;  // method-major, magnitudes ascending
  std::map<std::string, double> clean_metric;      // per method, unperturbed
  std::map<std::string, std::string> model_checksums;  // per method
};

/// Fraction of samples whose argmax prediction matches the target's argmax.
double evaluate_accuracy(const GnnModel& model, const TrainSet& data);
/// Mean loss over the samples.
double evaluate_loss(const GnnModel& model, const TrainSet& data, LossKind kind);

/// Hash of the model's parameter bits (report provenance).
std::string model_checksum(const GnnModel& model);

/// Evaluate every model at every magnitude: AWGN trials share noise seeds
/// across models (identical perturbed inputs per trial); PGD is white-box per
/// model with the config's fixed step budget and step size 2.5*eps/steps.
/// Deterministic for fixed (models, data, cfg) regardless of thread count.
RobustnessReport run_sweep(const std::vector<NamedModel>& models, const TrainSet& data,
                           const SweepConfig& cfg);

/// CSV schema: method,perturbation,magnitude,trial_count,metric_mean,metric_stderr.
void write_report_csv(const std::string& path, const RobustnessReport& report);

/// Max absolute frequency response per model over a uniform grid on [a, b].
struct ProfileTable {
  std::vector<double> grid;
  std::vector<std::pair<std::string, std::vector<double>>> profiles;
};

ProfileTable profile_frequency_response(const std::vector<NamedModel>& models, double a, double b,
                                        std::size_t grid_points);

/// CSV schema: model,lambda,h_star.
void write_profile_table_csv(const std::string& path, const ProfileTable& table);

/// Fraction of grid points where the profile exceeds the bound.
double profile_violation_fraction(const std::vector<double>& profile, double bound);

}  // namespace specgnn
