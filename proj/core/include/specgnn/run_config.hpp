#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace specgnn {

/// Dataset generation parameters (gen-data) and dataset identity (train/eval).
struct TaskConfig {
  std::string kind = "source_localization";  // or dynamic_source_localization
  std::size_t n = 50;
  std::size_t communities = 5;
  double p_in = 0.8;
  double p_out = 0.1;
  std::size_t num_samples = 2000;
  std::size_t horizon = 8;
  std::size_t channels = 1;
  std::uint64_t seed = 1;
  // dynamic_source_localization only:
  double radius = 0.3;
  std::size_t sequence_length = 20;
  double step_scale = 0.05;
};

struct ModelConfig {
  std::vector<std::size_t> feature_dims = {1, 24, 24};
  std::size_t taps = 5;
  std::string nonlinearity = "relu";
  std::string readout_mode = "mean_pool";
  std::size_t output_dim = 5;
};

/// How the training-time constraint set is built.
struct ConstraintConfig {
  std::string mode = "none";  // none | static | scenario
  double bound_c = 1.0;
  // scenario mode:
  double interval_a = -0.75;
  double interval_b = 1.25;
  bool harvest = false;  // replace [a, b] with the dataset sequence's interval
  double epsilon = 0.1;
  double delta = 0.1;
  std::size_t m_override = 0;  // 0 keeps the sample-complexity requirement
  std::uint64_t seed = 3;
};

struct TrainSection {
  std::string method = "unconstrained";
  double step_size = 0.05;
  std::string schedule = "constant";
  std::size_t batch_size = 32;
  std::size_t epochs = 20;
  std::string loss = "cross_entropy_with_logits";
  std::uint64_t seed = 7;
  double noise_sigma = 0.0;
  double pgd_epsilon = 0.0;
  std::size_t pgd_steps = 10;
  double pgd_step_size = 0.0;  // 0 selects 2.5 * epsilon / steps
  std::vector<double> per_layer_bounds;
};

struct SweepSection {
  std::string perturbation = "awgn";
  std::vector<double> magnitudes = {0.0};
  std::size_t trials = 1;
  std::uint64_t seed = 11;
  std::string metric = "accuracy";
  std::size_t pgd_steps = 20;
};

/// One run's full configuration. Parsing is strict: a versioned schema field
/// is required and unknown keys are rejected, so typos fail fast instead of
/// silently using defaults.
struct RunConfig {
  int schema_version = 1;
  TaskConfig task;
  ModelConfig model;
  TrainSection train;
  ConstraintConfig constraint;
  SweepSection sweep;
  std::string data_dir;
  std::string out_dir;
};

RunConfig run_config_from_json(const std::string& text);
RunConfig load_run_config(const std::string& path);

/// Fully materialized document (every field, resolved defaults included) so
/// the copy written into the output directory doubles as the replay input.
std::string run_config_to_json(const RunConfig& cfg);
void save_run_config(const std::string& path, const RunConfig& cfg);

}  // namespace specgnn
