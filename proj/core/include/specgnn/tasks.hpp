#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "specgnn/graph.hpp"
#include "specgnn/training.hpp"

namespace specgnn {

struct SourceLocParams {
  std::size_t n = 50;
  std::size_t communities = 5;
  double p_in = 0.8;
  double p_out = 0.1;
  std::size_t num_samples = 2000;
  std::size_t horizon = 8;  // diffusion steps t are drawn uniformly from 1..horizon
  /// Number of input channels; channel j carries the diffusion at step
  /// t - (channels-1) + j (clamped at 0), so the last channel is step t.
  std::size_t channels = 1;
  std::uint64_t seed = 1;
};

/// Diffusion source localization on a stochastic block model: X = S_hat^t e_s
/// for a uniform source s and uniform t in 1..horizon; the label is the
/// community of s. S_hat is the adjacency scaled to unit spectral norm.
struct SourceLocDataset {
  SourceLocParams params;
  GraphShiftOperator adjacency;  // raw 0/1 SBM adjacency
  GraphShiftOperator shift;      // adjacency / lambda_max, used for diffusion
  std::vector<GraphSignal> signals;
  std::vector<std::size_t> labels;   // community of the source
  std::vector<std::size_t> sources;  // source node per sample
  std::vector<std::size_t> steps;    // diffusion step t per sample
  std::vector<std::size_t> train_idx, val_idx, test_idx;  // disjoint 60/20/20

  std::size_t size() const { return signals.size(); }
};

SourceLocDataset gen_source_localization(const SourceLocParams& params);

/// Same task over a time-varying graph family: each sample diffuses on one
/// step's operator. Labels are the source node itself (the family has no
/// community structure). Operators are jointly scaled by the family's max
/// spectral norm so diffusion stays bounded on every step graph.
struct DynamicEvalSet {
  DynamicGraphSequence raw;     // as generated (0/1 adjacencies, serializable)
  DynamicGraphSequence shifts;  // raw / max spectral norm, used for diffusion
  double scale = 1.0;           // the shared normalizer
  std::size_t horizon = 0;
  std::uint64_t seed = 0;
  std::vector<std::size_t> step_index;  // which operator each sample diffused on
  std::vector<GraphSignal> signals;
  std::vector<std::size_t> labels;  // source node per sample
  std::vector<std::size_t> steps;   // diffusion step t per sample
  std::vector<std::size_t> train_idx, val_idx, test_idx;

  std::size_t size() const { return signals.size(); }
};

/// Every operator divided by the max spectral norm across the sequence (so
/// the scaled family has spectra within [-1, 1], with equality somewhere).
DynamicGraphSequence normalize_sequence(const DynamicGraphSequence& seq, double* scale = nullptr);

DynamicEvalSet gen_dynamic_task(const DynamicGraphSequence& sequence, std::size_t num_samples,
                                std::size_t horizon, std::uint64_t seed);

/// Training view over the chosen samples with one-hot (1 x C) targets.
TrainSet to_train_set(const SourceLocDataset& ds, const std::vector<std::size_t>& indices);
TrainSet to_train_set(const DynamicEvalSet& ds, const std::vector<std::size_t>& indices);

/// Directory layout: manifest.json (parameters, seed, splits) + graph edge
/// list(s) + signals.csv + labels.csv. Reload reconstructs bit-identical
/// datasets (normalization is recomputed, deterministically, from the raw
/// graphs).
void save_dataset(const std::string& dir, const SourceLocDataset& ds);
void save_dataset(const std::string& dir, const DynamicEvalSet& ds);

/// "source_localization" or "dynamic_source_localization" per the manifest.
std::string dataset_kind(const std::string& dir);

SourceLocDataset load_source_localization(const std::string& dir);
DynamicEvalSet load_dynamic_task(const std::string& dir);

}  // namespace specgnn
