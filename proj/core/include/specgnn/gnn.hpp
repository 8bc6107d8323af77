#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "specgnn/dense_matrix.hpp"
#include "specgnn/filters.hpp"
#include "specgnn/graph.hpp"

namespace specgnn {

class Rng;

/// Pointwise activations are restricted to 1-Lipschitz choices so that filter
/// response bounds translate into end-to-end stability.
enum class Nonlinearity { relu, tanh, identity };

/// per_node applies the readout row-wise (equivariant outputs); mean_pool
/// averages node features first (one invariant prediction per signal);
/// flatten concatenates all node features into one row (node-identity aware,
/// needed when the label refers to fixed node sets, e.g. "which community").
enum class ReadoutMode { per_node, mean_pool, flatten };

enum class LossKind { cross_entropy_with_logits, mean_squared_error };

std::string to_string(Nonlinearity n);
Nonlinearity nonlinearity_from_string(const std::string& s);
std::string to_string(ReadoutMode m);
ReadoutMode readout_mode_from_string(const std::string& s);
std::string to_string(LossKind k);
LossKind loss_kind_from_string(const std::string& s);

/// Layered graph-filter banks with a pointwise nonlinearity and a linear
/// readout. Layer q maps G_{q-1} features to G_q features through
/// X_q = sigma(sum_k S^k X_{q-1} H_k) where every filter has K taps.
class GnnModel {
 public:
  GnnModel() = default;

  /// feature_dims = (G_0, ..., G_Q) with Q >= 1 layers; weights start at zero.
  /// nodes is required (positive) for the flatten readout, which sizes its
  /// matrix as (nodes * G_Q) x output_dim, and must be 0 otherwise.
  GnnModel(std::vector<std::size_t> feature_dims, std::size_t taps, Nonlinearity nonlinearity,
           ReadoutMode readout_mode, std::size_t output_dim, std::size_t nodes = 0);

  /// Taps uniform in +-1/(K * G_{q-1}) per layer, readout uniform in
  /// +-1/fan-in (1/G_Q for the node-wise modes, 1/(nodes * G_Q) for flatten).
  void init_random(Rng& rng);

  std::size_t layer_count() const { return layers_.size(); }
  const std::vector<std::size_t>& feature_dims() const { return feature_dims_; }
  std::size_t taps() const { return taps_; }
  Nonlinearity nonlinearity() const { return nonlinearity_; }
  ReadoutMode readout_mode() const { return readout_mode_; }
  std::size_t output_dim() const { return output_dim_; }
  /// Node count the flatten readout was sized for; 0 for the other modes.
  std::size_t nodes() const { return nodes_; }

  std::vector<FilterTensor>& layers() { return layers_; }
  const std::vector<FilterTensor>& layers() const { return layers_; }
  DenseMatrix& readout() { return readout_; }
  const DenseMatrix& readout() const { return readout_; }

  bool all_finite() const;

 private:
  std::vector<std::size_t> feature_dims_;
  std::size_t taps_ = 0;
  Nonlinearity nonlinearity_ = Nonlinearity::relu;
  ReadoutMode readout_mode_ = ReadoutMode::per_node;
  std::size_t output_dim_ = 0;
  std::size_t nodes_ = 0;
  std::vector<FilterTensor> layers_;
  DenseMatrix readout_;  // G_Q x output_dim (flatten: (nodes * G_Q) x output_dim)
};

/// Everything backward() needs from the forward pass.
struct ForwardCache {
  std::vector<std::vector<DenseMatrix>> shifted;  // [layer][tap]: S^k X_{q-1}
  std::vector<DenseMatrix> preactivations;        // [layer]
  std::vector<DenseMatrix> activations;           // [layer+1], activations[0] = X
  DenseMatrix pooled;                             // readout input row (mean_pool/flatten only)
  DenseMatrix output;
};

/// Shift-accumulate forward pass; never forms S^k explicitly.
DenseMatrix forward(const GnnModel& model, const GraphShiftOperator& s, const GraphSignal& x);
DenseMatrix forward(const GnnModel& model, const GraphShiftOperator& s, const GraphSignal& x,
                    ForwardCache& cache);

/// Mean loss over rows. Cross-entropy treats rows of pred as logits and rows
/// of target as (one-hot or soft) class weights, stabilized by
/// max-subtraction; MSE averages squared error over all entries.
double loss(const DenseMatrix& pred, const DenseMatrix& target, LossKind kind);

struct Gradients {
  std::vector<FilterTensor> layers;
  DenseMatrix readout;
};

/// Exact reverse-mode gradients of loss(output, target) with respect to every
/// filter tensor and the readout. When input_gradient is non-null it receives
/// d loss / d X (used by gradient-ascent attacks).
Gradients backward(const GnnModel& model, const GraphShiftOperator& s, const ForwardCache& cache,
                   const DenseMatrix& target, LossKind kind,
                   DenseMatrix* input_gradient = nullptr);

/// Index of the largest entry in each row (prediction rule for classifiers).
std::vector<std::size_t> argmax_rows(const DenseMatrix& m);

}  // namespace specgnn
