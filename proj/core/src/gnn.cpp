#include "specgnn/gnn.hpp"

#include <cmath>
#include <stdexcept>

#include "specgnn/rng.hpp"

namespace specgnn {

namespace {

double activate(double x, Nonlinearity n) {
  switch (n) {
    case Nonlinearity::relu:
      return x > 0.0 ? x : 0.0;
    case Nonlinearity::tanh:
      return std::tanh(x);
    case Nonlinearity::identity:
      return x;
  }
  throw std::logic_error("activate: unknown nonlinearity");
}

// Derivative in terms of the preactivation; relu's kink at exactly 0 is 0.
double activate_derivative(double x, Nonlinearity n) {
  switch (n) {
    case Nonlinearity::relu:
      return x > 0.0 ? 1.0 : 0.0;
    case Nonlinearity::tanh: {
      const double t = std::tanh(x);
      return 1.0 - t * t;
    }
    case Nonlinearity::identity:
      return 1.0;
  }
  throw std::logic_error("activate_derivative: unknown nonlinearity");
}

// H_k as a dense in x out matrix for one tap index.
DenseMatrix tap_matrix(const FilterTensor& t, std::size_t k) {
  DenseMatrix h(t.in_banks(), t.out_filters());
  for (std::size_t f = 0; f < t.in_banks(); ++f) {
    for (std::size_t g = 0; g < t.out_filters(); ++g) h(f, g) = t.at(f, g, k);
  }
  return h;
}

}  // namespace

std::string to_string(Nonlinearity n) {
  switch (n) {
    case Nonlinearity::relu:
      return "relu";
    case Nonlinearity::tanh:
      return "tanh";
    case Nonlinearity::identity:
      return "identity";
  }
  throw std::logic_error("to_string: unknown nonlinearity");
}

Nonlinearity nonlinearity_from_string(const std::string& s) {
  if (s == "relu") return Nonlinearity::relu;
  if (s == "tanh") return Nonlinearity::tanh;
  if (s == "identity") return Nonlinearity::identity;
  throw std::invalid_argument("unknown nonlinearity '" + s + "' (expected relu|tanh|identity)");
}

std::string to_string(ReadoutMode m) {
  switch (m) {
    case ReadoutMode::per_node:
      return "per_node";
    case ReadoutMode::mean_pool:
      return "mean_pool";
    case ReadoutMode::flatten:
      return "flatten";
  }
  throw std::logic_error("to_string: unknown readout mode");
}

ReadoutMode readout_mode_from_string(const std::string& s) {
  if (s == "per_node") return ReadoutMode::per_node;
  if (s == "mean_pool") return ReadoutMode::mean_pool;
  if (s == "flatten") return ReadoutMode::flatten;
  throw std::invalid_argument("unknown readout mode '" + s +
                              "' (expected per_node|mean_pool|flatten)");
}

std::string to_string(LossKind k) {
  switch (k) {
    case LossKind::cross_entropy_with_logits:
      return "cross_entropy_with_logits";
    case LossKind::mean_squared_error:
      return "mean_squared_error";
  }
  throw std::logic_error("to_string: unknown loss kind");
}

LossKind loss_kind_from_string(const std::string& s) {
  if (s == "cross_entropy_with_logits") return LossKind::cross_entropy_with_logits;
  if (s == "mean_squared_error") return LossKind::mean_squared_error;
  throw std::invalid_argument(
      "unknown loss kind '" + s + "' (expected cross_entropy_with_logits|mean_squared_error)");
}

GnnModel::GnnModel(std::vector<std::size_t> feature_dims, std::size_t taps,
                   Nonlinearity nonlinearity, ReadoutMode readout_mode, std::size_t output_dim,
                   std::size_t nodes)
    : feature_dims_(std::move(feature_dims)),
      taps_(taps),
      nonlinearity_(nonlinearity),
      readout_mode_(readout_mode),
      output_dim_(output_dim),
      nodes_(nodes) {
  if (feature_dims_.size() < 2) {
    throw std::invalid_argument("GnnModel: need feature dims (G_0, ..., G_Q) with Q >= 1");
  }
  for (std::size_t d : feature_dims_) {
    if (d == 0) throw std::invalid_argument("GnnModel: feature dims must be positive");
  }
  if (taps_ == 0) throw std::invalid_argument("GnnModel: taps must be positive");
  if (output_dim_ == 0) throw std::invalid_argument("GnnModel: output dim must be positive");
  if (readout_mode_ == ReadoutMode::flatten) {
    if (nodes_ == 0) {
      throw std::invalid_argument("GnnModel: the flatten readout needs the node count");
    }
  } else if (nodes_ != 0) {
    throw std::invalid_argument("GnnModel: nodes only applies to the flatten readout");
  }

  layers_.reserve(feature_dims_.size() - 1);
  for (std::size_t q = 1; q < feature_dims_.size(); ++q) {
    layers_.emplace_back(feature_dims_[q - 1], feature_dims_[q], taps_);
  }
  const std::size_t fan_in =
      readout_mode_ == ReadoutMode::flatten ? nodes_ * feature_dims_.back() : feature_dims_.back();
  readout_ = DenseMatrix(fan_in, output_dim_);
}

void GnnModel::init_random(Rng& rng) {
  for (std::size_t q = 0; q < layers_.size(); ++q) {
    const double scale = 1.0 / (static_cast<double>(taps_) * static_cast<double>(feature_dims_[q]));
    for (double& w : layers_[q].values()) w = rng.uniform(-scale, scale);
  }
  const double scale = 1.0 / static_cast<double>(readout_.rows());
  for (double& w : readout_.entries()) w = rng.uniform(-scale, scale);
}

bool GnnModel::all_finite() const {
  for (const FilterTensor& t : layers_) {
    for (double w : t.values()) {
      if (!std::isfinite(w)) return false;
    }
  }
  return ::specgnn::all_finite(readout_);
}

DenseMatrix forward(const GnnModel& model, const GraphShiftOperator& s, const GraphSignal& x) {
  ForwardCache cache;
  return forward(model, s, x, cache);
}

DenseMatrix forward(const GnnModel& model, const GraphShiftOperator& s, const GraphSignal& x,
                    ForwardCache& cache) {
  if (model.layer_count() == 0) throw std::invalid_argument("forward: model has no layers");
  if (x.rows() != s.node_count()) {
    throw std::invalid_argument("forward: signal has " + std::to_string(x.rows()) +
                                " rows but the operator has " + std::to_string(s.node_count()) +
                                " nodes");
  }
  if (x.cols() != model.feature_dims().front()) {
    throw std::invalid_argument("forward: signal has " + std::to_string(x.cols()) +
                                " features but the model expects " +
                                std::to_string(model.feature_dims().front()));
  }

  const std::size_t q_count = model.layer_count();
  const std::size_t taps = model.taps();
  cache.shifted.assign(q_count, {});
  cache.preactivations.assign(q_count, DenseMatrix());
  cache.activations.assign(q_count + 1, DenseMatrix());
  cache.activations[0] = x;

  for (std::size_t q = 0; q < q_count; ++q) {
    const FilterTensor& layer = model.layers()[q];
    const DenseMatrix& input = cache.activations[q];

    // shifted[k] = S^k input, built by repeated application of S.
    std::vector<DenseMatrix>& shifted = cache.shifted[q];
    shifted.reserve(taps);
    shifted.push_back(input);
    for (std::size_t k = 1; k < taps; ++k) shifted.push_back(matmul(s.matrix(), shifted[k - 1]));

    DenseMatrix pre(input.rows(), layer.out_filters());
    for (std::size_t k = 0; k < taps; ++k) {
      pre += matmul(shifted[k], tap_matrix(layer, k));
    }
    cache.preactivations[q] = pre;

    DenseMatrix act = pre;
    for (double& v : act.entries()) v = activate(v, model.nonlinearity());
    cache.activations[q + 1] = std::move(act);
  }

  const DenseMatrix& last = cache.activations.back();
  if (model.readout_mode() == ReadoutMode::mean_pool) {
    DenseMatrix pooled(1, last.cols());
    for (std::size_t i = 0; i < last.rows(); ++i) {
      for (std::size_t j = 0; j < last.cols(); ++j) pooled(0, j) += last(i, j);
    }
    const double inv_n = 1.0 / static_cast<double>(last.rows());
    for (double& v : pooled.entries()) v *= inv_n;
    cache.pooled = pooled;
    cache.output = matmul(pooled, model.readout());
  } else if (model.readout_mode() == ReadoutMode::flatten) {
    if (last.rows() != model.nodes()) {
      throw std::invalid_argument("forward: flatten readout was sized for " +
                                  std::to_string(model.nodes()) + " nodes but the graph has " +
                                  std::to_string(last.rows()));
    }
    // Row-major storage is already the node-major concatenation.
    DenseMatrix flat(1, last.rows() * last.cols());
    flat.entries() = last.entries();
    cache.pooled = flat;
    cache.output = matmul(flat, model.readout());
  } else {
    cache.pooled = DenseMatrix();
    cache.output = matmul(last, model.readout());
  }
  return cache.output;
}

double loss(const DenseMatrix& pred, const DenseMatrix& target, LossKind kind) {
  if (pred.rows() != target.rows() || pred.cols() != target.cols()) {
    throw std::invalid_argument("loss: prediction is " + std::to_string(pred.rows()) + "x" +
                                std::to_string(pred.cols()) + " but target is " +
                                std::to_string(target.rows()) + "x" +
                                std::to_string(target.cols()));
  }
  if (kind == LossKind::mean_squared_error) {
    double sum = 0.0;
    for (std::size_t i = 0; i < pred.rows(); ++i) {
      for (std::size_t j = 0; j < pred.cols(); ++j) {
        const double d = pred(i, j) - target(i, j);
        sum += d * d;
      }
    }
    return sum / static_cast<double>(pred.rows() * pred.cols());
  }

  // Cross-entropy from logits with max-subtraction stabilization.
  double total = 0.0;
  for (std::size_t i = 0; i < pred.rows(); ++i) {
    double row_max = pred(i, 0);
    for (std::size_t j = 1; j < pred.cols(); ++j) row_max = std::max(row_max, pred(i, j));
    double sum_exp = 0.0;
    for (std::size_t j = 0; j < pred.cols(); ++j) sum_exp += std::exp(pred(i, j) - row_max);
    const double log_sum_exp = row_max + std::log(sum_exp);
    for (std::size_t j = 0; j < pred.cols(); ++j) {
      if (target(i, j) != 0.0) total += target(i, j) * (log_sum_exp - pred(i, j));
    }
  }
  return total / static_cast<double>(pred.rows());
}

namespace {

// d loss / d pred for the supported losses, matching loss()'s row averaging.
DenseMatrix loss_gradient(const DenseMatrix& pred, const DenseMatrix& target, LossKind kind) {
  DenseMatrix grad(pred.rows(), pred.cols());
  if (kind == LossKind::mean_squared_error) {
    const double scale = 2.0 / static_cast<double>(pred.rows() * pred.cols());
    for (std::size_t i = 0; i < pred.rows(); ++i) {
      for (std::size_t j = 0; j < pred.cols(); ++j) {
        grad(i, j) = scale * (pred(i, j) - target(i, j));
      }
    }
    return grad;
  }
  const double scale = 1.0 / static_cast<double>(pred.rows());
  for (std::size_t i = 0; i < pred.rows(); ++i) {
    double row_max = pred(i, 0);
    for (std::size_t j = 1; j < pred.cols(); ++j) row_max = std::max(row_max, pred(i, j));
    double sum_exp = 0.0;
    for (std::size_t j = 0; j < pred.cols(); ++j) sum_exp += std::exp(pred(i, j) - row_max);
    double weight = 0.0;  // total target mass of the row (1 for one-hot)
    for (std::size_t j = 0; j < pred.cols(); ++j) weight += target(i, j);
    for (std::size_t j = 0; j < pred.cols(); ++j) {
      const double softmax = std::exp(pred(i, j) - row_max) / sum_exp;
      grad(i, j) = scale * (weight * softmax - target(i, j));
    }
  }
  return grad;
}

}  // namespace

Gradients backward(const GnnModel& model, const GraphShiftOperator& s, const ForwardCache& cache,
                   const DenseMatrix& target, LossKind kind, DenseMatrix* input_gradient) {
  if (cache.activations.size() != model.layer_count() + 1) {
    throw std::invalid_argument("backward: forward cache does not match the model");
  }

  Gradients grads;
  grads.layers.reserve(model.layer_count());
  for (const FilterTensor& t : model.layers()) {
    grads.layers.emplace_back(t.in_banks(), t.out_filters(), t.taps());
  }

  const DenseMatrix d_output = loss_gradient(cache.output, target, kind);

  // Readout and its upstream error.
  DenseMatrix d_act;  // d loss / d X_Q
  if (model.readout_mode() == ReadoutMode::mean_pool) {
    grads.readout = matmul(transpose(cache.pooled), d_output);
    const DenseMatrix d_pooled = matmul(d_output, transpose(model.readout()));
    const DenseMatrix& last = cache.activations.back();
    d_act = DenseMatrix(last.rows(), last.cols());
    const double inv_n = 1.0 / static_cast<double>(last.rows());
    for (std::size_t i = 0; i < last.rows(); ++i) {
      for (std::size_t j = 0; j < last.cols(); ++j) d_act(i, j) = d_pooled(0, j) * inv_n;
    }
  } else if (model.readout_mode() == ReadoutMode::flatten) {
    grads.readout = matmul(transpose(cache.pooled), d_output);
    const DenseMatrix d_flat = matmul(d_output, transpose(model.readout()));
    const DenseMatrix& last = cache.activations.back();
    d_act = DenseMatrix(last.rows(), last.cols());
    d_act.entries() = d_flat.entries();  // undo the row-major flatten
  } else {
    grads.readout = matmul(transpose(cache.activations.back()), d_output);
    d_act = matmul(d_output, transpose(model.readout()));
  }

  const std::size_t taps = model.taps();
  for (std::size_t q = model.layer_count(); q-- > 0;) {
    const FilterTensor& layer = model.layers()[q];
    const DenseMatrix& pre = cache.preactivations[q];

    // d loss / d preactivation = d_act composed with sigma'.
    DenseMatrix d_pre = d_act;
    for (std::size_t i = 0; i < pre.rows(); ++i) {
      for (std::size_t j = 0; j < pre.cols(); ++j) {
        d_pre(i, j) *= activate_derivative(pre(i, j), model.nonlinearity());
      }
    }

    // Tap gradients: dH_k = (S^k X_{q-1})^T d_pre.
    FilterTensor& d_layer = grads.layers[q];
    for (std::size_t k = 0; k < taps; ++k) {
      const DenseMatrix dh = matmul(transpose(cache.shifted[q][k]), d_pre);
      for (std::size_t f = 0; f < layer.in_banks(); ++f) {
        for (std::size_t g = 0; g < layer.out_filters(); ++g) d_layer.at(f, g, k) = dh(f, g);
      }
    }

    const bool need_input = q > 0 || input_gradient != nullptr;
    if (!need_input) break;

    // d loss / d X_{q-1} = sum_k S^k (d_pre H_k^T), evaluated Horner-style
    // (S is symmetric, so no transpose is needed on the shift).
    DenseMatrix acc = matmul(d_pre, transpose(tap_matrix(layer, taps - 1)));
    for (std::size_t k = taps - 1; k-- > 0;) {
      acc = matmul(s.matrix(), acc);
      acc += matmul(d_pre, transpose(tap_matrix(layer, k)));
    }
    d_act = std::move(acc);
  }

  if (input_gradient != nullptr) *input_gradient = std::move(d_act);
  return grads;
}

std::vector<std::size_t> argmax_rows(const DenseMatrix& m) {
  if (m.cols() == 0) throw std::invalid_argument("argmax_rows: matrix has no columns");
  std::vector<std::size_t> out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < m.cols(); ++j) {
      if (m(i, j) > m(i, best)) best = j;
    }
    out[i] = best;
  }
  return out;
}

}  // namespace specgnn
