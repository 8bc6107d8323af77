#include "specgnn/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "specgnn/rng.hpp"

namespace specgnn {

const char* to_string(GsoKind kind) {
  switch (kind) {
    case GsoKind::adjacency: return "adjacency";
    case GsoKind::laplacian: return "laplacian";
    case GsoKind::normalized_adjacency: return "normalized_adjacency";
  }
  return "adjacency";
}

GsoKind gso_kind_from_string(const std::string& name) {
  if (name == "adjacency") return GsoKind::adjacency;
  if (name == "laplacian") return GsoKind::laplacian;
  if (name == "normalized_adjacency") return GsoKind::normalized_adjacency;
  throw std::invalid_argument("unknown graph shift operator kind: " + name);
}

GraphShiftOperator::GraphShiftOperator(DenseMatrix matrix, GsoKind kind)
    : matrix_(std::move(matrix)), kind_(kind), cache_(std::make_shared<SpectrumCache>()) {
  const std::size_t n = matrix_.rows();
  if (n == 0 || matrix_.cols() != n) {
    throw std::invalid_argument("GraphShiftOperator: matrix must be square and nonempty");
  }
  if (!all_finite(matrix_)) {
    throw std::invalid_argument("GraphShiftOperator: matrix has non-finite entries");
  }
  double asym = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      asym = std::max(asym, std::abs(matrix_(i, j) - matrix_(j, i)));
  if (asym > 1e-12 * std::max(1.0, max_abs(matrix_))) {
    throw std::invalid_argument("GraphShiftOperator: matrix must be symmetric");
  }
}

const EigenDecomposition& GraphShiftOperator::spectrum() const {
  std::lock_guard<std::mutex> lock(cache_->mu);
  if (!cache_->eig) cache_->eig = symmetric_eig(matrix_);
  return *cache_->eig;
}

bool GraphShiftOperator::has_spectrum() const {
  std::lock_guard<std::mutex> lock(cache_->mu);
  return cache_->eig.has_value();
}

double GraphShiftOperator::spectral_norm() const {
  const auto& eig = spectrum();
  return std::max(std::abs(eig.eigenvalues.front()), std::abs(eig.eigenvalues.back()));
}

GraphShiftOperator normalize_by_spectral_norm(const GraphShiftOperator& s) {
  const double scale = s.spectral_norm();
  if (scale <= 0.0) {
    throw std::invalid_argument("normalize_by_spectral_norm: operator has zero spectral norm");
  }
  GraphShiftOperator out((1.0 / scale) * s.matrix(), GsoKind::normalized_adjacency);
  return out;
}

GraphSignal graph_convolve(std::span<const double> taps, const GraphShiftOperator& s,
                           const GraphSignal& x) {
  if (taps.empty()) {
    throw std::invalid_argument("graph_convolve: filter must have at least one tap");
  }
  if (x.rows() != s.node_count()) {
    throw std::invalid_argument("graph_convolve: signal has " + std::to_string(x.rows()) +
                                " rows but operator has " + std::to_string(s.node_count()) +
                                " nodes");
  }
  GraphSignal acc = x;
  acc *= taps[0];
  GraphSignal shifted = x;
  for (std::size_t k = 1; k < taps.size(); ++k) {
    shifted = matmul(s.matrix(), shifted);
    acc.add_scaled(shifted, taps[k]);
  }
  return acc;
}

GraphSignal graph_convolve(const FilterCoefficients& h, const GraphShiftOperator& s,
                           const GraphSignal& x) {
  return graph_convolve(std::span<const double>(h.taps), s, x);
}

namespace {

void check_permutation(const std::vector<std::size_t>& perm, std::size_t n) {
  if (perm.size() != n) {
    throw std::invalid_argument("permute: permutation length does not match node count");
  }
  std::vector<bool> seen(n, false);
  for (std::size_t p : perm) {
    if (p >= n || seen[p]) {
      throw std::invalid_argument("permute: not a bijection on node indices");
    }
    seen[p] = true;
  }
}

}  // namespace

DenseMatrix permute_rows(const DenseMatrix& x, const std::vector<std::size_t>& perm) {
  check_permutation(perm, x.rows());
  DenseMatrix out(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) out(i, j) = x(perm[i], j);
  return out;
}

std::pair<GraphShiftOperator, GraphSignal> permute(const GraphShiftOperator& s,
                                                   const GraphSignal& x,
                                                   const std::vector<std::size_t>& perm) {
  const std::size_t n = s.node_count();
  check_permutation(perm, n);
  if (x.rows() != n) {
    throw std::invalid_argument("permute: signal row count does not match operator");
  }
  DenseMatrix ps(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) ps(i, j) = s.matrix()(perm[i], perm[j]);
  return {GraphShiftOperator(std::move(ps), s.kind()), permute_rows(x, perm)};
}

GraphShiftOperator generate_sbm(std::size_t n, std::size_t communities, double p_in,
                                double p_out, std::uint64_t seed) {
  if (n == 0 || communities == 0 || n % communities != 0) {
    throw std::invalid_argument("generate_sbm: communities must evenly divide n");
  }
  if (!(p_in >= 0.0 && p_in <= 1.0) || !(p_out >= 0.0 && p_out <= 1.0)) {
    throw std::invalid_argument("generate_sbm: probabilities must lie in [0, 1]");
  }
  Rng rng(seed);
  const std::size_t block = n / communities;
  DenseMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double p = (i / block == j / block) ? p_in : p_out;
      if (rng.uniform01() < p) {
        a(i, j) = 1.0;
        a(j, i) = 1.0;
      }
    }
  }
  return GraphShiftOperator(std::move(a), GsoKind::adjacency);
}

std::size_t sbm_community_of(std::size_t node, std::size_t n, std::size_t communities) {
  return node / (n / communities);
}

DynamicGraphSequence generate_rgg_sequence(std::size_t n, double radius, std::size_t steps,
                                           double step_scale, std::uint64_t seed) {
  if (!(radius > 0.0)) {
    throw std::invalid_argument("generate_rgg_sequence: radius must be positive");
  }
  if (steps == 0) {
    throw std::invalid_argument("generate_rgg_sequence: steps must be at least 1");
  }
  if (n == 0 || step_scale < 0.0) {
    throw std::invalid_argument("generate_rgg_sequence: invalid node count or step scale");
  }
  Rng rng(seed);
  std::vector<double> px(n), py(n);
  for (std::size_t i = 0; i < n; ++i) {
    px[i] = rng.uniform01();
    py[i] = rng.uniform01();
  }
  const double r2 = radius * radius;
  DynamicGraphSequence seq;
  seq.operators.reserve(steps);
  for (std::size_t t = 0; t < steps; ++t) {
    if (t > 0) {
      for (std::size_t i = 0; i < n; ++i) {
        px[i] = std::clamp(px[i] + rng.uniform(-step_scale, step_scale), 0.0, 1.0);
        py[i] = std::clamp(py[i] + rng.uniform(-step_scale, step_scale), 0.0, 1.0);
      }
    }
    DenseMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double dx = px[i] - px[j], dy = py[i] - py[j];
        if (dx * dx + dy * dy <= r2) {
          a(i, j) = 1.0;
          a(j, i) = 1.0;
        }
      }
    }
    seq.operators.emplace_back(std::move(a), GsoKind::adjacency);
  }
  return seq;
}

void write_edge_list(const std::string& path, const DenseMatrix& adjacency) {
  const std::size_t n = adjacency.rows();
  if (adjacency.cols() != n) {
    throw std::invalid_argument("write_edge_list: adjacency must be square");
  }
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (adjacency(i, j) != 0.0) edges.emplace_back(i, j);

  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_edge_list: cannot open " + path);
  out << n << " " << edges.size() << "\n";
  for (const auto& [i, j] : edges) out << i << " " << j << "\n";
  if (!out) throw std::runtime_error("write_edge_list: write failed for " + path);
}

DenseMatrix read_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_edge_list: cannot open " + path);
  std::size_t n = 0, m = 0;
  if (!(in >> n >> m)) throw std::runtime_error("read_edge_list: bad header in " + path);
  DenseMatrix a(n, n);
  for (std::size_t e = 0; e < m; ++e) {
    std::size_t i = 0, j = 0;
    if (!(in >> i >> j) || i >= n || j >= n) {
      throw std::runtime_error("read_edge_list: bad edge record in " + path);
    }
    a(i, j) = 1.0;
    a(j, i) = 1.0;
  }
  return a;
}

void write_signal_csv(const std::string& path, const DenseMatrix& x) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_signal_csv: cannot open " + path);
  char buf[32];
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < x.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", x(i, j));
      out << (j ? "," : "") << buf;
    }
    out << "\n";
  }
  if (!out) throw std::runtime_error("write_signal_csv: write failed for " + path);
}

DenseMatrix read_signal_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_signal_csv: cannot open " + path);
  std::vector<double> values;
  std::size_t rows = 0, cols = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::size_t c = 0;
    while (std::getline(ss, cell, ',')) {
      values.push_back(std::stod(cell));
      ++c;
    }
    if (rows == 0) {
      cols = c;
    } else if (c != cols) {
      throw std::runtime_error("read_signal_csv: ragged rows in " + path);
    }
    ++rows;
  }
  return DenseMatrix(rows, cols, std::move(values));
}

}  // namespace specgnn
