#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "specgnn/dense_matrix.hpp"
#include "specgnn/eig.hpp"
#include "specgnn/filters.hpp"

namespace specgnn {

/// A graph signal: one row per node, one column per feature channel.
using GraphSignal = DenseMatrix;

enum class GsoKind { adjacency, laplacian, normalized_adjacency };

const char* to_string(GsoKind kind);
GsoKind gso_kind_from_string(const std::string& name);

/// Symmetric graph shift operator with a lazily computed, shared spectrum
/// cache. Immutable after construction; copies share the cache.
class GraphShiftOperator {
 public:
  GraphShiftOperator() = default;
  explicit GraphShiftOperator(DenseMatrix matrix, GsoKind kind = GsoKind::adjacency);

  const DenseMatrix& matrix() const { return matrix_; }
  GsoKind kind() const { return kind_; }
  std::size_t node_count() const { return matrix_.rows(); }

  /// Eigendecomposition, computed on first use and cached.
  const EigenDecomposition& spectrum() const;
  bool has_spectrum() const;

  /// Spectral norm max |lambda| (2-norm of the operator).
  double spectral_norm() const;

 private:
  struct SpectrumCache {
    std::mutex mu;
    std::optional<EigenDecomposition> eig;
  };

  DenseMatrix matrix_;
  GsoKind kind_ = GsoKind::adjacency;
  std::shared_ptr<SpectrumCache> cache_;
};

/// S / max|lambda(S)|, reusing the parent spectrum. Throws for the zero
/// operator (no scale to normalize by).
GraphShiftOperator normalize_by_spectral_norm(const GraphShiftOperator& s);

/// Time-ordered family of shift operators over a fixed node set.
struct DynamicGraphSequence {
  std::vector<GraphShiftOperator> operators;

  std::size_t size() const { return operators.size(); }
  std::size_t node_count() const { return operators.empty() ? 0 : operators[0].node_count(); }
};

/// h *_S X = sum_k taps[k] S^k X by iterated shift-accumulate; no explicit
/// matrix powers are formed.
GraphSignal graph_convolve(const FilterCoefficients& h, const GraphShiftOperator& s,
                           const GraphSignal& x);
GraphSignal graph_convolve(std::span<const double> taps, const GraphShiftOperator& s,
                           const GraphSignal& x);

/// Relabeling by perm, where row i of the result is row perm[i] of the input:
/// returns (P S P^T, P X). Throws if perm is not a bijection on nodes.
std::pair<GraphShiftOperator, GraphSignal> permute(const GraphShiftOperator& s,
                                                   const GraphSignal& x,
                                                   const std::vector<std::size_t>& perm);
DenseMatrix permute_rows(const DenseMatrix& x, const std::vector<std::size_t>& perm);

/// Stochastic block model with equal-size contiguous communities: edge
/// probability p_in within a community, p_out across. Returns a 0/1
/// adjacency with zero diagonal; deterministic per seed.
GraphShiftOperator generate_sbm(std::size_t n, std::size_t communities, double p_in,
                                double p_out, std::uint64_t seed);

/// Community of node i under the contiguous block layout used by generate_sbm.
std::size_t sbm_community_of(std::size_t node, std::size_t n, std::size_t communities);

/// Random geometric graph sequence: agents start uniform in the unit square
/// and random-walk with per-step displacement scale step_scale (clamped to
/// the square); nodes within `radius` are adjacent at each step.
DynamicGraphSequence generate_rgg_sequence(std::size_t n, double radius, std::size_t steps,
                                           double step_scale, std::uint64_t seed);

/// Plain-text edge list: first line "n m", then m lines "i j" (0-based,
/// undirected edges once).
void write_edge_list(const std::string& path, const DenseMatrix& adjacency);
DenseMatrix read_edge_list(const std::string& path);

/// Signal CSV: one row per node, one column per feature.
void write_signal_csv(const std::string& path, const DenseMatrix& x);
DenseMatrix read_signal_csv(const std::string& path);

}  // namespace specgnn
