#pragma once

#include <vector>

#include "specgnn/dense_matrix.hpp"

namespace specgnn {

/// Spectral factorization S = V diag(eigenvalues) V^T with eigenvalues
/// ascending and orthonormal eigenvector columns.
struct EigenDecomposition {
  std::vector<double> eigenvalues;
  DenseMatrix eigenvectors;
};

/// Full eigendecomposition of a symmetric matrix by cyclic Jacobi sweeps.
/// Converges when the off-diagonal Frobenius mass drops below
/// 1e-12 * max(1, ||S||_F); hard cap of 100*n sweeps.
/// Throws std::invalid_argument for non-square input or relative asymmetry
/// above 1e-12.
EigenDecomposition symmetric_eig(const DenseMatrix& s);

}  // namespace specgnn
