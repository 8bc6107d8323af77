#pragma once

#include <vector>

#include "specgnn/dense_matrix.hpp"

namespace specgnn {

/// Thin factorization A = U diag(singular_values) V^T for tall A (m >= k):
/// U is m x k, singular values nonnegative descending, V is k x k orthogonal.
/// Columns of U paired with zero singular values are zero vectors.
struct ThinSVD {
  DenseMatrix left_vectors;
  std::vector<double> singular_values;
  DenseMatrix right_vectors;
};

/// Thin SVD by one-sided Jacobi column orthogonalization. Rejects wide input
/// (rows < cols) with std::invalid_argument.
ThinSVD thin_svd(const DenseMatrix& a);

}  // namespace specgnn
