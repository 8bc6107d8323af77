#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>

#include "specgnn/dense_matrix.hpp"
#include "specgnn/eig.hpp"
#include "specgnn/rng.hpp"
#include "specgnn/svd.hpp"

using namespace specgnn;

namespace {

DenseMatrix random_tall(std::size_t m, std::size_t k, std::uint64_t seed) {
  Rng rng(seed);
  DenseMatrix a(m, k);
  for (double& v : a.entries()) v = rng.uniform(-1.0, 1.0);
  return a;
}

double reconstruction_error(const DenseMatrix& a, const ThinSVD& svd) {
  DenseMatrix us = svd.left_vectors;
  for (std::size_t i = 0; i < us.rows(); ++i) {
    for (std::size_t j = 0; j < us.cols(); ++j) us(i, j) *= svd.singular_values[j];
  }
  DenseMatrix rec = matmul(us, transpose(svd.right_vectors));
  rec -= a;
  return frobenius_norm(rec);
}

}  // namespace

TEST_CASE("rectangular diagonal matrix has its diagonal as singular values") {
  DenseMatrix a(3, 2);
  a(0, 0) = 3.0;
  a(1, 1) = 2.0;
  ThinSVD svd = thin_svd(a);
  REQUIRE(svd.singular_values.size() == 2);
  CHECK(svd.singular_values[0] == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(svd.singular_values[1] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(reconstruction_error(a, svd) <= 1e-12);
}

TEST_CASE("random tall matrices: reconstruction, orthonormality, ordering") {
  for (std::uint64_t seed : {21ull, 22ull, 23ull}) {
    DenseMatrix a = random_tall(40, 6, seed);
    ThinSVD svd = thin_svd(a);

    CHECK(std::is_sorted(svd.singular_values.rbegin(), svd.singular_values.rend()));
    for (double s : svd.singular_values) CHECK(s >= 0.0);
    CHECK(reconstruction_error(a, svd) <= 1e-10 * std::max(1.0, svd.singular_values[0]));

    DenseMatrix utu = matmul(transpose(svd.left_vectors), svd.left_vectors);
    DenseMatrix vtv = matmul(transpose(svd.right_vectors), svd.right_vectors);
    for (std::size_t i = 0; i < 6; ++i) {
      utu(i, i) -= 1.0;
      vtv(i, i) -= 1.0;
    }
    CHECK(frobenius_norm(utu) <= 1e-11);
    CHECK(frobenius_norm(vtv) <= 1e-11);
  }
}

TEST_CASE("singular values agree with eigenvalues of the Gram matrix") {
  // Cross-check the two independently implemented kernels: one-sided Jacobi
  // SVD against cyclic Jacobi eigendecomposition of A^T A.
  DenseMatrix a = random_tall(30, 5, 31);
  ThinSVD svd = thin_svd(a);
  EigenDecomposition gram = symmetric_eig(matmul(transpose(a), a));
  for (std::size_t j = 0; j < 5; ++j) {
    double expect = std::sqrt(std::max(0.0, gram.eigenvalues[4 - j]));
    CHECK(svd.singular_values[j] == doctest::Approx(expect).epsilon(1e-10));
  }
}

TEST_CASE("rank-deficient input yields a (near) zero singular value") {
  DenseMatrix a(8, 3);
  Rng rng(41);
  for (std::size_t i = 0; i < 8; ++i) {
    a(i, 0) = rng.uniform(-1.0, 1.0);
    a(i, 1) = 2.0 * a(i, 0);  // dependent column
    a(i, 2) = rng.uniform(-1.0, 1.0);
  }
  ThinSVD svd = thin_svd(a);
  CHECK(svd.singular_values[2] <= 1e-12 * svd.singular_values[0]);
  CHECK(reconstruction_error(a, svd) <= 1e-11);
}

TEST_CASE("wide input is rejected") {
  CHECK_THROWS_AS(thin_svd(DenseMatrix(2, 5)), std::invalid_argument);
}
