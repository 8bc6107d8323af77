#include "specgnn/svd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace specgnn {

ThinSVD thin_svd(const DenseMatrix& a) {
  const std::size_t m = a.rows(), k = a.cols();
  if (m == 0 || k == 0 || m < k) {
    throw std::invalid_argument("thin_svd: expected a tall or square matrix, got " +
                                std::to_string(m) + "x" + std::to_string(k));
  }
  if (!all_finite(a)) {
    throw std::invalid_argument("thin_svd: input has non-finite entries");
  }

  // Work on columns of W; V accumulates the right rotations.
  DenseMatrix w = a;
  DenseMatrix v = DenseMatrix::identity(k);
  const double tol = 1e-12;
  const std::size_t max_sweeps = 100 * k;

  auto col_dot = [&](std::size_t p, std::size_t q) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += w(i, p) * w(i, q);
    return s;
  };

  std::size_t sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < k; ++p) {
      for (std::size_t q = p + 1; q < k; ++q) {
        const double alpha = col_dot(p, p);
        const double beta = col_dot(q, q);
        const double gamma = col_dot(p, q);
        if (std::abs(gamma) <= tol * std::sqrt(alpha * beta)) continue;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double sign = zeta >= 0.0 ? 1.0 : -1.0;
        const double t = sign / (std::abs(zeta) + std::sqrt(zeta * zeta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = c * t;
        for (std::size_t i = 0; i < m; ++i) {
          const double wip = w(i, p), wiq = w(i, q);
          w(i, p) = c * wip - sn * wiq;
          w(i, q) = sn * wip + c * wiq;
        }
        for (std::size_t i = 0; i < k; ++i) {
          const double vip = v(i, p), viq = v(i, q);
          v(i, p) = c * vip - sn * viq;
          v(i, q) = sn * vip + c * viq;
        }
        rotated = true;
      }
    }
    if (!rotated) break;
  }
  if (sweep == max_sweeps) {
    throw std::runtime_error("thin_svd: Jacobi sweeps did not converge within 100*k sweeps");
  }

  std::vector<double> sigma(k);
  for (std::size_t j = 0; j < k; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += w(i, j) * w(i, j);
    sigma[j] = std::sqrt(s);
  }

  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return sigma[i] > sigma[j]; });

  ThinSVD out;
  out.singular_values.resize(k);
  out.left_vectors = DenseMatrix(m, k);
  out.right_vectors = DenseMatrix(k, k);
  for (std::size_t j = 0; j < k; ++j) {
    const std::size_t src = order[j];
    const double s = sigma[src];
    out.singular_values[j] = s;
    if (s > 0.0) {
      for (std::size_t i = 0; i < m; ++i) out.left_vectors(i, j) = w(i, src) / s;
    }
    for (std::size_t i = 0; i < k; ++i) out.right_vectors(i, j) = v(i, src);
  }
  return out;
}

}  // namespace specgnn
