#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "specgnn/dense_matrix.hpp"

namespace specgnn {

class GraphShiftOperator;

/// K filter taps; taps[k] weighs the k-hop shift S^k, so the frequency
/// response is the polynomial H(lambda) = sum_k taps[k] * lambda^k.
struct FilterCoefficients {
  std::vector<double> taps;

  FilterCoefficients() = default;
  explicit FilterCoefficients(std::vector<double> t) : taps(std::move(t)) {}
  std::size_t order() const { return taps.size(); }
};

/// One layer's bank of filters: in_banks x out_filters vectors of K taps,
/// stored contiguously with the tap axis innermost.
class FilterTensor {
 public:
  FilterTensor() = default;
  FilterTensor(std::size_t in_banks, std::size_t out_filters, std::size_t taps);

  std::size_t in_banks() const { return in_; }
  std::size_t out_filters() const { return out_; }
  std::size_t taps() const { return taps_; }
  std::size_t filter_count() const { return in_ * out_; }

  double& at(std::size_t f, std::size_t g, std::size_t k) {
    return data_[(f * out_ + g) * taps_ + k];
  }
  double at(std::size_t f, std::size_t g, std::size_t k) const {
    return data_[(f * out_ + g) * taps_ + k];
  }

  std::span<double> filter(std::size_t f, std::size_t g) {
    return {data_.data() + (f * out_ + g) * taps_, taps_};
  }
  std::span<const double> filter(std::size_t f, std::size_t g) const {
    return {data_.data() + (f * out_ + g) * taps_, taps_};
  }

  std::vector<double>& values() { return data_; }
  const std::vector<double>& values() const { return data_; }

 private:
  std::size_t in_ = 0, out_ = 0, taps_ = 0;
  std::vector<double> data_;
};

/// Rows (1, lambda_i, ..., lambda_i^{K-1}); maps taps to response samples.
struct VandermondeMatrix {
  std::vector<double> lambdas;
  DenseMatrix matrix;  // |lambdas| x K
};

/// Polynomial response at a single frequency, evaluated in Horner form.
double frequency_response(std::span<const double> taps, double lambda);
inline double frequency_response(const FilterCoefficients& h, double lambda) {
  return frequency_response(std::span<const double>(h.taps), lambda);
}

/// Requires |lambdas| >= taps; throws std::invalid_argument otherwise.
VandermondeMatrix build_vandermonde(const std::vector<double>& lambdas, std::size_t taps);

/// Worst-case output/input ratio of the filter on S in the 2-norm:
/// max |H(lambda)| over the spectrum of S.
double lipschitz_constant(const FilterCoefficients& h, const GraphShiftOperator& s);

/// Max |H(lambda)| over every filter of every given bank.
double max_abs_response(const std::vector<FilterTensor>& layers, double lambda);

/// Coefficients of lambda * dH/dlambda: taps'[k] = k * taps[k]. Bounding this
/// transformed response yields the integral-Lipschitz property used for
/// stability under graph perturbations.
FilterCoefficients integral_lipschitz_transform(const FilterCoefficients& h);

/// Evenly spaced grid over [a, b] with both endpoints included.
std::vector<double> uniform_grid(double a, double b, std::size_t points);

/// Max-response profile of a set of banks over a frequency grid.
std::vector<double> max_response_profile(const std::vector<FilterTensor>& layers,
                                         const std::vector<double>& grid);

/// CSV export with columns (lambda, H_star).
void write_response_profile_csv(const std::string& path, const std::vector<double>& grid,
                                const std::vector<double>& h_star);

}  // namespace specgnn
