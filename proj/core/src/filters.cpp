#include "specgnn/filters.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

#include "specgnn/graph.hpp"

namespace specgnn {

FilterTensor::FilterTensor(std::size_t in_banks, std::size_t out_filters, std::size_t taps)
    : in_(in_banks), out_(out_filters), taps_(taps), data_(in_banks * out_filters * taps, 0.0) {
  if (in_ == 0 || out_ == 0 || taps_ == 0) {
    throw std::invalid_argument("FilterTensor: all dimensions must be positive");
  }
}

double frequency_response(std::span<const double> taps, double lambda) {
  if (taps.empty()) {
    throw std::invalid_argument("frequency_response: filter must have at least one tap");
  }
  double acc = taps[taps.size() - 1];
  for (std::size_t k = taps.size() - 1; k-- > 0;) acc = acc * lambda + taps[k];
  return acc;
}

VandermondeMatrix build_vandermonde(const std::vector<double>& lambdas, std::size_t taps) {
  if (taps == 0) {
    throw std::invalid_argument("build_vandermonde: need at least one tap");
  }
  if (lambdas.size() < taps) {
    throw std::invalid_argument(
        "build_vandermonde: need at least as many frequencies as taps (" +
        std::to_string(lambdas.size()) + " < " + std::to_string(taps) +
        "); add sampled eigenvalues to the constraint set");
  }
  VandermondeMatrix v;
  v.lambdas = lambdas;
  v.matrix = DenseMatrix(lambdas.size(), taps);
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    double p = 1.0;
    for (std::size_t k = 0; k < taps; ++k) {
      v.matrix(i, k) = p;
      p *= lambdas[i];
    }
  }
  return v;
}

double lipschitz_constant(const FilterCoefficients& h, const GraphShiftOperator& s) {
  double m = 0.0;
  for (double lambda : s.spectrum().eigenvalues) {
    m = std::max(m, std::abs(frequency_response(h, lambda)));
  }
  return m;
}

double max_abs_response(const std::vector<FilterTensor>& layers, double lambda) {
  if (layers.empty()) {
    throw std::invalid_argument("max_abs_response: model has no layers");
  }
  double m = 0.0;
  for (const FilterTensor& t : layers) {
    for (std::size_t f = 0; f < t.in_banks(); ++f) {
      for (std::size_t g = 0; g < t.out_filters(); ++g) {
        m = std::max(m, std::abs(frequency_response(t.filter(f, g), lambda)));
      }
    }
  }
  return m;
}

FilterCoefficients integral_lipschitz_transform(const FilterCoefficients& h) {
  FilterCoefficients out;
  out.taps.resize(h.taps.size());
  for (std::size_t k = 0; k < h.taps.size(); ++k) {
    out.taps[k] = static_cast<double>(k) * h.taps[k];
  }
  return out;
}

std::vector<double> uniform_grid(double a, double b, std::size_t points) {
  if (points < 2) {
    throw std::invalid_argument("uniform_grid: need at least two points");
  }
  if (!(a < b)) {
    throw std::invalid_argument("uniform_grid: interval must satisfy a < b");
  }
  std::vector<double> grid(points);
  const double step = (b - a) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) grid[i] = a + step * static_cast<double>(i);
  grid.back() = b;
  return grid;
}

std::vector<double> max_response_profile(const std::vector<FilterTensor>& layers,
                                         const std::vector<double>& grid) {
  std::vector<double> profile(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) profile[i] = max_abs_response(layers, grid[i]);
  return profile;
}

void write_response_profile_csv(const std::string& path, const std::vector<double>& grid,
                                const std::vector<double>& h_star) {
  if (grid.size() != h_star.size()) {
    throw std::invalid_argument("write_response_profile_csv: grid/profile length mismatch");
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_response_profile_csv: cannot open " + path);
  out << "lambda,H_star\n";
  char buf[64];
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g", grid[i], h_star[i]);
    out << buf << "\n";
  }
}

}  // namespace specgnn
