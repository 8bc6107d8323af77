#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "specgnn/filters.hpp"
#include "specgnn/graph.hpp"
#include "specgnn/rng.hpp"

using namespace specgnn;

namespace {

// Independent straight-power evaluation to oracle the Horner form.
double naive_response(const std::vector<double>& taps, double lambda) {
  double acc = 0.0;
  for (std::size_t k = 0; k < taps.size(); ++k) acc += taps[k] * std::pow(lambda, double(k));
  return acc;
}

}  // namespace

TEST_CASE("frequency response equals the naive power sum") {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t k = 1 + rng.index(6);
    std::vector<double> taps(k);
    for (double& t : taps) t = rng.uniform(-2.0, 2.0);
    double lambda = rng.uniform(-1.5, 1.5);
    double got = frequency_response(std::span<const double>(taps), lambda);
    CHECK(got == doctest::Approx(naive_response(taps, lambda)).epsilon(1e-12));
  }
  // Hand values: (1,1) at 1 -> 2; constant filter is flat.
  CHECK(frequency_response(FilterCoefficients({1.0, 1.0}), 1.0) == 2.0);
  CHECK(frequency_response(FilterCoefficients({0.7}), -123.0) == 0.7);
}

TEST_CASE("Vandermonde rows are (1, lambda, lambda^2, ...)") {
  VandermondeMatrix v = build_vandermonde({0.5, -1.0, 2.0}, 3);
  REQUIRE(v.matrix.rows() == 3);
  REQUIRE(v.matrix.cols() == 3);
  CHECK(v.matrix(0, 0) == 1.0);
  CHECK(v.matrix(0, 1) == 0.5);
  CHECK(v.matrix(0, 2) == 0.25);
  CHECK(v.matrix(1, 1) == -1.0);
  CHECK(v.matrix(1, 2) == 1.0);
  CHECK(v.matrix(2, 2) == 4.0);

  CHECK_THROWS_AS(build_vandermonde({0.5, 1.0}, 3), std::invalid_argument);
}

TEST_CASE("Lipschitz constant is the max response magnitude over the spectrum") {
  GraphShiftOperator s = normalize_by_spectral_norm(generate_sbm(12, 3, 0.9, 0.1, 7));
  FilterCoefficients h({0.4, -0.8, 0.3});
  double expect = 0.0;
  for (double l : s.spectrum().eigenvalues) {
    expect = std::max(expect, std::abs(frequency_response(h, l)));
  }
  CHECK(lipschitz_constant(h, s) == doctest::Approx(expect).epsilon(1e-14));

  // The identity filter passes signals through unchanged on any graph.
  CHECK(lipschitz_constant(FilterCoefficients({1.0}), s) == 1.0);
}

TEST_CASE("max_abs_response scans every filter in every bank") {
  FilterTensor t1(1, 2, 2);
  t1.at(0, 0, 0) = 1.0;  // response 1 everywhere
  t1.at(0, 1, 1) = 2.0;  // response 2*lambda
  FilterTensor t2(2, 1, 2);
  t2.at(1, 0, 0) = -3.0;  // response -3
  std::vector<FilterTensor> layers = {t1, t2};
  CHECK(max_abs_response(layers, 0.5) == 3.0);   // | -3 | beats 1 and 1
  CHECK(max_abs_response(layers, 2.0) == 4.0);   // 2*lambda wins
}

TEST_CASE("integral-Lipschitz transform is lambda times the derivative") {
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> taps(5);
    for (double& t : taps) t = rng.uniform(-1.0, 1.0);
    FilterCoefficients h(taps);
    FilterCoefficients il = integral_lipschitz_transform(h);
    REQUIRE(il.order() == h.order());
    for (std::size_t k = 0; k < taps.size(); ++k) CHECK(il.taps[k] == double(k) * taps[k]);

    double lambda = rng.uniform(-1.2, 1.2);
    double derivative = 0.0;  // dH/dlambda = sum_k k h_k lambda^(k-1)
    for (std::size_t k = 1; k < taps.size(); ++k) {
      derivative += double(k) * taps[k] * std::pow(lambda, double(k - 1));
    }
    CHECK(frequency_response(il, lambda) ==
          doctest::Approx(lambda * derivative).epsilon(1e-11));
  }
}

TEST_CASE("uniform grid hits both endpoints with even spacing") {
  std::vector<double> g = uniform_grid(-0.75, 1.25, 5);
  REQUIRE(g.size() == 5);
  CHECK(g.front() == -0.75);
  CHECK(g.back() == 1.25);
  CHECK(g[2] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK_THROWS_AS(uniform_grid(0.0, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(uniform_grid(1.0, 0.0, 10), std::invalid_argument);
}

TEST_CASE("response profile: zero banks give a flat zero line") {
  std::vector<FilterTensor> layers = {FilterTensor(1, 2, 3)};
  std::vector<double> grid = uniform_grid(-1.0, 1.0, 11);
  std::vector<double> profile = max_response_profile(layers, grid);
  REQUIRE(profile.size() == 11);
  for (double v : profile) CHECK(v == 0.0);
}

TEST_CASE("response profile of the known (1,1) filter is |1 + lambda|") {
  FilterTensor t(1, 1, 2);
  t.at(0, 0, 0) = 1.0;
  t.at(0, 0, 1) = 1.0;
  std::vector<double> grid = {-1.0, 0.0, 1.0};
  std::vector<double> profile = max_response_profile({t}, grid);
  CHECK(profile[0] == 0.0);
  CHECK(profile[1] == 1.0);
  CHECK(profile[2] == 2.0);
}

TEST_CASE("profile CSV is written with header and full precision") {
  std::string path =
      (std::filesystem::temp_directory_path() / "specgnn_test_profile.csv").string();
  write_response_profile_csv(path, {0.0, 1.0}, {0.5, 1.0 / 3.0});
  std::ifstream in(path);
  std::string header, row0, row1;
  std::getline(in, header);
  std::getline(in, row0);
  std::getline(in, row1);
  CHECK(header == "lambda,H_star");
  CHECK(row0 == "0,0.5");
  CHECK(row1 == "1,0.33333333333333331");
  std::filesystem::remove(path);
}
