#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numeric>

#include "specgnn/filters.hpp"
#include "specgnn/graph.hpp"
#include "specgnn/rng.hpp"

using namespace specgnn;

namespace {

GraphShiftOperator path_graph(std::size_t n) {
  DenseMatrix a(n, n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    a(i, i + 1) = 1.0;
    a(i + 1, i) = 1.0;
  }
  return GraphShiftOperator(std::move(a));
}

GraphSignal random_signal(std::size_t n, std::size_t f, std::uint64_t seed) {
  Rng rng(seed);
  GraphSignal x(n, f);
  for (double& v : x.entries()) v = rng.uniform(-1.0, 1.0);
  return x;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("two-node swap operator has unit spectral norm") {
  DenseMatrix a(2, 2);
  a(0, 1) = 1.0;
  a(1, 0) = 1.0;
  GraphShiftOperator s(a);
  CHECK(s.node_count() == 2);
  CHECK(s.spectral_norm() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("normalization brings the extreme eigenvalue to magnitude one") {
  GraphShiftOperator s = generate_sbm(20, 4, 0.9, 0.2, 5);
  GraphShiftOperator n = normalize_by_spectral_norm(s);
  CHECK(n.spectral_norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(normalize_by_spectral_norm(GraphShiftOperator(DenseMatrix(3, 3))),
                  std::invalid_argument);
}

TEST_CASE("graph convolution matches the explicit shift sum") {
  GraphShiftOperator s = path_graph(5);
  GraphSignal x = random_signal(5, 2, 7);
  FilterCoefficients h({1.0, 0.5, 0.25});

  GraphSignal sx = matmul(s.matrix(), x);
  GraphSignal ssx = matmul(s.matrix(), sx);
  GraphSignal expect = x;
  expect *= 1.0;
  expect.add_scaled(sx, 0.5);
  expect.add_scaled(ssx, 0.25);

  GraphSignal got = graph_convolve(h, s, x);
  expect -= got;
  CHECK(frobenius_norm(expect) <= 1e-13);

  // Single-tap identity filter returns the input untouched.
  GraphSignal id = graph_convolve(FilterCoefficients({1.0}), s, x);
  id -= x;
  CHECK(frobenius_norm(id) == 0.0);
}

TEST_CASE("convolution acts as the frequency response on the eigenbasis") {
  GraphShiftOperator s = normalize_by_spectral_norm(generate_sbm(12, 3, 0.9, 0.2, 9));
  GraphSignal x = random_signal(12, 1, 11);
  FilterCoefficients h({0.3, -0.6, 0.2, 0.4});

  const EigenDecomposition& e = s.spectrum();
  DenseMatrix xi = matmul(transpose(e.eigenvectors), x);  // spectral coefficients
  for (std::size_t i = 0; i < 12; ++i) {
    xi(i, 0) *= frequency_response(h, e.eigenvalues[i]);
  }
  DenseMatrix expect = matmul(e.eigenvectors, xi);

  GraphSignal got = graph_convolve(h, s, x);
  expect -= got;
  CHECK(frobenius_norm(expect) <= 1e-10);
}

TEST_CASE("convolution is permutation equivariant") {
  GraphShiftOperator s = normalize_by_spectral_norm(generate_sbm(15, 3, 0.8, 0.2, 13));
  GraphSignal x = random_signal(15, 3, 14);
  FilterCoefficients h({0.2, 0.5, -0.3});

  std::vector<std::size_t> perm(15);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(15);
  rng.shuffle(perm);

  auto [ps, px] = permute(s, x, perm);
  GraphSignal lhs = graph_convolve(h, ps, px);
  GraphSignal rhs = permute_rows(graph_convolve(h, s, x), perm);
  lhs -= rhs;
  CHECK(frobenius_norm(lhs) <= 1e-12);

  std::vector<std::size_t> not_bijective(15, 0);
  CHECK_THROWS_AS(permute(s, x, not_bijective), std::invalid_argument);
}

TEST_CASE("SBM generation: shape, symmetry, determinism, degenerate probabilities") {
  GraphShiftOperator s = generate_sbm(24, 4, 0.7, 0.1, 17);
  const DenseMatrix& a = s.matrix();
  REQUIRE(a.rows() == 24);
  for (std::size_t i = 0; i < 24; ++i) {
    CHECK(a(i, i) == 0.0);
    for (std::size_t j = 0; j < 24; ++j) {
      CHECK(a(i, j) == a(j, i));
      CHECK((a(i, j) == 0.0 || a(i, j) == 1.0));
    }
  }

  GraphShiftOperator again = generate_sbm(24, 4, 0.7, 0.1, 17);
  DenseMatrix diff = a;
  diff -= again.matrix();
  CHECK(frobenius_norm(diff) == 0.0);

  // p_in = 1, p_out = 0 gives disjoint complete blocks.
  GraphShiftOperator blocks = generate_sbm(12, 3, 1.0, 0.0, 19);
  for (std::size_t i = 0; i < 12; ++i) {
    for (std::size_t j = 0; j < 12; ++j) {
      bool same = sbm_community_of(i, 12, 3) == sbm_community_of(j, 12, 3);
      double expect = (i != j && same) ? 1.0 : 0.0;
      CHECK(blocks.matrix()(i, j) == expect);
    }
  }

  CHECK_THROWS_AS(generate_sbm(10, 3, 0.5, 0.1, 1), std::invalid_argument);  // 10 % 3 != 0
  CHECK_THROWS_AS(generate_sbm(10, 2, 1.5, 0.1, 1), std::invalid_argument);
  CHECK_THROWS_AS(generate_sbm(10, 2, 0.5, -0.1, 1), std::invalid_argument);
}

TEST_CASE("community layout is contiguous blocks") {
  CHECK(sbm_community_of(0, 12, 3) == 0);
  CHECK(sbm_community_of(3, 12, 3) == 0);
  CHECK(sbm_community_of(4, 12, 3) == 1);
  CHECK(sbm_community_of(11, 12, 3) == 2);
}

TEST_CASE("random geometric sequence: shape, validity, determinism") {
  DynamicGraphSequence seq = generate_rgg_sequence(15, 0.4, 6, 0.05, 23);
  REQUIRE(seq.size() == 6);
  CHECK(seq.node_count() == 15);
  for (const GraphShiftOperator& op : seq.operators) {
    const DenseMatrix& a = op.matrix();
    for (std::size_t i = 0; i < 15; ++i) {
      CHECK(a(i, i) == 0.0);
      for (std::size_t j = 0; j < 15; ++j) {
        CHECK(a(i, j) == a(j, i));
        CHECK((a(i, j) == 0.0 || a(i, j) == 1.0));
      }
    }
  }

  DynamicGraphSequence again = generate_rgg_sequence(15, 0.4, 6, 0.05, 23);
  for (std::size_t t = 0; t < 6; ++t) {
    DenseMatrix diff = seq.operators[t].matrix();
    diff -= again.operators[t].matrix();
    CHECK(frobenius_norm(diff) == 0.0);
  }

  // Consecutive steps should differ somewhere as agents move (statistical,
  // but at this scale a frozen family would indicate a broken walk).
  double total_change = 0.0;
  for (std::size_t t = 1; t < 6; ++t) {
    DenseMatrix diff = seq.operators[t].matrix();
    diff -= seq.operators[t - 1].matrix();
    total_change += frobenius_norm(diff);
  }
  CHECK(total_change > 0.0);
}

TEST_CASE("edge list round-trips an adjacency exactly") {
  GraphShiftOperator s = generate_sbm(16, 4, 0.6, 0.2, 29);
  std::string path = temp_path("specgnn_test_graph.edges");
  write_edge_list(path, s.matrix());
  DenseMatrix back = read_edge_list(path);
  DenseMatrix diff = back;
  diff -= s.matrix();
  CHECK(frobenius_norm(diff) == 0.0);
  std::filesystem::remove(path);
}

TEST_CASE("signal CSV round-trips bit-exactly") {
  GraphSignal x = random_signal(9, 4, 31);
  x(0, 0) = 1.0 / 3.0;  // needs all 17 digits
  std::string path = temp_path("specgnn_test_signal.csv");
  write_signal_csv(path, x);
  DenseMatrix back = read_signal_csv(path);
  REQUIRE(back.rows() == 9);
  REQUIRE(back.cols() == 4);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(back.entries()[i] == x.entries()[i]);
  std::filesystem::remove(path);
}
