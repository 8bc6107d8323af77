// Microbenchmarks for the hot kernels: polynomial graph convolution, the
// dense eigen/SVD factorizations behind constraint construction, the
// per-step filter projection, and model forward/backward passes.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "specgnn/constraints.hpp"
#include "specgnn/eig.hpp"
#include "specgnn/filters.hpp"
#include "specgnn/gnn.hpp"
#include "specgnn/graph.hpp"
#include "specgnn/rng.hpp"
#include "specgnn/svd.hpp"
#include "specgnn/training.hpp"

namespace {

using namespace specgnn;

GraphShiftOperator make_shift(std::size_t n, std::uint64_t seed) {
  return normalize_by_spectral_norm(generate_sbm(n, 5, 0.8, 0.1, seed));
}

GraphSignal make_signal(std::size_t n, std::uint64_t seed) {
  GraphSignal x(n, 1);
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) x(i, 0) = rng.gaussian();
  return x;
}

std::vector<double> make_taps(std::size_t k, std::uint64_t seed) {
  std::vector<double> taps(k);
  Rng rng(seed);
  for (double& t : taps) t = rng.gaussian();
  return taps;
}

void BM_GraphConvolve(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const GraphShiftOperator s = make_shift(n, 3);
  const GraphSignal x = make_signal(n, 4);
  const std::vector<double> taps = make_taps(5, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(graph_convolve(std::span<const double>(taps), s, x));
  }
  state.SetComplexityN(static_cast<std::int64_t>(n));
}
BENCHMARK(BM_GraphConvolve)->Arg(50)->Arg(200)->Arg(800)->Complexity();

void BM_SymmetricEig(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const GraphShiftOperator s = make_shift(n, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(symmetric_eig(s.matrix()));
  }
}
BENCHMARK(BM_SymmetricEig)->Arg(25)->Arg(50)->Arg(100);

void BM_ThinSvdVandermonde(benchmark::State& state) {
  const std::size_t m = static_cast<std::size_t>(state.range(0));
  const std::vector<double> lambdas = uniform_grid(-0.75, 1.25, m);
  const VandermondeMatrix v = build_vandermonde(lambdas, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(thin_svd(v.matrix));
  }
}
BENCHMARK(BM_ThinSvdVandermonde)->Arg(64)->Arg(1078);

void BM_BuildStaticSpec(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const GraphShiftOperator s = make_shift(n, 11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_static_spec(s, 5, 1.0));
  }
}
BENCHMARK(BM_BuildStaticSpec)->Arg(50)->Arg(100);

void BM_ProjectFilter(benchmark::State& state) {
  const std::size_t m = static_cast<std::size_t>(state.range(0));
  ScenarioPlan plan = make_scenario_plan(-0.75, 1.25, 0.1, 0.1, 5, 13);
  plan.m_used = m;
  plan.undersample_override = m < plan.m_required;
  const ConstraintSpec spec = build_scenario_spec(plan, 5, 1.0);
  const FilterCoefficients g(make_taps(5, 17));
  for (auto _ : state) {
    benchmark::DoNotOptimize(project_filter(g, spec));
  }
}
BENCHMARK(BM_ProjectFilter)->Arg(64)->Arg(1078);

void BM_ProjectModel(benchmark::State& state) {
  const GraphShiftOperator s = make_shift(50, 19);
  const ConstraintSpec spec = build_static_spec(s, 5, 1.0);
  GnnModel model({1, 16, 16}, 5, Nonlinearity::relu, ReadoutMode::flatten, 5, 50);
  Rng rng(23);
  model.init_random(rng);
  for (auto _ : state) {
    std::vector<FilterTensor> layers = model.layers();
    project_model(layers, spec);
    benchmark::DoNotOptimize(layers);
  }
}
BENCHMARK(BM_ProjectModel);

void BM_Forward(benchmark::State& state) {
  const std::size_t n = 50;
  const GraphShiftOperator s = make_shift(n, 29);
  const GraphSignal x = make_signal(n, 31);
  GnnModel model({1, 16, 16}, 5, Nonlinearity::relu, ReadoutMode::flatten, 5, n);
  Rng rng(37);
  model.init_random(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(forward(model, s, x));
  }
}
BENCHMARK(BM_Forward);

void BM_Backward(benchmark::State& state) {
  const std::size_t n = 50;
  const GraphShiftOperator s = make_shift(n, 41);
  const GraphSignal x = make_signal(n, 43);
  GnnModel model({1, 16, 16}, 5, Nonlinearity::relu, ReadoutMode::flatten, 5, n);
  Rng rng(47);
  model.init_random(rng);
  DenseMatrix target(1, 5);
  target(0, 2) = 1.0;
  ForwardCache cache;
  forward(model, s, x, cache);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        backward(model, s, cache, target, LossKind::cross_entropy_with_logits));
  }
}
BENCHMARK(BM_Backward);

void BM_PgdAttack(benchmark::State& state) {
  const std::size_t n = 50;
  const GraphShiftOperator s = make_shift(n, 53);
  const GraphSignal x = make_signal(n, 59);
  GnnModel model({1, 16, 16}, 5, Nonlinearity::relu, ReadoutMode::flatten, 5, n);
  Rng rng(61);
  model.init_random(rng);
  DenseMatrix target(1, 5);
  target(0, 1) = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pgd_attack(model, s, x, target,
                                        LossKind::cross_entropy_with_logits, 0.01, 10, 0.0025));
  }
}
BENCHMARK(BM_PgdAttack);

}  // namespace

BENCHMARK_MAIN();
