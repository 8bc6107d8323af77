#include "specgnn/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "specgnn/graph.hpp"
#include "specgnn/rng.hpp"

namespace specgnn {

namespace {

void validate_probability(double p, const char* name) {
  if (!(p > 0.0) || !(p < 1.0)) {
    throw std::invalid_argument(std::string(name) + " must lie strictly inside (0, 1), got " +
                                std::to_string(p));
  }
}

void validate_plan(const ScenarioPlan& plan) {
  if (!std::isfinite(plan.interval_a) || !std::isfinite(plan.interval_b) ||
      !(plan.interval_a < plan.interval_b)) {
    throw std::invalid_argument("scenario plan: interval must satisfy a < b, got [" +
                                std::to_string(plan.interval_a) + ", " +
                                std::to_string(plan.interval_b) + "]");
  }
  validate_probability(plan.epsilon, "scenario plan: epsilon");
  validate_probability(plan.delta, "scenario plan: delta");
  if (plan.m_used == 0) {
    throw std::invalid_argument("scenario plan: m_used must be positive");
  }
}

}  // namespace

std::size_t scenario_sample_size(double epsilon, double delta, std::size_t taps) {
  validate_probability(epsilon, "scenario_sample_size: epsilon");
  validate_probability(delta, "scenario_sample_size: delta");
  if (taps == 0) {
    throw std::invalid_argument("scenario_sample_size: taps must be positive");
  }
  const double raw = (4.0 / epsilon) * (static_cast<double>(taps) * std::log(12.0 / epsilon) +
                                        std::log(2.0 / delta));
  return static_cast<std::size_t>(std::ceil(raw));
}

EigenvalueInterval harvest_interval(const DynamicGraphSequence& seq) {
  if (seq.operators.empty()) {
    throw std::invalid_argument("harvest_interval: sequence has no operators");
  }
  EigenvalueInterval iv{std::numeric_limits<double>::infinity(),
                        -std::numeric_limits<double>::infinity()};
  for (const GraphShiftOperator& op : seq.operators) {
    const std::vector<double>& ev = op.spectrum().eigenvalues;
    iv.lo = std::min(iv.lo, ev.front());  // eigenvalues are sorted ascending
    iv.hi = std::max(iv.hi, ev.back());
  }
  return iv;
}

ScenarioPlan make_scenario_plan(double a, double b, double epsilon, double delta,
                                std::size_t taps, std::uint64_t seed) {
  ScenarioPlan plan;
  plan.interval_a = a;
  plan.interval_b = b;
  plan.epsilon = epsilon;
  plan.delta = delta;
  plan.m_required = scenario_sample_size(epsilon, delta, taps);
  plan.m_used = plan.m_required;
  plan.seed = seed;
  validate_plan(plan);
  return plan;
}

std::string scenario_plan_to_json(const ScenarioPlan& plan) {
  nlohmann::json j;
  j["interval_a"] = plan.interval_a;
  j["interval_b"] = plan.interval_b;
  j["epsilon"] = plan.epsilon;
  j["delta"] = plan.delta;
  j["m_required"] = plan.m_required;
  j["m_used"] = plan.m_used;
  j["seed"] = plan.seed;
  j["undersample_override"] = plan.undersample_override;
  return j.dump(2);
}

ScenarioPlan scenario_plan_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  ScenarioPlan plan;
  plan.interval_a = j.at("interval_a").get<double>();
  plan.interval_b = j.at("interval_b").get<double>();
  plan.epsilon = j.at("epsilon").get<double>();
  plan.delta = j.at("delta").get<double>();
  plan.m_required = j.at("m_required").get<std::size_t>();
  plan.m_used = j.at("m_used").get<std::size_t>();
  plan.seed = j.at("seed").get<std::uint64_t>();
  plan.undersample_override = j.value("undersample_override", false);
  validate_plan(plan);
  return plan;
}

std::vector<double> dedupe_sorted(std::vector<double> lambdas, double tol) {
  for (double l : lambdas) {
    if (!std::isfinite(l)) {
      throw std::invalid_argument("dedupe_sorted: frequencies must be finite");
    }
  }
  std::sort(lambdas.begin(), lambdas.end());
  std::vector<double> out;
  out.reserve(lambdas.size());
  for (double l : lambdas) {
    if (out.empty() || l - out.back() > tol) out.push_back(l);
  }
  return out;
}

ConstraintSpec::ConstraintSpec(std::vector<double> lambdas, std::size_t taps, double bound_c,
                               std::optional<ScenarioPlan> plan)
    : lambdas_(dedupe_sorted(std::move(lambdas))),
      taps_(taps),
      bound_c_(bound_c),
      plan_(std::move(plan)) {
  if (!(bound_c_ > 0.0) || !std::isfinite(bound_c_)) {
    throw std::invalid_argument("ConstraintSpec: bound c must be positive and finite");
  }
  if (lambdas_.size() < taps_) {
    throw std::invalid_argument("ConstraintSpec: " + std::to_string(taps_) +
                                " taps need at least as many distinct frequencies, have " +
                                std::to_string(lambdas_.size()));
  }
  const VandermondeMatrix v = build_vandermonde(lambdas_, taps_);
  svd_ = thin_svd(v.matrix);

  // The projection is only as trustworthy as the factorization; verify
  // U * Sigma * V^T reproduces the Vandermonde before accepting it.
  const std::size_t m = lambdas_.size();
  double err = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < taps_; ++k) {
      double reconstructed = 0.0;
      for (std::size_t j = 0; j < taps_; ++j) {
        reconstructed +=
            svd_.left_vectors(i, j) * svd_.singular_values[j] * svd_.right_vectors(k, j);
      }
      err = std::max(err, std::abs(reconstructed - v.matrix(i, k)));
    }
  }
  const double scale = std::max(1.0, svd_.singular_values.front());
  if (err > 1e-10 * scale) {
    throw std::runtime_error("ConstraintSpec: SVD reconstruction error " + std::to_string(err) +
                             " exceeds tolerance; frequency set is too ill-conditioned");
  }
  sigma_floor_ = 1e-10 * svd_.singular_values.front();
}

ConstraintSpec ConstraintSpec::with_bound(double bound_c) const {
  if (!(bound_c > 0.0) || !std::isfinite(bound_c)) {
    throw std::invalid_argument("ConstraintSpec: bound c must be positive and finite");
  }
  ConstraintSpec copy = *this;
  copy.bound_c_ = bound_c;
  return copy;
}

double ConstraintSpec::rotated_norm(std::span<const double> taps) const {
  if (taps.size() != taps_) {
    throw std::invalid_argument("ConstraintSpec: filter has " + std::to_string(taps.size()) +
                                " taps but the spec expects " + std::to_string(taps_));
  }
  const DenseMatrix& v = svd_.right_vectors;
  double norm = 0.0;
  for (std::size_t i = 0; i < taps_; ++i) {
    double u = 0.0;
    for (std::size_t j = 0; j < taps_; ++j) u += v(j, i) * taps[j];
    norm = std::max(norm, svd_.singular_values[i] * std::abs(u));
  }
  return norm;
}

double ConstraintSpec::max_response(std::span<const double> taps) const {
  double m = 0.0;
  for (double lambda : lambdas_) {
    m = std::max(m, std::abs(frequency_response(taps, lambda)));
  }
  return m;
}

void ConstraintSpec::project_in_place(std::span<double> taps) const {
  if (taps.size() != taps_) {
    throw std::invalid_argument("project_filter: filter has " + std::to_string(taps.size()) +
                                " taps but the spec expects " + std::to_string(taps_));
  }
  const DenseMatrix& v = svd_.right_vectors;

  // Rotate into the singular basis: u = V^T g.
  std::vector<double> u(taps_);
  bool feasible = true;
  for (std::size_t i = 0; i < taps_; ++i) {
    double ui = 0.0;
    for (std::size_t j = 0; j < taps_; ++j) ui += v(j, i) * taps[j];
    u[i] = ui;
    if (svd_.singular_values[i] * std::abs(ui) > bound_c_) feasible = false;
  }
  if (feasible) return;  // already in the box: leave g bit-exactly alone

  // Clip each constrained coordinate to [-c/sigma_i, c/sigma_i] and rotate back.
  for (std::size_t i = 0; i < taps_; ++i) {
    const double sigma = svd_.singular_values[i];
    if (sigma <= sigma_floor_) continue;
    const double cap = bound_c_ / sigma;
    u[i] = std::clamp(u[i], -cap, cap);
  }
  for (std::size_t j = 0; j < taps_; ++j) {
    double hj = 0.0;
    for (std::size_t i = 0; i < taps_; ++i) hj += v(j, i) * u[i];
    taps[j] = hj;
  }
}

std::size_t ConstraintSpec::unconstrained_directions() const {
  std::size_t count = 0;
  for (double sigma : svd_.singular_values) {
    if (sigma <= sigma_floor_) ++count;
  }
  return count;
}

ConstraintSpec build_static_spec(const GraphShiftOperator& s, std::size_t taps, double c) {
  std::vector<double> lambdas = dedupe_sorted(s.spectrum().eigenvalues);
  if (lambdas.size() < taps) {
    throw std::invalid_argument(
        "build_static_spec: operator has " + std::to_string(lambdas.size()) +
        " distinct eigenvalue(s) but the filter has " + std::to_string(taps) +
        " taps; the projection needs at least as many sampled frequencies as taps "
        "(reduce taps or use a scenario constraint)");
  }
  return ConstraintSpec(std::move(lambdas), taps, c);
}

ConstraintSpec build_scenario_spec(const ScenarioPlan& plan, std::size_t taps, double c) {
  validate_plan(plan);
  if (plan.m_used < taps) {
    throw std::invalid_argument("build_scenario_spec: m_used=" + std::to_string(plan.m_used) +
                                " is below the filter tap count " + std::to_string(taps));
  }
  if (plan.m_used < plan.m_required && !plan.undersample_override) {
    throw std::invalid_argument(
        "build_scenario_spec: m_used=" + std::to_string(plan.m_used) +
        " is below the VC sample-complexity requirement m_required=" +
        std::to_string(plan.m_required) +
        "; set undersample_override to accept a weaker generalization guarantee");
  }
  Rng rng(plan.seed);
  std::vector<double> lambdas(plan.m_used);
  for (double& l : lambdas) l = rng.uniform(plan.interval_a, plan.interval_b);
  return ConstraintSpec(std::move(lambdas), taps, c, plan);
}

std::string constraint_spec_to_json(const ConstraintSpec& spec) {
  nlohmann::json j;
  j["taps"] = spec.taps();
  j["bound_c"] = spec.bound_c();
  j["lambdas"] = spec.lambdas();
  if (spec.plan()) {
    j["plan"] = nlohmann::json::parse(scenario_plan_to_json(*spec.plan()));
  } else {
    j["plan"] = nullptr;
  }
  return j.dump(2);
}

ConstraintSpec constraint_spec_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  std::optional<ScenarioPlan> plan;
  if (j.contains("plan") && !j.at("plan").is_null()) {
    plan = scenario_plan_from_json(j.at("plan").dump());
  }
  return ConstraintSpec(j.at("lambdas").get<std::vector<double>>(),
                        j.at("taps").get<std::size_t>(), j.at("bound_c").get<double>(),
                        std::move(plan));
}

void project_model(std::vector<FilterTensor>& layers, const ConstraintSpec& spec) {
  for (FilterTensor& t : layers) {
    for (std::size_t f = 0; f < t.in_banks(); ++f) {
      for (std::size_t g = 0; g < t.out_filters(); ++g) {
        spec.project_in_place(t.filter(f, g));
      }
    }
  }
}

FeasibilityReport check_feasibility(const std::vector<FilterTensor>& layers,
                                    const ConstraintSpec& spec, std::size_t grid_points) {
  if (layers.empty()) {
    throw std::invalid_argument("check_feasibility: model has no filter banks");
  }
  FeasibilityReport report;
  report.max_violation = -std::numeric_limits<double>::infinity();
  report.rotated_violation = -std::numeric_limits<double>::infinity();
  report.unconstrained_directions = spec.unconstrained_directions();

  for (const FilterTensor& t : layers) {
    for (std::size_t f = 0; f < t.in_banks(); ++f) {
      for (std::size_t g = 0; g < t.out_filters(); ++g) {
        const std::span<const double> taps = t.filter(f, g);
        report.max_violation =
            std::max(report.max_violation, spec.max_response(taps) - spec.bound_c());
        report.rotated_violation =
            std::max(report.rotated_violation, spec.rotated_norm(taps) - spec.bound_c());
      }
    }
  }

  if (grid_points > 0) {
    double a = spec.lambdas().front();
    double b = spec.lambdas().back();
    if (spec.plan()) {
      a = spec.plan()->interval_a;
      b = spec.plan()->interval_b;
    }
    std::size_t violations = 0;
    for (double lambda : uniform_grid(a, b, grid_points)) {
      if (max_abs_response(layers, lambda) > spec.bound_c()) ++violations;
    }
    report.grid_violation_fraction =
        static_cast<double>(violations) / static_cast<double>(grid_points);
  }
  return report;
}

}  // namespace specgnn
