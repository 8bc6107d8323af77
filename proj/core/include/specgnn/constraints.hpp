#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "specgnn/filters.hpp"
#include "specgnn/svd.hpp"

namespace specgnn {

class GraphShiftOperator;
struct DynamicGraphSequence;

/// Number of uniform frequency draws m such that, with confidence 1 - delta,
/// any filter feasible on all m draws violates the continuous-interval
/// constraint on at most an epsilon fraction of it (VC sample-complexity
/// bound): m = ceil((4/eps) * (K ln(12/eps) + ln(2/delta))).
std::size_t scenario_sample_size(double epsilon, double delta, std::size_t taps);

/// Closed frequency interval; degenerate when it has collapsed to a point.
struct EigenvalueInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool degenerate() const { return !(lo < hi); }
};

/// Min and max eigenvalue over every operator in the sequence.
EigenvalueInterval harvest_interval(const DynamicGraphSequence& seq);

/// Recipe for sampling constraint frequencies from an interval. m_used may be
/// forced below m_required only by recording the override on the plan.
struct ScenarioPlan {
  double interval_a = 0.0;
  double interval_b = 0.0;
  double epsilon = 0.0;
  double delta = 0.0;
  std::size_t m_required = 0;
  std::size_t m_used = 0;
  std::uint64_t seed = 0;
  bool undersample_override = false;
};

/// Validated plan with m_required = m_used = scenario_sample_size(...).
ScenarioPlan make_scenario_plan(double a, double b, double epsilon, double delta,
                                std::size_t taps, std::uint64_t seed);

std::string scenario_plan_to_json(const ScenarioPlan& plan);
ScenarioPlan scenario_plan_from_json(const std::string& text);

/// Sort ascending and merge values closer than tol (keeps the first of each
/// cluster). Rejects non-finite entries.
std::vector<double> dedupe_sorted(std::vector<double> lambdas, double tol = 1e-9);

/// A frequency set with a response bound c, compiled via the SVD of its
/// Vandermonde matrix into the Euclidean projection onto the rotated box
/// { h : |sigma_i * (V^T h)_i| <= c }. Singular directions with sigma_i at or
/// below sigma_floor are left unconstrained (their cap c/sigma_i would be
/// meaninglessly large). Immutable after construction; safe to share across
/// threads.
class ConstraintSpec {
 public:
  /// Dedupes and sorts the frequencies, builds the Vandermonde and its SVD,
  /// and verifies the factorization reproduces the matrix.
  ConstraintSpec(std::vector<double> lambdas, std::size_t taps, double bound_c,
                 std::optional<ScenarioPlan> plan = std::nullopt);

  const std::vector<double>& lambdas() const { return lambdas_; }
  std::size_t taps() const { return taps_; }
  double bound_c() const { return bound_c_; }
  double sigma_floor() const { return sigma_floor_; }
  const ThinSVD& svd() const { return svd_; }
  const std::optional<ScenarioPlan>& plan() const { return plan_; }

  /// Copy of this spec with a different bound (per-layer overrides); reuses
  /// the factorization.
  ConstraintSpec with_bound(double bound_c) const;

  /// ||Sigma V^T h||_inf: the norm the projection actually enforces.
  double rotated_norm(std::span<const double> taps) const;

  /// Max |H(lambda)| over the spec's frequencies (the true response; can
  /// exceed rotated_norm because the left singular factor does not preserve
  /// the max norm).
  double max_response(std::span<const double> taps) const;

  /// Euclidean projection onto the rotated box. Filters already inside it are
  /// returned bit-exactly unchanged.
  void project_in_place(std::span<double> taps) const;

  /// Count of singular directions at or below sigma_floor.
  std::size_t unconstrained_directions() const;

 private:
  std::vector<double> lambdas_;
  std::size_t taps_ = 0;
  double bound_c_ = 0.0;
  double sigma_floor_ = 0.0;
  ThinSVD svd_;
  std::optional<ScenarioPlan> plan_;
};

/// Spec over the full (deduplicated) spectrum of S.
ConstraintSpec build_static_spec(const GraphShiftOperator& s, std::size_t taps, double c);

/// Spec over m_used uniform draws from the plan's interval under its seed.
ConstraintSpec build_scenario_spec(const ScenarioPlan& plan, std::size_t taps, double c);

std::string constraint_spec_to_json(const ConstraintSpec& spec);
ConstraintSpec constraint_spec_from_json(const std::string& text);

inline FilterCoefficients project_filter(const FilterCoefficients& g, const ConstraintSpec& spec) {
  FilterCoefficients h = g;
  spec.project_in_place(h.taps);
  return h;
}

/// Project every filter of every bank in place.
void project_model(std::vector<FilterTensor>& layers, const ConstraintSpec& spec);

struct FeasibilityReport {
  /// Max over filters and spec frequencies of |H(lambda)| - c.
  double max_violation = 0.0;
  /// Max over filters of ||Sigma V^T h||_inf - c (what projection enforces).
  double rotated_violation = 0.0;
  /// Fraction of a dense frequency grid where the max response exceeds c;
  /// -1 when no grid evaluation was requested.
  double grid_violation_fraction = -1.0;
  /// Singular directions the spec leaves unconstrained.
  std::size_t unconstrained_directions = 0;
};

/// Evaluate all filters against the spec. With grid_points > 0 also samples
/// the response on a uniform grid over the plan interval (scenario specs) or
/// the frequency hull (static specs).
FeasibilityReport check_feasibility(const std::vector<FilterTensor>& layers,
                                    const ConstraintSpec& spec, std::size_t grid_points = 0);

}  // namespace specgnn
