#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "numvol/cones.hpp"

namespace numvol {

struct NumericalVariety;

struct OptConfig {
  int starts = 16;
  int max_iter = 1000;
  double tol = 1e-8;
  std::uint64_t seed = 0;
  double fd_step = 1e-5;
};

enum class OptStatus { Converged, MaxIter, BoundaryZero };
std::string to_string(OptStatus status);

struct OptResult {
  /// Best ratio R(β) = <β,γ> / vol(β)^{1/p}; callers apply the exponent.
  double value = 0;
  /// Minimizer rescaled to unit volume (divisor coordinates).
  Vec argmin;
  int iterations = 0;
  int starts_used = 0;
  double kkt_gap = 0;
  OptStatus status = OptStatus::MaxIter;
  int fallback_starts = 0;
  std::string diagnostics;
};

/// A positive homogeneous function on a cone. Only `value` is required.
struct VolumeEvaluator {
  std::string tag;
  std::function<double(std::span<const double>)> value;
  /// Analytic gradient; central finite differences are used when empty.
  std::function<Vec(std::span<const double>)> gradient;
  /// Combinatorial signature of the local polynomial piece; differences are only
  /// trusted when it is unchanged at β ± h·e_j.
  std::function<std::uint64_t(std::span<const double>)> chamber;
  /// Exact value at rational points, used for boundary detection on generators.
  std::function<Rational(const RatVec&)> exact;
};

/// β ↦ β^n from the intersection tensor (valid on the nef cone).
VolumeEvaluator nef_polynomial_evaluator(const NumericalVariety& v);
/// Big-cone volume: Z(β)^2 on surfaces, n!·vol(P_β) on toric varieties. Throws NefOnlyError.
VolumeEvaluator big_volume_evaluator(const NumericalVariety& v);

struct OptProblem {
  PolyhedralCone cone;
  /// γ in coordinates dual to the cone's, so the pairing is a dot product.
  RatVec objective;
  VolumeEvaluator volume;
  /// Homogeneity degree p of the volume.
  double exponent = 2;
  /// On the nef cone every zero pairing with a generator forces the infimum to 0.
  bool zero_pairing_forces_zero = false;
};

/// log of a degree-0 homogeneous objective on the open cone.
struct LogObjective {
  std::function<std::optional<double>(std::span<const double>)> value;
  /// Ambient gradient; returns false if the value could not be certified stable.
  std::function<bool(std::span<const double>, Vec&)> gradient;
};

/// Called with (start index, log objective) after every accepted step.
using DescentObserver = std::function<void(int, double)>;

struct EngineResult {
  double log_value = 0;
  bool found = false;
  Vec point;
  int iterations = 0;
  int starts_used = 0;
  double kkt_gap = 0;
  int fallback_starts = 0;
};

/// Multi-start minimization over cone(generators), parameterized by the simplex of
/// generator weights: a log-barrier phase with decreasing weight, then projected
/// gradient polishing. Accepted steps never increase the objective.
EngineResult minimize_on_cone(const std::vector<Vec>& generators, const LogObjective& objective,
                              const OptConfig& config, const DescentObserver& observer = {});

OptResult min_pairing_on_slice(const OptProblem& problem, const OptConfig& config,
                               const DescentObserver& observer = {});

/// True iff the angle between γ and β^{n-1} is at most tol (radians).
bool certify_interior_optimum(const NumericalVariety& v, std::span<const double> beta, const RatVec& gamma,
                              double tol);

/// Euclidean projection onto the probability simplex.
Vec project_simplex(std::span<const double> w);

}  // namespace numvol
