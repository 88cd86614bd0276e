#include "numvol/divisor_volume.hpp"

#include <cmath>
#include <optional>

#include "numvol/errors.hpp"
#include "numvol/toric.hpp"
#include "numvol/zariski.hpp"

namespace numvol {

namespace {

std::string describe(const RatVec& alpha) {
  std::string s = "[";
  for (std::size_t i = 0; i < alpha.size(); ++i) s += (i ? "," : "") + format_rational(alpha[i]);
  return s + "]";
}

void require_length(const NumericalVariety& v, std::size_t size) {
  if (static_cast<int>(size) != v.rank)
    throw ArgumentError("class has " + std::to_string(size) + " coordinates, " + v.name + " has Picard rank " +
                        std::to_string(v.rank));
}

double invariant_exponent(const NumericalVariety& v) {
  if (v.dim < 2) throw ArgumentError("the invariant needs n >= 2");
  return static_cast<double>(v.dim) / (v.dim - 1);
}

InvariantValue finish(const NumericalVariety& v, OptResult opt, std::string method) {
  InvariantValue out;
  out.value = opt.status == OptStatus::BoundaryZero ? 0.0 : std::pow(opt.value, invariant_exponent(v));
  out.opt = std::move(opt);
  out.method = std::move(method);
  return out;
}

}  // namespace

VolumeValue vol(const NumericalVariety& v, const RatVec& alpha) {
  require_length(v, alpha.size());
  if (v.nef.contains(alpha)) return {v.intersection.power(alpha), "tensor"};
  if (!v.psef.contains(alpha)) return {Rational(0), "outside-psef"};
  switch (v.oracle) {
    case VolumeOracle::SurfaceZariski:
      return {zariski_volume(v, alpha), "oracle:surface-zariski"};
    case VolumeOracle::ToricPolytope:
      return {vol_big_toric(v, alpha).value, "oracle:toric-polytope"};
    case VolumeOracle::NefOnly:
      break;
  }
  throw NefOnlyError("class " + describe(alpha) + " on " + v.name +
                     " is pseudo-effective but not nef, and the variety has no big-volume oracle");
}

double vol(const NumericalVariety& v, std::span<const double> alpha) {
  require_length(v, alpha.size());
  double scale = 0;
  for (double x : alpha) scale = std::max(scale, std::abs(x));
  if (v.nef.contains(alpha, 1e-13 * scale)) return std::max(0.0, v.intersection.power(alpha));
  return big_volume_evaluator(v).value(alpha);
}

InvariantValue m_invariant(const NumericalVariety& v, const RatVec& gamma, const OptConfig& config) {
  require_length(v, gamma.size());
  OptProblem problem;
  problem.cone = v.psef;
  problem.objective = gamma;
  problem.volume = big_volume_evaluator(v);
  problem.exponent = v.dim;
  return finish(v, min_pairing_on_slice(problem, config), "optimizer:" + problem.volume.tag);
}

InvariantValue m_invariant_nef_slice(const NumericalVariety& v, const RatVec& gamma, const OptConfig& config) {
  require_length(v, gamma.size());
  OptProblem problem;
  problem.cone = v.nef;
  problem.objective = gamma;
  problem.volume = nef_polynomial_evaluator(v);
  problem.exponent = v.dim;
  auto out = finish(v, min_pairing_on_slice(problem, config), "optimizer:nef-polynomial");
  out.upper_bound = true;
  return out;
}

DualityValue vol_via_duality(const NumericalVariety& v, const RatVec& alpha, const OptConfig& config) {
  require_length(v, alpha.size());
  DualityValue out;
  auto reference = vol(v, alpha);
  out.reference = to_double(reference.value);
  out.reference_method = reference.method;
  VolumeEvaluator big = big_volume_evaluator(v);
  invariant_exponent(v);

  // Sign of the minimal pairing with movable generators decides psef membership exactly.
  std::optional<Rational> min_pairing;
  for (const auto& g : v.movable.generators()) {
    Rational q = dot(alpha, g);
    if (!min_pairing || q < *min_pairing) min_pairing = q;
  }
  if (*min_pairing <= 0) {
    out.value = 0;
    out.status = OptStatus::BoundaryZero;
    out.outer.status = OptStatus::BoundaryZero;
    out.outer.diagnostics = *min_pairing < 0 ? "class is not pseudo-effective" : "class is on the psef boundary";
    return out;
  }

  OptConfig inner_config = config;
  inner_config.starts = std::max(2, config.starts / 8);
  inner_config.max_iter = std::min(config.max_iter, 300);
  OptConfig outer_config = config;
  outer_config.starts = std::max(2, config.starts / 4);
  outer_config.max_iter = std::min(config.max_iter, 200);

  OptProblem inner;
  inner.cone = v.psef;
  inner.volume = big;
  inner.exponent = v.dim;
  const Vec a = to_double(alpha);

  Vec cached_point;
  OptResult cached;
  auto solve_inner = [&](std::span<const double> gamma) -> const OptResult& {
    if (cached_point.size() != gamma.size() || !std::equal(gamma.begin(), gamma.end(), cached_point.begin())) {
      inner.objective = to_rational(gamma);
      cached = min_pairing_on_slice(inner, inner_config);
      cached_point.assign(gamma.begin(), gamma.end());
    }
    return cached;
  };

  LogObjective objective;
  objective.value = [&](std::span<const double> gamma) -> std::optional<double> {
    double pairing = dot<double>(std::span<const double>(a), gamma);
    if (!(pairing > 0)) return std::nullopt;
    const auto& r = solve_inner(gamma);
    if (r.status == OptStatus::BoundaryZero || !(r.value > 0) || !std::isfinite(r.value)) return std::nullopt;
    return std::log(pairing) - std::log(r.value);
  };
  objective.gradient = [&](std::span<const double> gamma, Vec& grad) {
    double pairing = dot<double>(std::span<const double>(a), gamma);
    const auto& r = solve_inner(gamma);
    double inner_pairing = dot<double>(std::span<const double>(r.argmin), gamma);
    grad.assign(gamma.size(), 0.0);
    for (std::size_t j = 0; j < gamma.size(); ++j) grad[j] = a[j] / pairing - r.argmin[j] / inner_pairing;
    return true;
  };

  std::vector<Vec> gens;
  for (const auto& g : v.movable.generators()) gens.push_back(to_double(g));
  EngineResult engine = minimize_on_cone(gens, objective, outer_config);
  out.outer.iterations = engine.iterations;
  out.outer.starts_used = engine.starts_used;
  out.outer.kkt_gap = engine.kkt_gap;
  if (!engine.found) {
    out.value = 0;
    out.status = OptStatus::MaxIter;
    out.outer.status = OptStatus::MaxIter;
    out.outer.diagnostics = "no outer start produced a positive invariant";
    return out;
  }
  out.outer.value = std::exp(engine.log_value);
  out.outer.argmin = engine.point;
  out.outer.status = engine.kkt_gap <= config.tol ? OptStatus::Converged : OptStatus::MaxIter;
  out.status = out.outer.status;
  out.value = std::exp(v.dim * engine.log_value);
  return out;
}

}  // namespace numvol
