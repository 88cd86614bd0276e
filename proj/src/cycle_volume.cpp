#include "numvol/cycle_volume.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "numvol/errors.hpp"
#include "numvol/linalg.hpp"

namespace numvol {

namespace {

void check_homogeneity(const PolyhedralCone& cone, const VolumeEvaluator& u, double p, std::uint64_t seed) {
  auto points = sample(cone, 8, seed, SampleMode::Interior).points;
  for (const auto& y : points) {
    Vec a = to_double(y), b = a;
    for (auto& x : b) x *= 2;
    double ua = u.value(a), ub = u.value(b);
    if (!(ua > 0)) throw ArgumentError("u is not positive on the cone interior");
    double measured = std::log2(ub / ua);
    if (std::abs(measured - p) > 1e-6 * std::max(1.0, p)) {
      std::ostringstream msg;
      msg << "u is not homogeneous of degree p = " << p << ": measured exponent " << measured;
      throw ArgumentError(msg.str());
    }
  }
}

}  // namespace

CycleVolume dual_functional(const PolyhedralCone& cone, const VolumeEvaluator& u, double p, const RatVec& x_star,
                            const OptConfig& config, bool zero_pairing_forces_zero) {
  if (!(p > 1)) throw ArgumentError("dual functional needs p > 1");
  check_homogeneity(cone, u, p, config.seed);
  OptProblem problem;
  problem.cone = cone;
  problem.objective = x_star;
  problem.volume = u;
  problem.exponent = p;
  problem.zero_pairing_forces_zero = zero_pairing_forces_zero;
  CycleVolume out;
  out.opt = min_pairing_on_slice(problem, config);
  const double q = p / (p - 1);
  out.value = out.opt.status == OptStatus::BoundaryZero ? 0.0 : std::pow(out.opt.value, q);
  return out;
}

CycleVolume vol_hat(const NumericalVariety& v, const RatVec& gamma, const OptConfig& config) {
  if (v.dim < 2) throw ArgumentError("vol_hat needs n >= 2");
  if (static_cast<int>(gamma.size()) != v.rank) throw ArgumentError("curve class length does not match Picard rank");
  return dual_functional(v.nef, nef_polynomial_evaluator(v), v.dim, gamma, config, true);
}

Rational geometric_norm(const NumericalVariety& v, const std::vector<RatVec>& ample_basis, const RatVec& eta) {
  if (static_cast<int>(ample_basis.size()) != v.rank || matrix_rank(Matrix<Rational>(ample_basis)) != ample_basis.size())
    throw ArgumentError("ample basis does not span the divisor space");
  Rational total = 0;
  for (std::size_t k = 0; k < ample_basis.size(); ++k) {
    if (!v.nef.contains(ample_basis[k]))
      throw ArgumentError("basis member #" + std::to_string(k) + " is not nef");
    total += abs(dot(ample_basis[k], eta));
  }
  return total;
}

long long mobility_constant(int n) {
  if (n < 1 || n > 10) throw ArgumentError("mobility constant defined here for 1 <= n <= 10");
  long long f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f * (1LL << (4 * n + 1));
}

MobilityBound mobility_upper_bound(const NumericalVariety& v, const RatVec& gamma, const OptConfig& config) {
  MobilityBound out;
  out.constant = mobility_constant(v.dim);
  auto vh = vol_hat(v, gamma, config);
  out.vol_hat = vh.value;
  out.bound = static_cast<double>(out.constant) * vh.value;
  out.opt = std::move(vh.opt);
  return out;
}

std::vector<double> log_grid(double lo, double hi, int steps) {
  if (!(lo > 0) || !(hi >= lo) || steps < 1) throw ArgumentError("log grid needs 0 < lo <= hi and steps >= 1");
  if (steps == 1) return {lo};
  std::vector<double> out;
  const double a = std::log(lo), b = std::log(hi);
  for (int k = 0; k < steps; ++k) out.push_back(std::exp(a + (b - a) * k / (steps - 1)));
  out.back() = hi;
  return out;
}

std::optional<double> fit_loglog_slope(std::vector<SweepPoint> points, std::size_t* used) {
  std::sort(points.begin(), points.end(), [](const auto& x, const auto& y) { return x.eps < y.eps; });
  if (points.size() >= 2) points.resize(points.size() - 2);
  else points.clear();
  std::vector<std::pair<double, double>> xy;
  for (const auto& pt : points)
    if (pt.eps > 0 && pt.value > 0) xy.emplace_back(std::log(pt.eps), std::log(pt.value));
  if (used) *used = xy.size();
  if (xy.size() < 2) return std::nullopt;
  double mx = 0, my = 0;
  for (auto [x, y] : xy) mx += x, my += y;
  mx /= xy.size();
  my /= xy.size();
  double sxy = 0, sxx = 0;
  for (auto [x, y] : xy) sxy += (x - mx) * (y - my), sxx += (x - mx) * (x - mx);
  if (sxx <= 0) return std::nullopt;
  return sxy / sxx;
}

SweepResult boundary_sweep(const NumericalVariety& v, const RatVec& gamma, const RatVec& ample,
                           const std::vector<double>& eps_grid, const OptConfig& config) {
  if (static_cast<int>(gamma.size()) != v.rank || static_cast<int>(ample.size()) != v.rank)
    throw ArgumentError("class length does not match Picard rank");
  const auto& facets = v.mori.facets();
  for (std::size_t k = 0; k < facets.size(); ++k)
    if (dot(facets[k], gamma) < 0)
      throw ArgumentError("curve class violates Mori facet #" + std::to_string(k) + ", it is not in the Mori cone");
  if (v.mori.tight_facets(gamma).empty())
    throw ArgumentError("curve class has no tight Mori facet: it is interior, not on the boundary");
  if (!v.nef.is_interior(ample)) throw ArgumentError("the ample class is not interior to the nef cone");
  const RatVec direction = v.intersection.polar(ample);
  SweepResult out;
  for (double eps : eps_grid) {
    Rational e = to_rational(eps);
    RatVec cls = gamma;
    for (int k = 0; k < v.rank; ++k) cls[k] += e * direction[k];
    auto vh = vol_hat(v, cls, config);
    out.points.push_back({eps, vh.value, vh.opt.status});
  }
  out.slope = fit_loglog_slope(out.points, &out.fitted_points);
  return out;
}

}  // namespace numvol
