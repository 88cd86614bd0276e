#include "numvol/zariski.hpp"

#include <algorithm>
#include <cmath>

#include "numvol/cycle_volume.hpp"
#include "numvol/errors.hpp"
#include "numvol/linalg.hpp"

namespace numvol {

namespace {

void require_surface(const NumericalVariety& v) {
  if (v.dim != 2)
    throw ArgumentError("Zariski decomposition is only available on surfaces (n = 2); " + v.name + " has n = " +
                        std::to_string(v.dim));
}

bool negative_definite(Matrix<Rational> g) {
  for (std::size_t k = 1; k <= g.size(); ++k) {
    Matrix<Rational> lead(k, RatVec(k));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) lead[i][j] = g[i][j];
    Rational det = determinant(lead);
    if ((k % 2 == 1 && det >= 0) || (k % 2 == 0 && det <= 0)) return false;
  }
  return true;
}

}  // namespace

ZariskiResult zariski_decompose(const NumericalVariety& v, const RatVec& gamma) {
  require_surface(v);
  if (static_cast<int>(gamma.size()) != v.rank) throw ArgumentError("class length does not match Picard rank");
  if (!v.psef.contains(gamma)) throw ArgumentError("class is not pseudo-effective on " + v.name);
  const auto& curves = v.negative_curves;
  std::vector<RatVec> curve_duals;
  for (const auto& c : curves) curve_duals.push_back(v.intersection.polar(c.coords));

  std::vector<std::size_t> support;
  RatVec positive = gamma;
  RatVec nu;
  while (true) {
    std::vector<std::size_t> added;
    for (std::size_t i = 0; i < curves.size(); ++i)
      if (std::find(support.begin(), support.end(), i) == support.end() && dot(curve_duals[i], positive) < 0)
        added.push_back(i);
    if (added.empty()) break;
    support.insert(support.end(), added.begin(), added.end());
    std::sort(support.begin(), support.end());
    Matrix<Rational> gram(support.size(), RatVec(support.size()));
    RatVec rhs;
    for (std::size_t a = 0; a < support.size(); ++a) {
      for (std::size_t b = 0; b < support.size(); ++b) gram[a][b] = dot(curve_duals[support[a]], curves[support[b]].coords);
      rhs.push_back(dot(curve_duals[support[a]], gamma));
    }
    if (!negative_definite(gram))
      throw InvariantError("negative curves in the support on " + v.name + " do not have a negative definite Gram matrix");
    nu = *solve(gram, rhs);
    positive = gamma;
    for (std::size_t a = 0; a < support.size(); ++a)
      for (int k = 0; k < v.rank; ++k) positive[k] -= nu[a] * curves[support[a]].coords[k];
  }
  ZariskiResult result;
  result.positive = positive;
  for (std::size_t a = 0; a < support.size(); ++a) {
    if (nu[a] < 0) throw InvariantError("negative coefficient in the negative part on " + v.name);
    if (nu[a] == 0) continue;
    result.support.push_back(support[a]);
    result.negative.emplace_back(curves[support[a]].label, nu[a]);
  }
  if (!v.nef.contains(positive))
    throw InvariantError("positive part is not nef on " + v.name + " (incomplete negative curve list?)");
  return result;
}

ZariskiSolver::ZariskiSolver(const NumericalVariety& v) : variety_(&v) {
  require_surface(v);
  for (const auto& c : v.negative_curves) {
    coords_.push_back(to_double(c.coords));
    duals_.push_back(v.intersection.polar(std::span<const double>(coords_.back())));
  }
}

ZariskiFloat ZariskiSolver::decompose(std::span<const double> gamma) const {
  const auto& v = *variety_;
  ZariskiFloat out;
  double scale = 0;
  for (double x : gamma) scale = std::max(scale, std::abs(x));
  if (!v.psef.contains(gamma, 1e-13 * std::max(scale, 1.0))) {
    out.outside = true;
    return out;
  }
  std::vector<std::size_t> support;
  Vec positive(gamma.begin(), gamma.end());
  const double tol = 1e-12 * std::max(scale, 1e-300);
  for (std::size_t round = 0; round <= coords_.size(); ++round) {
    bool grew = false;
    for (std::size_t i = 0; i < coords_.size(); ++i)
      if (std::find(support.begin(), support.end(), i) == support.end() && dot(duals_[i], positive) < -tol) {
        support.push_back(i);
        grew = true;
      }
    if (!grew) break;
    std::sort(support.begin(), support.end());
    Matrix<double> gram(support.size(), Vec(support.size()));
    Vec rhs;
    for (std::size_t a = 0; a < support.size(); ++a) {
      for (std::size_t b = 0; b < support.size(); ++b) gram[a][b] = dot(duals_[support[a]], coords_[support[b]]);
      rhs.push_back(dot<double>(std::span<const double>(duals_[support[a]]), gamma));
    }
    auto nu = solve(gram, rhs);
    if (!nu) throw InvariantError("singular Gram matrix on " + v.name);
    positive.assign(gamma.begin(), gamma.end());
    for (std::size_t a = 0; a < support.size(); ++a)
      for (int k = 0; k < v.rank; ++k) positive[k] -= (*nu)[a] * coords_[support[a]][k];
  }
  for (auto i : support) out.support_mask |= std::uint64_t{1} << i;
  out.positive = std::move(positive);
  return out;
}

double ZariskiSolver::volume(std::span<const double> gamma) const {
  auto z = decompose(gamma);
  if (z.outside) return 0.0;
  return std::max(0.0, variety_->intersection.power(std::span<const double>(z.positive)));
}

ZariskiFloat zariski_decompose(const NumericalVariety& v, std::span<const double> gamma) {
  return ZariskiSolver(v).decompose(gamma);
}

Rational zariski_volume(const NumericalVariety& v, const RatVec& gamma) {
  if (!v.psef.contains(gamma)) return 0;
  return v.intersection.power(zariski_decompose(v, gamma).positive);
}

double zariski_volume(const NumericalVariety& v, std::span<const double> gamma) {
  return ZariskiSolver(v).volume(gamma);
}

ProjectionReport verify_projection_preserves_volhat(const NumericalVariety& v, const RatVec& gamma,
                                                    const OptConfig& config) {
  auto z = zariski_decompose(v, gamma);
  ProjectionReport report;
  report.vol_hat_gamma = vol_hat(v, v.intersection.polar(gamma), config).value;
  report.vol_hat_positive = vol_hat(v, v.intersection.polar(z.positive), config).value;
  report.positive_square = v.intersection.power(z.positive);
  report.gap_positive = std::abs(report.vol_hat_gamma - report.vol_hat_positive);
  report.gap_square = std::abs(report.vol_hat_gamma - to_double(report.positive_square));
  return report;
}

bool check_trivial_decomposition(const NumericalVariety& v, std::size_t samples, std::uint64_t seed) {
  if (!v.nef_tangent_bundle) throw ArgumentError(v.name + " is not flagged as having a nef tangent bundle");
  require_surface(v);
  std::mt19937_64 rng(seed);
  auto interior = sample(v.psef, samples, rng, SampleMode::Interior);
  auto boundary = sample(v.psef, samples, rng, SampleMode::Boundary);
  for (const auto* set : {&interior, &boundary})
    for (const auto& g : set->points)
      if (!zariski_decompose(v, g).negative.empty()) return false;
  return true;
}

}  // namespace numvol
