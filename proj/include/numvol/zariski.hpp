#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "numvol/optimize.hpp"
#include "numvol/varieties.hpp"

namespace numvol {

/// γ = positive + Σ ν_C·C with ν_C > 0 exactly on `support` (indices into negative_curves).
struct ZariskiResult {
  RatVec positive;
  std::vector<std::pair<std::string, Rational>> negative;
  std::vector<std::size_t> support;
};

/// Classical iterative decomposition on a surface: grow the set of curves the current
/// positive part meets negatively and re-solve Gram(S)·ν = (γ·C)_{C∈S} exactly.
/// Throws ArgumentError for n != 2 or γ not pseudo-effective, InvariantError when the
/// support is not negative definite or the positive part is not nef.
ZariskiResult zariski_decompose(const NumericalVariety& v, const RatVec& gamma);

struct ZariskiFloat {
  Vec positive;
  std::uint64_t support_mask = 0;
  bool outside = false;
};
ZariskiFloat zariski_decompose(const NumericalVariety& v, std::span<const double> gamma);

/// Float decomposition with the curve data converted once; used in optimizer loops.
class ZariskiSolver {
 public:
  explicit ZariskiSolver(const NumericalVariety& v);
  ZariskiFloat decompose(std::span<const double> gamma) const;
  double volume(std::span<const double> gamma) const;

 private:
  const NumericalVariety* variety_;
  std::vector<Vec> coords_;
  std::vector<Vec> duals_;
};

/// vol(γ) = Z(γ)^2 for psef γ, 0 otherwise.
Rational zariski_volume(const NumericalVariety& v, const RatVec& gamma);
double zariski_volume(const NumericalVariety& v, std::span<const double> gamma);

struct ProjectionReport {
  double vol_hat_gamma = 0;
  double vol_hat_positive = 0;
  Rational positive_square;
  double gap_positive = 0;  // |vol_hat(γ) − vol_hat(Z(γ))|
  double gap_square = 0;    // |vol_hat(γ) − Z(γ)^2|
};

ProjectionReport verify_projection_preserves_volhat(const NumericalVariety& v, const RatVec& gamma,
                                                    const OptConfig& config);

/// True iff every sampled psef class (interior and boundary) has empty negative part.
/// Requires the curated nef-tangent-bundle flag and n = 2.
bool check_trivial_decomposition(const NumericalVariety& v, std::size_t samples, std::uint64_t seed);

}  // namespace numvol
