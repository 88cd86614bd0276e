#pragma once

#include <optional>
#include <vector>

#include "numvol/optimize.hpp"
#include "numvol/varieties.hpp"

namespace numvol {

struct CycleVolume {
  double value = 0;
  OptResult opt;
};

/// û(x*) = (inf over {y in C : u(y) = 1} of <x*, y>)^q with 1/p + 1/q = 1.
/// Checks p > 1 and u(2y)/u(y) = 2^p on interior samples before optimizing.
CycleVolume dual_functional(const PolyhedralCone& cone, const VolumeEvaluator& u, double p, const RatVec& x_star,
                            const OptConfig& config, bool zero_pairing_forces_zero = false);

/// vol̂(γ): the dual functional of the nef cone with u = vol, p = n.
CycleVolume vol_hat(const NumericalVariety& v, const RatVec& gamma, const OptConfig& config);

/// Σ |<α_i, η>| for a basis α_1..α_ρ of nef classes (their sum is then ample).
Rational geometric_norm(const NumericalVariety& v, const std::vector<RatVec>& ample_basis, const RatVec& eta);

/// n!·2^{4n+1}.
long long mobility_constant(int n);

struct MobilityBound {
  long long constant = 0;
  double vol_hat = 0;
  double bound = 0;
  OptResult opt;
};
MobilityBound mobility_upper_bound(const NumericalVariety& v, const RatVec& gamma, const OptConfig& config);

struct SweepPoint {
  double eps = 0;
  double value = 0;
  OptStatus status = OptStatus::MaxIter;
};

struct SweepResult {
  std::vector<SweepPoint> points;
  /// Least-squares slope of log value against log ε, two largest ε excluded.
  std::optional<double> slope;
  std::size_t fitted_points = 0;
};

/// `steps` log-spaced values from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, int steps);

std::optional<double> fit_loglog_slope(std::vector<SweepPoint> points, std::size_t* used = nullptr);

/// vol̂(γ + ε·A^{n-1}) over the grid for γ on the Mori boundary and A ample.
SweepResult boundary_sweep(const NumericalVariety& v, const RatVec& gamma, const RatVec& ample,
                           const std::vector<double>& eps_grid, const OptConfig& config);

}  // namespace numvol
