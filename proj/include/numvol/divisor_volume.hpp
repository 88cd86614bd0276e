#pragma once

#include <span>
#include <string>

#include "numvol/optimize.hpp"
#include "numvol/varieties.hpp"

namespace numvol {

struct VolumeValue {
  Rational value;
  /// "tensor", "oracle:surface-zariski", "oracle:toric-polytope" or "outside-psef".
  std::string method;
};

/// Exact volume of a divisor class. Throws NefOnlyError for a big non-nef class on a
/// variety without a big-volume oracle.
VolumeValue vol(const NumericalVariety& v, const RatVec& alpha);
double vol(const NumericalVariety& v, std::span<const double> alpha);

struct InvariantValue {
  double value = 0;
  OptResult opt;
  /// Set when the feasible set was restricted to the nef slice.
  bool upper_bound = false;
  std::string method;
};

/// 𝔐(γ) = (inf over unit-volume psef β of <β,γ>)^{n/(n-1)}.
InvariantValue m_invariant(const NumericalVariety& v, const RatVec& gamma, const OptConfig& config);
/// Same infimum over the nef slice only; an upper bound for 𝔐 that needs no oracle.
InvariantValue m_invariant_nef_slice(const NumericalVariety& v, const RatVec& gamma, const OptConfig& config);

struct DualityValue {
  double value = 0;
  /// vol(α) from `vol`, reported next to the optimizer value.
  double reference = 0;
  std::string reference_method;
  OptStatus status = OptStatus::MaxIter;
  OptResult outer;
};

/// (inf over movable γ of <α,γ> / 𝔐(γ)^{(n-1)/n})^n by nested optimization.
DualityValue vol_via_duality(const NumericalVariety& v, const RatVec& alpha, const OptConfig& config);

}  // namespace numvol
