#pragma once

#include <optional>
#include <string>
#include <vector>

#include "numvol/algebra.hpp"
#include "numvol/linalg.hpp"
#include "numvol/polytope.hpp"
#include "numvol/varieties.hpp"

namespace numvol {

/// A fan given by primitive integer rays and maximal cones (ray index sets).
struct ToricFan {
  int dim = 0;
  std::vector<std::vector<long long>> rays;
  std::vector<std::vector<int>> max_cones;
};

/// Checks primitivity, smoothness of every maximal cone and completeness (wall matching
/// plus the volume of the cube [-1,1]^n split across cones). Throws InvariantError
/// naming the offending ray or cone.
void validate_fan(const ToricFan& fan);

/// Parses the fan text format ([fan] dim / rays / max_cones).
ToricFan parse_fan(const std::string& text);
ToricFan load_fan(const std::string& path);

/// Class-group bookkeeping for a smooth complete fan with a chosen divisor basis.
///
/// Basis divisors are given as ray-coefficient vectors. By default the basis is the rays
/// outside the first maximal cone, which is always a Z-basis of Pic.
class ToricModel {
 public:
  explicit ToricModel(ToricFan fan, std::optional<std::vector<RatVec>> basis_divisors = std::nullopt);

  const ToricFan& fan() const { return fan_; }
  int dim() const { return fan_.dim; }
  int picard_rank() const { return rank_; }
  const std::vector<RatVec>& basis_divisors() const { return basis_; }

  /// Basis coordinates of Σ a_ρ D_ρ.
  RatVec class_of(const RatVec& ray_coefficients) const;
  /// Canonical ray-coefficient representative: among the lifts vanishing on a maximal
  /// cone, the one with fewest negative coefficients, ties broken lexicographically.
  RatVec lift(const RatVec& coords) const;
  /// Plain lift Σ x_i B_i; the polytope only moves by a translation between lifts.
  Vec lift(std::span<const double> coords) const;

  /// Euclidean volume of P_a = {m : <m, v_ρ> >= -a_ρ}.
  PolytopeVolume<Rational> polytope(const RatVec& ray_coefficients) const;
  PolytopeVolume<double> polytope(std::span<const double> ray_coefficients) const;

  /// Torus-invariant curves of the walls, in curve (dual-basis) coordinates.
  const std::vector<RatVec>& wall_curves() const { return walls_; }

 private:
  RatVec reference_class(const RatVec& a) const;
  RatVec principal_shift(const RatVec& a, const std::vector<int>& cone) const;

  ToricFan fan_;
  int rank_ = 0;
  std::vector<int> reference_complement_;
  std::vector<RatVec> basis_;
  Matrix<Rational> basis_inverse_;
  std::vector<RatVec> ray_normals_;
  std::vector<Vec> ray_normals_double_;
  std::vector<Vec> basis_double_;
  std::vector<RatVec> walls_;
};

struct PolytopeVolumeValue {
  Rational volume;
  bool empty = false;
};

/// Euclidean volume of the divisor polytope for ray coefficients `a`.
PolytopeVolumeValue polytope_volume(const ToricFan& fan, const RatVec& a);

/// Builds the numerical profile of the toric variety: psef from ray classes, nef dual to
/// the wall curves, intersection tensor by polarization of polytope volumes.
NumericalVariety toric_variety(const ToricFan& fan, std::optional<std::vector<RatVec>> basis_divisors = std::nullopt,
                               std::vector<std::string> labels = {}, std::string name = "toric");

struct BigVolume {
  Rational value;
  bool outside = false;
};

/// n!·vol(P_α) for a pseudo-effective class; 0 with `outside` set otherwise.
BigVolume vol_big_toric(const NumericalVariety& v, const RatVec& alpha);
double vol_big_toric(const NumericalVariety& v, std::span<const double> alpha);

/// Fans used by the catalog.
ToricFan projective_space_fan(int n);
ToricFan p1_product_fan(int factors);
ToricFan hirzebruch_fan(int a);
/// P(O ⊕ O(-e)) over P^2; the Cutkosky-type threefold for parameter d uses e = d + 1.
ToricFan p2_bundle_fan(int e);

}  // namespace numvol
