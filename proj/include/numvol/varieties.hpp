#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "numvol/algebra.hpp"
#include "numvol/cones.hpp"

namespace numvol {

class ToricModel;

enum class Space { Divisor, Curve };

/// A divisor class (coordinates in the variety's divisor basis) or a curve class
/// (coordinates in the dual basis, i.e. the pairings with the basis divisors).
struct ClassVector {
  Space space = Space::Divisor;
  RatVec coords;

  static ClassVector divisor(RatVec c) { return {Space::Divisor, std::move(c)}; }
  static ClassVector curve(RatVec c) { return {Space::Curve, std::move(c)}; }
  friend bool operator==(const ClassVector&, const ClassVector&) = default;
};

enum class VolumeOracle { NefOnly, SurfaceZariski, ToricPolytope };

std::string to_string(VolumeOracle oracle);

/// Irreducible curve of negative self-intersection on a surface, in divisor coordinates.
struct NegativeCurve {
  std::string label;
  RatVec coords;
  friend bool operator==(const NegativeCurve&, const NegativeCurve&) = default;
};

/// Everything the volume functionals need to know about a variety.
///
/// `mori` is dual(nef) and `movable` is dual(psef), both living in curve coordinates.
/// Construct through make_variety, catalog, load_variety or toric_variety; each of
/// those validates the invariants and derives the dual cones.
struct NumericalVariety {
  std::string name;
  int dim = 0;
  int rank = 0;
  std::vector<std::string> basis;
  SymmetricForm intersection;
  PolyhedralCone nef;
  PolyhedralCone psef;
  PolyhedralCone mori;
  PolyhedralCone movable;
  std::vector<NegativeCurve> negative_curves;
  VolumeOracle oracle = VolumeOracle::NefOnly;
  bool nef_tangent_bundle = false;
  std::shared_ptr<const ToricModel> toric;
};

/// Raw description before validation.
struct VarietyData {
  std::string name;
  int dim = 0;
  std::vector<std::string> basis;
  std::map<MultiIndex, Rational> intersection;
  std::vector<RatVec> nef_generators;
  std::vector<RatVec> psef_generators;
  std::vector<NegativeCurve> negative_curves;
  bool nef_tangent_bundle = false;
  std::optional<VolumeOracle> oracle;
  std::shared_ptr<const ToricModel> toric;
};

/// Validates and derives cones. Throws InvariantError naming the violated generator/facet.
NumericalVariety make_variety(const VarietyData& data);

/// Curated exact entries: P<n> (n<=4), P1xP1, P1xP1xP1, Hirzebruch (a in 1..3),
/// BlkP2 (k<=3), Cutkosky (d>=1). Aliases: F<a>, Bl<k>P2, and "Pn" with param n.
NumericalVariety catalog(const std::string& name, const std::map<std::string, int>& params = {});
std::vector<std::string> catalog_names();

/// Reads the line-oriented variety format; errors carry line numbers.
NumericalVariety load_variety(const std::string& path);
NumericalVariety parse_variety(const std::string& text);
std::string serialize_variety(const NumericalVariety& v);

/// <α, γ> for a divisor class and a curve class (dual-basis coordinates).
Rational pair(const NumericalVariety& v, const ClassVector& alpha, const ClassVector& gamma);

/// β^{n-1} as a curve class. For surfaces this is the curve identified with β.
ClassVector power_curve(const NumericalVariety& v, const RatVec& beta);

/// Parses "c1,c2,...", reporting the 1-based column of a malformed entry.
RatVec parse_coords(const std::string& text, int expected_rank);

}  // namespace numvol
