#include "numvol/varieties.hpp"

#include <algorithm>
#include <cctype>

#include "numvol/errors.hpp"
#include "numvol/linalg.hpp"

namespace numvol {

std::string to_string(VolumeOracle oracle) {
  switch (oracle) {
    case VolumeOracle::NefOnly: return "nef-only";
    case VolumeOracle::SurfaceZariski: return "surface-zariski";
    case VolumeOracle::ToricPolytope: return "toric-polytope";
  }
  return "unknown";
}

namespace {

std::vector<RatVec> gram_images(const SymmetricForm& form, const std::vector<RatVec>& divisors) {
  std::vector<RatVec> out;
  for (const auto& d : divisors) out.push_back(form.polar(d));
  return out;
}

}  // namespace

NumericalVariety make_variety(const VarietyData& data) {
  NumericalVariety v;
  v.name = data.name;
  v.dim = data.dim;
  v.rank = static_cast<int>(data.basis.size());
  v.basis = data.basis;
  if (v.dim < 1) throw InvariantError(v.name + ": dimension must be at least 1");
  if (v.rank < 1) throw InvariantError(v.name + ": basis is empty");
  v.intersection = SymmetricForm(v.dim, v.rank, data.intersection);
  try {
    v.nef = PolyhedralCone::from_generators(v.rank, data.nef_generators);
  } catch (const ArgumentError& e) {
    throw InvariantError(v.name + ": nef cone: " + e.what());
  }
  try {
    v.psef = PolyhedralCone::from_generators(v.rank, data.psef_generators);
  } catch (const ArgumentError& e) {
    throw InvariantError(v.name + ": psef cone: " + e.what());
  }
  for (std::size_t k = 0; k < data.nef_generators.size(); ++k)
    for (std::size_t j = 0; j < v.psef.facets().size(); ++j)
      if (dot(v.psef.facets()[j], data.nef_generators[k]) < 0)
        throw InvariantError("nef generator #" + std::to_string(k) + " violates psef facet #" + std::to_string(j));
  v.mori = v.nef.dual();
  v.movable = v.psef.dual();
  if (!v.mori.dual().same_as(v.nef) || !v.movable.dual().same_as(v.psef))
    throw InvariantError(v.name + ": double dual does not regenerate the original cone");

  for (std::size_t k = 0; k < v.nef.generators().size(); ++k)
    if (v.intersection.power(v.nef.generators()[k]) < 0)
      throw InvariantError(v.name + ": nef generator #" + std::to_string(k) + " has negative top self-intersection");

  v.negative_curves = data.negative_curves;
  if (!v.negative_curves.empty() && v.dim != 2)
    throw InvariantError(v.name + ": negative_curves are only meaningful on surfaces");
  for (const auto& c : v.negative_curves) {
    if (static_cast<int>(c.coords.size()) != v.rank)
      throw InvariantError(v.name + ": negative curve " + c.label + " has wrong length");
    if (v.intersection.power(c.coords) >= 0)
      throw InvariantError(v.name + ": negative curve " + c.label + " has non-negative self-intersection");
    if (!v.psef.contains(c.coords))
      throw InvariantError(v.name + ": negative curve " + c.label + " is not pseudo-effective");
  }
  if (v.dim == 2) {
    // On a surface N^1 = N_1 through the form; the Mori cone is the image of psef.
    auto image = PolyhedralCone::from_generators(v.rank, gram_images(v.intersection, v.psef.generators()));
    if (!image.same_as(v.mori))
      throw InvariantError(v.name + ": nef cone is not dual to psef under the intersection form");
    for (std::size_t k = 0; k < v.psef.generators().size(); ++k) {
      const auto& g = v.psef.generators()[k];
      if (v.intersection.power(g) >= 0) continue;
      bool listed = std::any_of(v.negative_curves.begin(), v.negative_curves.end(),
                                [&](const NegativeCurve& c) { return primitive(c.coords) == g; });
      if (!listed)
        throw InvariantError(v.name + ": psef generator #" + std::to_string(k) +
                             " has negative square but is not a listed negative curve");
    }
  }
  v.nef_tangent_bundle = data.nef_tangent_bundle;
  v.toric = data.toric;
  if (data.oracle) {
    v.oracle = *data.oracle;
  } else if (v.dim == 2) {
    v.oracle = VolumeOracle::SurfaceZariski;
  } else if (v.toric) {
    v.oracle = VolumeOracle::ToricPolytope;
  } else {
    v.oracle = VolumeOracle::NefOnly;
  }
  if (v.oracle == VolumeOracle::ToricPolytope && !v.toric)
    throw InvariantError(v.name + ": toric-polytope oracle requested without a fan");
  if (v.oracle == VolumeOracle::SurfaceZariski && v.dim != 2)
    throw InvariantError(v.name + ": surface-zariski oracle requires dimension 2");
  return v;
}

Rational pair(const NumericalVariety& v, const ClassVector& alpha, const ClassVector& gamma) {
  if (alpha.space != Space::Divisor || gamma.space != Space::Curve)
    throw ArgumentError("pair expects a divisor class and a curve class");
  if (static_cast<int>(alpha.coords.size()) != v.rank || static_cast<int>(gamma.coords.size()) != v.rank)
    throw ArgumentError("class length does not match Picard rank " + std::to_string(v.rank));
  return dot(alpha.coords, gamma.coords);
}

ClassVector power_curve(const NumericalVariety& v, const RatVec& beta) {
  if (static_cast<int>(beta.size()) != v.rank) throw ArgumentError("class length does not match Picard rank");
  return ClassVector::curve(v.intersection.polar(beta));
}

RatVec parse_coords(const std::string& text, int expected_rank) {
  RatVec out;
  std::size_t start = 0;
  int entry = 0;
  while (true) {
    std::size_t comma = text.find(',', start);
    std::string piece = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    ++entry;
    try {
      out.push_back(parse_rational(piece));
    } catch (const ParseError&) {
      throw ParseError("malformed coordinate '" + piece + "' (entry " + std::to_string(entry) + ", column " +
                       std::to_string(start + 1) + ")");
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (expected_rank > 0 && static_cast<int>(out.size()) != expected_rank)
    throw ArgumentError("expected " + std::to_string(expected_rank) + " coordinates, got " +
                        std::to_string(out.size()));
  return out;
}

}  // namespace numvol
