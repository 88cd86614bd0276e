#pragma once

#include <cstdint>
#include <vector>

#include "numvol/algebra.hpp"

namespace numvol {

/// Volume of P = {m : <normal_i, m> >= rhs_i} by vertex enumeration and a recursive
/// pulling triangulation. `facet_mask` has bit i set when inequality i supports a facet
/// of a full-dimensional P; it identifies the combinatorial chamber of P.
template <class T>
struct PolytopeVolume {
  T volume = 0;
  bool empty = false;
  std::uint64_t facet_mask = 0;
  std::size_t vertex_count = 0;
};

PolytopeVolume<Rational> hpolytope_volume(const std::vector<RatVec>& normals, const RatVec& rhs);
/// Float variant for optimizer inner loops; vertices merge within 1e-9 relative.
PolytopeVolume<double> hpolytope_volume(const std::vector<Vec>& normals, const Vec& rhs);

}  // namespace numvol
