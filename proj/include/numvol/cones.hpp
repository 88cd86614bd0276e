#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "numvol/algebra.hpp"

namespace numvol {

/// A closed, pointed, full-dimensional polyhedral cone in Q^ρ carrying both descriptions.
///
/// Generators and facet normals are stored as primitive integer vectors. The cone is
/// {x : <f, x> >= 0 for every facet f} = cone(generators). Pairings are plain
/// coordinate dot products; the caller fixes the identification with the dual space.
class PolyhedralCone {
 public:
  PolyhedralCone() = default;

  /// Computes facets by double description and drops redundant generators.
  /// Throws ArgumentError naming the failed check (empty interior, not pointed, ...).
  static PolyhedralCone from_generators(int rank, const std::vector<RatVec>& generators);

  int rank() const { return rank_; }
  const std::vector<RatVec>& generators() const { return generators_; }
  const std::vector<RatVec>& facets() const { return facets_; }

  /// {y : <x, y> >= 0 for all x in C}; generators and facets swap roles.
  PolyhedralCone dual() const;

  bool contains(const RatVec& x) const;
  bool contains(std::span<const double> x, double tol) const;
  /// Strict interiority: every facet pairing exceeds tol·|x| (tol = 0 means > 0).
  bool is_interior(const RatVec& x) const;
  bool is_interior(std::span<const double> x, double tol) const;

  /// Indices of facets with <f, x> = 0.
  std::vector<std::size_t> tight_facets(const RatVec& x) const;

  /// Same ray sets (generators compared as primitive vectors, order-insensitive).
  bool same_as(const PolyhedralCone& other) const;

 private:
  int rank_ = 0;
  std::vector<RatVec> generators_;
  std::vector<RatVec> facets_;
};

PolyhedralCone dual_cone(const PolyhedralCone& cone);

enum class SampleMode { Interior, Boundary };

struct ConeSample {
  std::vector<RatVec> points;
  /// Boundary sampling on a rank-1 cone can only return its generator ray.
  bool rays_only = false;
};

/// Random points of the cone. Interior mode: strictly positive convex combinations of all
/// generators with unit-exponential weights normalized to sum 1. Boundary mode: pick a
/// facet uniformly and combine only the generators tight on it. Weights are rounded to a
/// 2^-24 grid before normalization, so points are exact rationals with small denominators.
ConeSample sample(const PolyhedralCone& cone, std::size_t count, std::mt19937_64& rng, SampleMode mode);
ConeSample sample(const PolyhedralCone& cone, std::size_t count, std::uint64_t seed, SampleMode mode);

/// Unit-exponential weights normalized to the simplex (the sampling and multi-start law).
std::vector<double> dirichlet_weights(std::size_t count, std::mt19937_64& rng);

}  // namespace numvol
