#include "numvol/cones.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <string>

#include "numvol/errors.hpp"
#include "numvol/linalg.hpp"

namespace numvol {

namespace {

using ZeroSet = std::uint64_t;

struct Ray {
  RatVec v;
  ZeroSet zeros;  // constraints (processed so far) that are tight on this ray
};

bool is_subset(ZeroSet a, ZeroSet b) { return (a & ~b) == 0; }

std::string describe(const RatVec& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_rational(v[i]);
  return s + "]";
}

// Extreme rays of {y : <a_i, y> >= 0} for rows a_i spanning Q^rank (Motzkin double description).
std::vector<RatVec> extreme_rays(int rank, const std::vector<RatVec>& rows) {
  const std::size_t m = rows.size();
  std::vector<std::size_t> basis;
  {
    Matrix<Rational> acc;
    for (std::size_t i = 0; i < m && static_cast<int>(basis.size()) < rank; ++i) {
      acc.push_back(rows[i]);
      if (matrix_rank(acc) == acc.size()) {
        basis.push_back(i);
      } else {
        acc.pop_back();
      }
    }
  }
  Matrix<Rational> b;
  for (auto i : basis) b.push_back(rows[i]);
  auto inv = inverse(b);
  std::vector<Ray> rays;
  for (int k = 0; k < rank; ++k) {
    Ray r;
    for (int i = 0; i < rank; ++i) r.v.push_back((*inv)[i][k]);
    r.zeros = 0;
    for (int j = 0; j < rank; ++j)
      if (j != k) r.zeros |= ZeroSet{1} << basis[j];
    rays.push_back(std::move(r));
  }
  std::vector<bool> processed(m, false);
  for (auto i : basis) processed[i] = true;

  for (std::size_t row = 0; row < m; ++row) {
    if (processed[row]) continue;
    processed[row] = true;
    std::vector<Ray> pos, neg, zero;
    std::vector<Rational> pos_val, neg_val;
    for (auto& r : rays) {
      Rational s = dot(rows[row], r.v);
      if (s > 0) {
        pos.push_back(r);
        pos_val.push_back(s);
      } else if (s < 0) {
        neg.push_back(r);
        neg_val.push_back(s);
      } else {
        r.zeros |= ZeroSet{1} << row;
        zero.push_back(r);
      }
    }
    std::vector<Ray> next = pos;
    next.insert(next.end(), zero.begin(), zero.end());
    std::vector<Ray> old = pos;
    old.insert(old.end(), neg.begin(), neg.end());
    old.insert(old.end(), zero.begin(), zero.end());
    for (std::size_t p = 0; p < pos.size(); ++p) {
      for (std::size_t q = 0; q < neg.size(); ++q) {
        ZeroSet common = pos[p].zeros & neg[q].zeros;
        if (std::popcount(common) < rank - 2) continue;
        bool adjacent = true;
        for (const auto& other : old) {
          if (&other == &old[p] || &other == &old[pos.size() + q]) continue;
          if (is_subset(common, other.zeros)) {
            adjacent = false;
            break;
          }
        }
        if (!adjacent) continue;
        Ray r;
        r.v.resize(rank);
        for (int k = 0; k < rank; ++k) r.v[k] = pos_val[p] * neg[q].v[k] - neg_val[q] * pos[p].v[k];
        r.zeros = common | (ZeroSet{1} << row);
        next.push_back(std::move(r));
      }
    }
    rays = std::move(next);
  }
  std::vector<RatVec> out;
  for (auto& r : rays) {
    RatVec p = primitive(r.v);
    if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(std::move(p));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

PolyhedralCone PolyhedralCone::from_generators(int rank, const std::vector<RatVec>& generators) {
  if (rank < 1) throw ArgumentError("cone rank must be positive");
  if (generators.empty()) throw ArgumentError("cone has no generators (empty interior)");
  if (generators.size() > 64) throw ArgumentError("cone has more than 64 generators");
  std::vector<RatVec> gens;
  for (std::size_t i = 0; i < generators.size(); ++i) {
    if (static_cast<int>(generators[i].size()) != rank)
      throw ArgumentError("generator #" + std::to_string(i) + " has length " +
                          std::to_string(generators[i].size()) + ", expected " + std::to_string(rank));
    if (std::all_of(generators[i].begin(), generators[i].end(), [](const Rational& q) { return q == 0; }))
      throw ArgumentError("generator #" + std::to_string(i) + " is the zero vector");
    RatVec p = primitive(generators[i]);
    if (std::find(gens.begin(), gens.end(), p) == gens.end()) gens.push_back(std::move(p));
  }
  if (static_cast<int>(matrix_rank(Matrix<Rational>(gens))) < rank)
    throw ArgumentError("cone check failed: empty interior (generators do not span rank " + std::to_string(rank) +
                        ")");
  auto facets = extreme_rays(rank, gens);
  if (static_cast<int>(matrix_rank(Matrix<Rational>(facets))) < rank)
    throw ArgumentError("cone check failed: not pointed (contains a line)");

  PolyhedralCone cone;
  cone.rank_ = rank;
  cone.facets_ = std::move(facets);
  for (const auto& g : gens) {
    bool extreme = rank == 1;
    if (!extreme) {
      Matrix<Rational> tight;
      for (const auto& f : cone.facets_)
        if (dot(f, g) == 0) tight.push_back(f);
      extreme = static_cast<int>(matrix_rank(tight)) == rank - 1;
    }
    if (extreme) cone.generators_.push_back(g);
  }
  std::sort(cone.generators_.begin(), cone.generators_.end());
  for (std::size_t j = 0; j < cone.facets_.size(); ++j)
    for (std::size_t k = 0; k < cone.generators_.size(); ++k)
      if (dot(cone.facets_[j], cone.generators_[k]) < 0)
        throw InvariantError("double description produced facet " + describe(cone.facets_[j]) +
                             " violated by generator " + describe(cone.generators_[k]));
  return cone;
}

PolyhedralCone PolyhedralCone::dual() const { return from_generators(rank_, facets_); }

PolyhedralCone dual_cone(const PolyhedralCone& cone) { return cone.dual(); }

bool PolyhedralCone::contains(const RatVec& x) const {
  if (static_cast<int>(x.size()) != rank_) throw ArgumentError("membership query of wrong length");
  return std::all_of(facets_.begin(), facets_.end(), [&](const RatVec& f) { return dot(f, x) >= 0; });
}

bool PolyhedralCone::contains(std::span<const double> x, double tol) const {
  if (static_cast<int>(x.size()) != rank_) throw ArgumentError("membership query of wrong length");
  for (const auto& f : facets_) {
    double s = 0;
    for (int i = 0; i < rank_; ++i) s += to_double(f[i]) * x[i];
    if (s < -tol) return false;
  }
  return true;
}

bool PolyhedralCone::is_interior(const RatVec& x) const {
  if (static_cast<int>(x.size()) != rank_) throw ArgumentError("membership query of wrong length");
  return std::all_of(facets_.begin(), facets_.end(), [&](const RatVec& f) { return dot(f, x) > 0; });
}

bool PolyhedralCone::is_interior(std::span<const double> x, double tol) const {
  if (static_cast<int>(x.size()) != rank_) throw ArgumentError("membership query of wrong length");
  double norm = 0;
  for (double v : x) norm += v * v;
  norm = std::sqrt(norm);
  for (const auto& f : facets_) {
    double s = 0;
    for (int i = 0; i < rank_; ++i) s += to_double(f[i]) * x[i];
    if (!(s > tol * norm)) return false;
  }
  return true;
}

std::vector<std::size_t> PolyhedralCone::tight_facets(const RatVec& x) const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < facets_.size(); ++j)
    if (dot(facets_[j], x) == 0) out.push_back(j);
  return out;
}

bool PolyhedralCone::same_as(const PolyhedralCone& other) const {
  return rank_ == other.rank_ && generators_ == other.generators_ && facets_ == other.facets_;
}

std::vector<double> dirichlet_weights(std::size_t count, std::mt19937_64& rng) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> w(count);
  double total = 0;
  for (auto& x : w) {
    x = expo(rng);
    total += x;
  }
  for (auto& x : w) x /= total;
  return w;
}

namespace {

RatVec combine(const std::vector<RatVec>& gens, const std::vector<std::size_t>& which, std::mt19937_64& rng,
               int rank) {
  auto w = dirichlet_weights(which.size(), rng);
  constexpr double grid = 16777216.0;  // 2^24
  std::vector<Rational> weights;
  Rational total = 0;
  for (double x : w) {
    Rational q(std::max<long long>(1, std::llround(x * grid)), static_cast<long long>(grid));
    weights.push_back(q);
    total += q;
  }
  RatVec point(rank, Rational(0));
  for (std::size_t k = 0; k < which.size(); ++k)
    for (int i = 0; i < rank; ++i) point[i] += weights[k] / total * gens[which[k]][i];
  return point;
}

}  // namespace

ConeSample sample(const PolyhedralCone& cone, std::size_t count, std::mt19937_64& rng, SampleMode mode) {
  ConeSample out;
  const auto& gens = cone.generators();
  if (gens.empty()) throw ArgumentError("cannot sample a cone without generators");
  if (mode == SampleMode::Boundary && cone.rank() == 1) {
    out.rays_only = true;
    for (std::size_t i = 0; i < count; ++i) out.points.push_back(gens[i % gens.size()]);
    return out;
  }
  std::vector<std::size_t> all(gens.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  std::uniform_int_distribution<std::size_t> pick(0, cone.facets().size() - 1);
  for (std::size_t s = 0; s < count; ++s) {
    if (mode == SampleMode::Interior) {
      out.points.push_back(combine(gens, all, rng, cone.rank()));
    } else {
      const auto& facet = cone.facets()[pick(rng)];
      std::vector<std::size_t> tight;
      for (std::size_t i = 0; i < gens.size(); ++i)
        if (dot(facet, gens[i]) == 0) tight.push_back(i);
      out.points.push_back(combine(gens, tight, rng, cone.rank()));
    }
  }
  return out;
}

ConeSample sample(const PolyhedralCone& cone, std::size_t count, std::uint64_t seed, SampleMode mode) {
  std::mt19937_64 rng(seed);
  return sample(cone, count, rng, mode);
}

}  // namespace numvol
