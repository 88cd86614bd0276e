#include "numvol/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "numvol/errors.hpp"
#include "numvol/linalg.hpp"

namespace numvol {

namespace {

template <class T>
struct Tolerance;

template <>
struct Tolerance<Rational> {
  explicit Tolerance(const RatVec&) {}
  bool ge(const Rational& a, const Rational& b) const { return a >= b; }
  bool eq(const Rational& a, const Rational& b) const { return a == b; }
};

template <>
struct Tolerance<double> {
  explicit Tolerance(const Vec& rhs) {
    for (double r : rhs) scale = std::max(scale, std::abs(r));
  }
  bool ge(double a, double b) const { return a >= b - 1e-9 * scale; }
  bool eq(double a, double b) const { return std::abs(a - b) <= 1e-9 * scale; }
  double scale = 1.0;
};

template <class T>
std::size_t affine_dimension(const std::vector<std::vector<T>>& pts, const std::vector<std::size_t>& ids) {
  if (ids.size() <= 1) return 0;
  Matrix<T> diffs;
  for (std::size_t k = 1; k < ids.size(); ++k) {
    std::vector<T> d(pts[ids[0]].size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = pts[ids[k]][i] - pts[ids[0]][i];
    diffs.push_back(std::move(d));
  }
  if constexpr (std::is_same_v<T, double>) {
    // Relative pivoting threshold so that scaled-down polytopes keep their dimension.
    double scale = 0;
    for (const auto& row : diffs)
      for (double x : row) scale = std::max(scale, std::abs(x));
    if (scale == 0) return 0;
    for (auto& row : diffs)
      for (double& x : row) x /= scale;
  }
  return matrix_rank(diffs);
}

template <class T>
PolytopeVolume<T> volume_impl(const std::vector<std::vector<T>>& normals, const std::vector<T>& rhs) {
  PolytopeVolume<T> result;
  if (normals.empty()) throw ArgumentError("polytope without inequalities is unbounded");
  const std::size_t n = normals[0].size();
  const std::size_t m = normals.size();
  if (m > 64) throw ArgumentError("polytope volume supports at most 64 inequalities");
  Tolerance<T> tol(rhs);

  // Vertices: every n-subset of inequalities with a unique feasible intersection point.
  std::vector<std::vector<T>> vertices;
  std::vector<std::uint64_t> tight;
  std::vector<std::size_t> subset(n);
  std::function<void(std::size_t, std::size_t)> choose = [&](std::size_t start, std::size_t depth) {
    if (depth == n) {
      Matrix<T> a;
      std::vector<T> b;
      for (auto i : subset) {
        a.push_back(normals[i]);
        b.push_back(rhs[i]);
      }
      auto x = solve(a, b);
      if (!x) return;
      std::uint64_t mask = 0;
      for (std::size_t i = 0; i < m; ++i) {
        T s = dot<T>(std::span<const T>(normals[i]), std::span<const T>(*x));
        if (!tol.ge(s, rhs[i])) return;
        if (tol.eq(s, rhs[i])) mask |= std::uint64_t{1} << i;
      }
      for (std::size_t v = 0; v < vertices.size(); ++v) {
        bool same = true;
        for (std::size_t i = 0; i < n && same; ++i) same = tol.eq(vertices[v][i], (*x)[i]);
        if (same) {
          tight[v] |= mask;
          return;
        }
      }
      vertices.push_back(std::move(*x));
      tight.push_back(mask);
      return;
    }
    for (std::size_t i = start; i < m; ++i) {
      subset[depth] = i;
      choose(i + 1, depth + 1);
    }
  };
  choose(0, 0);
  result.vertex_count = vertices.size();
  if (vertices.empty()) {
    result.empty = true;
    return result;
  }
  std::vector<std::size_t> all(vertices.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  if (affine_dimension(vertices, all) < n) return result;

  // Recursive pulling triangulation: cone the first vertex over the subfaces missing it.
  std::function<void(const std::vector<std::size_t>&, std::size_t, std::vector<std::size_t>&,
                     std::vector<std::vector<std::size_t>>&)>
      triangulate = [&](const std::vector<std::size_t>& face, std::size_t dim, std::vector<std::size_t>& prefix,
                        std::vector<std::vector<std::size_t>>& out) {
        if (dim == 0) {
          prefix.push_back(face[0]);
          out.push_back(prefix);
          prefix.pop_back();
          return;
        }
        const std::size_t apex = face[0];
        prefix.push_back(apex);
        std::vector<std::vector<std::size_t>> seen;
        for (std::size_t i = 0; i < m; ++i) {
          std::vector<std::size_t> sub;
          for (auto v : face)
            if (tight[v] >> i & 1) sub.push_back(v);
          if (sub.size() == face.size() || sub.size() < dim) continue;
          if (std::find(sub.begin(), sub.end(), apex) != sub.end()) continue;
          if (std::find(seen.begin(), seen.end(), sub) != seen.end()) continue;
          if (affine_dimension(vertices, sub) != dim - 1) continue;
          seen.push_back(sub);
          triangulate(sub, dim - 1, prefix, out);
        }
        prefix.pop_back();
      };

  for (std::size_t i = 0; i < m; ++i) {
    std::vector<std::size_t> sub;
    for (auto v : all)
      if (tight[v] >> i & 1) sub.push_back(v);
    if (sub.size() >= n && affine_dimension(vertices, sub) == n - 1) result.facet_mask |= std::uint64_t{1} << i;
  }

  std::vector<std::vector<std::size_t>> simplices;
  std::vector<std::size_t> prefix;
  triangulate(all, n, prefix, simplices);
  T total = 0;
  T factorial = 1;
  for (std::size_t k = 2; k <= n; ++k) factorial *= static_cast<long>(k);
  for (const auto& s : simplices) {
    Matrix<T> edges;
    for (std::size_t k = 1; k < s.size(); ++k) {
      std::vector<T> d(n);
      for (std::size_t i = 0; i < n; ++i) d[i] = vertices[s[k]][i] - vertices[s[0]][i];
      edges.push_back(std::move(d));
    }
    T det = determinant(edges);
    total += det < 0 ? T(-det) : det;
  }
  result.volume = total / factorial;
  return result;
}

}  // namespace

PolytopeVolume<Rational> hpolytope_volume(const std::vector<RatVec>& normals, const RatVec& rhs) {
  return volume_impl<Rational>(normals, rhs);
}

PolytopeVolume<double> hpolytope_volume(const std::vector<Vec>& normals, const Vec& rhs) {
  return volume_impl<double>(normals, rhs);
}

}  // namespace numvol
