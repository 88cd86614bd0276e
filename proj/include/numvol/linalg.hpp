#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "numvol/algebra.hpp"

namespace numvol {

template <class T>
using Matrix = std::vector<std::vector<T>>;

/// Pivot test used by the elimination routines: exact for rationals, absolute 1e-12 for doubles.
inline bool is_negligible(const Rational& x) { return x == 0; }
inline bool is_negligible(double x) { return std::abs(x) <= 1e-12; }

inline double magnitude(const Rational& x) { return std::abs(to_double(x)); }
inline double magnitude(double x) { return std::abs(x); }

/// Row-reduces `m` in place and returns its rank.
template <class T>
std::size_t row_reduce(Matrix<T>& m) {
  if (m.empty()) return 0;
  const std::size_t rows = m.size(), cols = m[0].size();
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t pivot = rank;
    double best = magnitude(m[rank][c]);
    for (std::size_t r = rank + 1; r < rows; ++r)
      if (magnitude(m[r][c]) > best) best = magnitude(m[r][c]), pivot = r;
    if (is_negligible(m[pivot][c])) continue;
    std::swap(m[pivot], m[rank]);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank || is_negligible(m[r][c])) continue;
      T factor = m[r][c] / m[rank][c];
      for (std::size_t k = c; k < cols; ++k) m[r][k] -= factor * m[rank][k];
    }
    ++rank;
  }
  return rank;
}

template <class T>
std::size_t matrix_rank(Matrix<T> m) {
  return row_reduce(m);
}

/// Solves the square system A x = b; empty when A is singular.
template <class T>
std::optional<std::vector<T>> solve(const Matrix<T>& a, const std::vector<T>& b) {
  const std::size_t n = a.size();
  Matrix<T> aug(n, std::vector<T>(n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug[i][j] = a[i][j];
    aug[i][n] = b[i];
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = c;
    double best = magnitude(aug[c][c]);
    for (std::size_t r = c + 1; r < n; ++r)
      if (magnitude(aug[r][c]) > best) best = magnitude(aug[r][c]), pivot = r;
    if (is_negligible(aug[pivot][c])) return std::nullopt;
    std::swap(aug[pivot], aug[c]);
    for (std::size_t r = c + 1; r < n; ++r) {
      if (is_negligible(aug[r][c])) continue;
      T factor = aug[r][c] / aug[c][c];
      for (std::size_t k = c; k <= n; ++k) aug[r][k] -= factor * aug[c][k];
    }
  }
  std::vector<T> x(n);
  for (std::size_t i = n; i-- > 0;) {
    T s = aug[i][n];
    for (std::size_t j = i + 1; j < n; ++j) s -= aug[i][j] * x[j];
    x[i] = s / aug[i][i];
  }
  return x;
}

template <class T>
T determinant(Matrix<T> a) {
  const std::size_t n = a.size();
  T det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = c;
    double best = magnitude(a[c][c]);
    for (std::size_t r = c + 1; r < n; ++r)
      if (magnitude(a[r][c]) > best) best = magnitude(a[r][c]), pivot = r;
    if (is_negligible(a[pivot][c])) return T(0);
    if (pivot != c) {
      std::swap(a[pivot], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      T factor = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= factor * a[c][k];
    }
  }
  return det;
}

/// Inverse of a square matrix; empty when singular.
template <class T>
std::optional<Matrix<T>> inverse(const Matrix<T>& a) {
  const std::size_t n = a.size();
  Matrix<T> inv(n, std::vector<T>(n));
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<T> e(n, T(0));
    e[j] = 1;
    auto col = solve(a, e);
    if (!col) return std::nullopt;
    for (std::size_t i = 0; i < n; ++i) inv[i][j] = (*col)[i];
  }
  return inv;
}

template <class T>
Matrix<T> transpose(const Matrix<T>& a) {
  if (a.empty()) return {};
  Matrix<T> t(a[0].size(), std::vector<T>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
  return t;
}

template <class T>
std::vector<T> multiply(const Matrix<T>& a, const std::vector<T>& x) {
  std::vector<T> y(a.size(), T(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) y[i] += a[i][j] * x[j];
  return y;
}

/// Scales a nonzero rational vector to the primitive integer vector on the same ray.
RatVec primitive(const RatVec& v);

}  // namespace numvol
