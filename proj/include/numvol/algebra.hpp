#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

namespace numvol {

using Rational = boost::multiprecision::mpq_rational;
using RatVec = std::vector<Rational>;
using Vec = std::vector<double>;
using MultiIndex = std::vector<int>;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }
Vec to_double(const RatVec& v);
/// Exact conversion; every finite double is a dyadic rational.
RatVec to_rational(std::span<const double> v);
Rational to_rational(double x);

/// Parses "p/q", "p", or a decimal literal such as "-0.25" exactly.
Rational parse_rational(const std::string& text);
std::string format_rational(const Rational& q);

template <class T>
T dot(std::span<const T> a, std::span<const T> b) {
  T s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}
inline Rational dot(const RatVec& a, const RatVec& b) {
  return dot<Rational>(std::span<const Rational>(a), std::span<const Rational>(b));
}
inline double dot(const Vec& a, const Vec& b) {
  return dot<double>(std::span<const double>(a), std::span<const double>(b));
}

/// Number of distinct orderings of the multiset `index` (n! / prod m_k!).
long long distinct_permutations(const MultiIndex& index);

/// A totally symmetric multilinear form of degree n on a rank-ρ space.
///
/// Only sorted multi-indices are stored; an entry is the value of the form on
/// the corresponding basis vectors, e.g. the intersection number D_i·D_j·D_k.
/// Immutable after construction.
class SymmetricForm {
 public:
  SymmetricForm() = default;
  /// Keys need not be sorted; they are canonicalized. Zero entries are dropped.
  SymmetricForm(int degree, int rank, const std::map<MultiIndex, Rational>& entries);

  int degree() const { return degree_; }
  int rank() const { return rank_; }
  const std::map<MultiIndex, Rational>& entries() const { return entries_; }
  Rational entry(MultiIndex index) const;

  /// Multilinear evaluation on exactly `degree` vectors of length `rank`.
  Rational evaluate(std::span<const RatVec> args) const;
  double evaluate(std::span<const Vec> args) const;

  /// F(β, …, β).
  Rational power(const RatVec& beta) const;
  double power(std::span<const double> beta) const;

  /// F(β, …, β, e_j) for every j: the (n−1)-fold contraction as a linear functional.
  RatVec polar(const RatVec& beta) const;
  Vec polar(std::span<const double> beta) const;

  /// Partial evaluation at k copies of β; the result has degree n − k.
  SymmetricForm contract(const RatVec& beta, int k) const;

  friend bool operator==(const SymmetricForm& a, const SymmetricForm& b) {
    return a.degree_ == b.degree_ && a.rank_ == b.rank_ && a.entries_ == b.entries_;
  }

 private:
  struct Term {
    MultiIndex index;
    double value;
    double multiplicity;
  };
  void check_vector(std::size_t size) const;

  int degree_ = 0;
  int rank_ = 0;
  std::map<MultiIndex, Rational> entries_;
  std::vector<Term> float_terms_;
};

/// Convenience wrappers matching the operation names used by the CLI and tests.
Rational eval_form(const SymmetricForm& form, std::span<const RatVec> args);
SymmetricForm power_contract(const SymmetricForm& form, const RatVec& beta, int k);

}  // namespace numvol
