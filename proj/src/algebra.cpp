#include "numvol/algebra.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "numvol/errors.hpp"

namespace numvol {

Vec to_double(const RatVec& v) {
  Vec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = to_double(v[i]);
  return out;
}

Rational to_rational(double x) {
  if (!std::isfinite(x)) throw ArgumentError("cannot convert non-finite value to a rational");
  return Rational(x);
}

RatVec to_rational(std::span<const double> v) {
  RatVec out;
  out.reserve(v.size());
  for (double x : v) out.push_back(to_rational(x));
  return out;
}

namespace {

boost::multiprecision::mpz_int parse_integer(const std::string& text, const std::string& whole) {
  if (text.empty()) throw ParseError("malformed number '" + whole + "'");
  for (char c : text)
    if (!std::isdigit(static_cast<unsigned char>(c))) throw ParseError("malformed number '" + whole + "'");
  // a leading zero would select octal in the mpz string constructor
  auto first = text.find_first_not_of('0');
  return boost::multiprecision::mpz_int(first == std::string::npos ? std::string("0") : text.substr(first));
}

}  // namespace

Rational parse_rational(const std::string& raw) {
  std::string text;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) text.push_back(c);
  if (text.empty()) throw ParseError("empty number");
  bool negative = false;
  std::size_t pos = 0;
  if (text[0] == '+' || text[0] == '-') {
    negative = text[0] == '-';
    pos = 1;
  }
  std::string body = text.substr(pos);
  Rational value;
  if (auto slash = body.find('/'); slash != std::string::npos) {
    auto num = parse_integer(body.substr(0, slash), raw);
    auto den = parse_integer(body.substr(slash + 1), raw);
    if (den == 0) throw ParseError("zero denominator in '" + raw + "'");
    value = Rational(num, den);
  } else {
    int exponent = 0;
    if (auto e = body.find_first_of("eE"); e != std::string::npos) {
      std::string exp_text = body.substr(e + 1);
      bool exp_negative = false;
      if (!exp_text.empty() && (exp_text[0] == '+' || exp_text[0] == '-')) {
        exp_negative = exp_text[0] == '-';
        exp_text = exp_text.substr(1);
      }
      exponent = static_cast<int>(parse_integer(exp_text, raw).convert_to<long>());
      if (exp_negative) exponent = -exponent;
      body = body.substr(0, e);
    }
    std::string digits = body;
    if (auto dot_pos = body.find('.'); dot_pos != std::string::npos) {
      std::string frac = body.substr(dot_pos + 1);
      digits = body.substr(0, dot_pos) + frac;
      exponent -= static_cast<int>(frac.size());
      if (digits.empty()) throw ParseError("malformed number '" + raw + "'");
    }
    value = Rational(parse_integer(digits, raw));
    boost::multiprecision::mpz_int scale = 1;
    for (int i = 0; i < std::abs(exponent); ++i) scale *= 10;
    value = exponent >= 0 ? value * Rational(scale) : value / Rational(scale);
  }
  return negative ? Rational(-value) : value;
}

std::string format_rational(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

long long distinct_permutations(const MultiIndex& index) {
  long long result = 1;
  long long position = 0;
  std::map<int, int> counts;
  for (int i : index) {
    ++position;
    int seen = ++counts[i];
    // result = position! / prod(count!) built incrementally; exact at every step.
    result = result * position / seen;
  }
  return result;
}

namespace {

template <class T, class Args>
T evaluate_impl(const std::map<MultiIndex, Rational>& entries, const Args& args, auto&& convert) {
  T total = 0;
  for (const auto& [index, value] : entries) {
    MultiIndex perm = index;
    T inner = 0;
    do {
      T product = 1;
      for (std::size_t k = 0; k < perm.size(); ++k) product *= args[k][perm[k]];
      inner += product;
    } while (std::next_permutation(perm.begin(), perm.end()));
    total += convert(value) * inner;
  }
  return total;
}

}  // namespace

SymmetricForm::SymmetricForm(int degree, int rank, const std::map<MultiIndex, Rational>& entries)
    : degree_(degree), rank_(rank) {
  if (degree < 0 || rank < 1) throw ArgumentError("symmetric form needs degree >= 0 and rank >= 1");
  for (const auto& [key, value] : entries) {
    MultiIndex index = key;
    if (static_cast<int>(index.size()) != degree)
      throw ArgumentError("multi-index length " + std::to_string(index.size()) + " does not match degree " +
                          std::to_string(degree));
    for (int i : index)
      if (i < 0 || i >= rank) throw ArgumentError("multi-index entry " + std::to_string(i) + " out of range");
    std::sort(index.begin(), index.end());
    if (value == 0) continue;
    auto [it, inserted] = entries_.emplace(index, value);
    if (!inserted && it->second != value)
      throw ArgumentError("conflicting values for one symmetric multi-index");
  }
  for (const auto& [index, value] : entries_)
    float_terms_.push_back({index, to_double(value), static_cast<double>(distinct_permutations(index))});
}

Rational SymmetricForm::entry(MultiIndex index) const {
  std::sort(index.begin(), index.end());
  auto it = entries_.find(index);
  return it == entries_.end() ? Rational(0) : it->second;
}

void SymmetricForm::check_vector(std::size_t size) const {
  if (static_cast<int>(size) != rank_)
    throw ArgumentError("vector of length " + std::to_string(size) + " given to a form of rank " +
                        std::to_string(rank_));
}

Rational SymmetricForm::evaluate(std::span<const RatVec> args) const {
  if (static_cast<int>(args.size()) != degree_)
    throw ArgumentError("expected " + std::to_string(degree_) + " arguments, got " + std::to_string(args.size()));
  for (const auto& a : args) check_vector(a.size());
  return evaluate_impl<Rational>(entries_, args, [](const Rational& q) { return q; });
}

double SymmetricForm::evaluate(std::span<const Vec> args) const {
  if (static_cast<int>(args.size()) != degree_)
    throw ArgumentError("expected " + std::to_string(degree_) + " arguments, got " + std::to_string(args.size()));
  for (const auto& a : args) check_vector(a.size());
  return evaluate_impl<double>(entries_, args, [](const Rational& q) { return to_double(q); });
}

Rational SymmetricForm::power(const RatVec& beta) const {
  check_vector(beta.size());
  Rational total = 0;
  for (const auto& [index, value] : entries_) {
    Rational product = value * distinct_permutations(index);
    for (int i : index) product *= beta[i];
    total += product;
  }
  return total;
}

double SymmetricForm::power(std::span<const double> beta) const {
  check_vector(beta.size());
  double total = 0;
  for (const auto& term : float_terms_) {
    double product = term.value * term.multiplicity;
    for (int i : term.index) product *= beta[i];
    total += product;
  }
  return total;
}

namespace {

// Visits each distinct value j in `index` with the multiset index \ {j}.
template <class F>
void for_each_removal(const MultiIndex& index, F&& visit) {
  for (std::size_t pos = 0; pos < index.size(); ++pos) {
    if (pos > 0 && index[pos] == index[pos - 1]) continue;
    MultiIndex rest = index;
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(pos));
    visit(index[pos], rest);
  }
}

}  // namespace

RatVec SymmetricForm::polar(const RatVec& beta) const {
  check_vector(beta.size());
  if (degree_ < 1) throw ArgumentError("polar needs degree >= 1");
  RatVec out(rank_, Rational(0));
  for (const auto& [index, value] : entries_) {
    for_each_removal(index, [&](int j, const MultiIndex& rest) {
      Rational product = value * distinct_permutations(rest);
      for (int i : rest) product *= beta[i];
      out[j] += product;
    });
  }
  return out;
}

Vec SymmetricForm::polar(std::span<const double> beta) const {
  check_vector(beta.size());
  if (degree_ < 1) throw ArgumentError("polar needs degree >= 1");
  Vec out(rank_, 0.0);
  for (const auto& term : float_terms_) {
    for_each_removal(term.index, [&](int j, const MultiIndex& rest) {
      double product = term.value * static_cast<double>(distinct_permutations(rest));
      for (int i : rest) product *= beta[i];
      out[j] += product;
    });
  }
  return out;
}

SymmetricForm SymmetricForm::contract(const RatVec& beta, int k) const {
  check_vector(beta.size());
  if (k < 0 || k > degree_)
    throw ArgumentError("contraction order " + std::to_string(k) + " outside [0, " + std::to_string(degree_) + "]");
  std::map<MultiIndex, Rational> out;
  for (const auto& [index, value] : entries_) {
    MultiIndex perm = index;
    do {
      // Each (ordered head, sorted tail) split of the multiset appears exactly once.
      if (!std::is_sorted(perm.begin() + k, perm.end())) continue;
      Rational product = value;
      for (int p = 0; p < k; ++p) product *= beta[perm[p]];
      out[MultiIndex(perm.begin() + k, perm.end())] += product;
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return SymmetricForm(degree_ - k, rank_, out);
}

Rational eval_form(const SymmetricForm& form, std::span<const RatVec> args) { return form.evaluate(args); }

SymmetricForm power_contract(const SymmetricForm& form, const RatVec& beta, int k) {
  return form.contract(beta, k);
}

}  // namespace numvol

#include "numvol/linalg.hpp"

namespace numvol {

RatVec primitive(const RatVec& v) {
  using boost::multiprecision::mpz_int;
  mpz_int lcm_den = 1;
  for (const auto& q : v) lcm_den = boost::multiprecision::lcm(lcm_den, mpz_int(denominator(q)));
  std::vector<mpz_int> ints;
  mpz_int g = 0;
  for (const auto& q : v) {
    mpz_int x = mpz_int(numerator(q)) * (lcm_den / mpz_int(denominator(q)));
    ints.push_back(x);
    g = boost::multiprecision::gcd(g, x);
  }
  if (g == 0) throw ArgumentError("cannot normalize the zero vector");
  if (g < 0) g = -g;
  RatVec out;
  for (const auto& x : ints) out.emplace_back(x / g);
  return out;
}

}  // namespace numvol
