#include <algorithm>
#include <cctype>
#include <regex>

#include "numvol/errors.hpp"
#include "numvol/toric.hpp"
#include "numvol/varieties.hpp"

namespace numvol {

namespace {

RatVec r(std::initializer_list<long> xs) {
  RatVec v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

RatVec unit(int rank, int i) {
  RatVec v(rank, Rational(0));
  v[i] = 1;
  return v;
}

int param(const std::map<std::string, int>& params, const std::string& key) {
  auto it = params.find(key);
  if (it == params.end()) throw ArgumentError("catalog entry needs parameter '" + key + "'");
  return it->second;
}

NumericalVariety projective_space(int n) {
  if (n < 1 || n > 4) throw ArgumentError("P<n> is available for 1 <= n <= 4");
  VarietyData d;
  d.name = "P" + std::to_string(n);
  d.dim = n;
  d.basis = {"H"};
  d.intersection[MultiIndex(n, 0)] = 1;
  d.nef_generators = {r({1})};
  d.psef_generators = {r({1})};
  d.nef_tangent_bundle = true;
  if (n != 2) d.toric = std::make_shared<ToricModel>(projective_space_fan(n), std::vector<RatVec>{unit(n + 1, 0)});
  return make_variety(d);
}

NumericalVariety p1_product(int factors) {
  VarietyData d;
  d.name = factors == 2 ? "P1xP1" : "P1xP1xP1";
  d.dim = factors;
  MultiIndex all;
  for (int i = 0; i < factors; ++i) {
    d.basis.push_back("f" + std::to_string(i + 1));
    d.nef_generators.push_back(unit(factors, i));
    all.push_back(i);
  }
  d.psef_generators = d.nef_generators;
  d.intersection[all] = 1;
  d.nef_tangent_bundle = true;
  if (factors == 3) {
    std::vector<RatVec> basis;
    for (int i = 0; i < 3; ++i) basis.push_back(unit(6, 2 * i));
    d.toric = std::make_shared<ToricModel>(p1_product_fan(3), basis);
  }
  return make_variety(d);
}

// F_a in the basis H = C + a·f, E = C where C is the (-a)-section and f a fibre.
NumericalVariety hirzebruch(int a) {
  if (a < 1 || a > 3) throw ArgumentError("Hirzebruch(a) is available for 1 <= a <= 3 (a = 0 is P1xP1)");
  VarietyData d;
  d.name = "F" + std::to_string(a);
  d.dim = 2;
  d.basis = {"H", "E"};
  d.intersection[{0, 0}] = a;
  d.intersection[{1, 1}] = -a;
  d.nef_generators = {r({1, 0}), r({1, -1})};
  d.psef_generators = {r({0, 1}), r({1, -1})};
  d.negative_curves = {{"E", r({0, 1})}};
  return make_variety(d);
}

// Blow-up of P^2 at k <= 3 general points, basis (H, E_1, ..., E_k).
NumericalVariety blown_up_plane(int k) {
  if (k < 0 || k > 3) throw ArgumentError("BlkP2 is available for 0 <= k <= 3");
  if (k == 0) {
    auto v = projective_space(2);
    return v;
  }
  VarietyData d;
  d.name = "Bl" + std::to_string(k) + "P2";
  d.dim = 2;
  const int rank = k + 1;
  d.basis = {"H"};
  d.intersection[{0, 0}] = 1;
  for (int i = 1; i <= k; ++i) {
    d.basis.push_back("E" + std::to_string(i));
    d.intersection[{i, i}] = -1;
    d.negative_curves.push_back({"E" + std::to_string(i), unit(rank, i)});
  }
  for (int i = 1; i <= k; ++i)
    for (int j = i + 1; j <= k; ++j) {
      RatVec line = unit(rank, 0);
      line[i] = -1;
      line[j] = -1;
      d.negative_curves.push_back({"L" + std::to_string(i) + std::to_string(j), line});
    }
  for (const auto& c : d.negative_curves) d.psef_generators.push_back(c.coords);
  d.nef_generators.push_back(unit(rank, 0));
  for (int i = 1; i <= k; ++i) {
    RatVec g = unit(rank, 0);
    g[i] = -1;
    d.nef_generators.push_back(g);
  }
  if (k == 1) {
    d.psef_generators.push_back(r({1, -1}));
  }
  if (k == 3) d.nef_generators.push_back(r({2, -1, -1, -1}));
  return make_variety(d);
}

// P(O(d) ⊕ O(-1)) over P^2 in the basis (π*H, L), L the tautological class.
NumericalVariety cutkosky(int dparam) {
  if (dparam < 1) throw ArgumentError("Cutkosky(d) needs d >= 1");
  const long dd = dparam;
  VarietyData d;
  d.name = "Cutkosky" + std::to_string(dparam);
  d.dim = 3;
  d.basis = {"piH", "L"};
  d.intersection[{0, 0, 0}] = 0;
  d.intersection[{0, 0, 1}] = 1;
  d.intersection[{0, 1, 1}] = dd - 1;
  d.intersection[{1, 1, 1}] = (dd - 1) * (dd - 1) + dd;
  d.nef_generators = {r({1, 0}), r({1, 1})};
  d.psef_generators = {r({1, 0}), r({-dd, 1})};
  // Ray 0 is a pulled-back line; L = D_3 + d·π*H with D_3 the negative section.
  RatVec pi_h = unit(5, 0);
  RatVec tautological = unit(5, 3);
  tautological[0] = dd;
  d.toric = std::make_shared<ToricModel>(p2_bundle_fan(dparam + 1), std::vector<RatVec>{pi_h, tautological});
  return make_variety(d);
}

}  // namespace

std::vector<std::string> catalog_names() {
  return {"P1", "P2", "P3", "P4", "Pn (n=1..4)", "P1xP1", "P1xP1xP1", "Hirzebruch (a=1..3)", "F1", "F2", "F3",
          "BlkP2 (k=0..3)", "Bl0P2", "Bl1P2", "Bl2P2", "Bl3P2", "Cutkosky (d>=1)"};
}

NumericalVariety catalog(const std::string& name, const std::map<std::string, int>& params) {
  std::smatch m;
  if (name == "Pn") return projective_space(param(params, "n"));
  if (std::regex_match(name, m, std::regex("P([0-9])"))) return projective_space(std::stoi(m[1]));
  if (name == "P1xP1") return p1_product(2);
  if (name == "P1xP1xP1") return p1_product(3);
  if (name == "Hirzebruch") return hirzebruch(param(params, "a"));
  if (std::regex_match(name, m, std::regex("F([0-9])"))) return hirzebruch(std::stoi(m[1]));
  if (name == "BlkP2") return blown_up_plane(param(params, "k"));
  if (std::regex_match(name, m, std::regex("Bl([0-9])P2"))) return blown_up_plane(std::stoi(m[1]));
  if (name == "Cutkosky") return cutkosky(param(params, "d"));
  if (std::regex_match(name, m, std::regex("Cutkosky([0-9]+)"))) return cutkosky(std::stoi(m[1]));
  std::string valid;
  for (const auto& n : catalog_names()) valid += (valid.empty() ? "" : ", ") + n;
  throw ArgumentError("unknown catalog entry '" + name + "'; valid entries: " + valid);
}

}  // namespace numvol
