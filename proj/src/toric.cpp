#include "numvol/toric.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "numvol/errors.hpp"
#include "numvol/linalg.hpp"
#include "text_format.hpp"

namespace numvol {

namespace {

RatVec ray_vector(const ToricFan& fan, int i) {
  RatVec v;
  for (long long x : fan.rays[i]) v.emplace_back(x);
  return v;
}

Matrix<Rational> cone_matrix(const ToricFan& fan, const std::vector<int>& cone) {
  Matrix<Rational> m;
  for (int i : cone) m.push_back(ray_vector(fan, i));
  return m;
}

std::string cone_name(std::size_t k, const std::vector<int>& cone) {
  std::string s = "cone #" + std::to_string(k) + " {";
  for (std::size_t i = 0; i < cone.size(); ++i) s += (i ? "," : "") + std::to_string(cone[i]);
  return s + "}";
}

}  // namespace

void validate_fan(const ToricFan& fan) {
  const int n = fan.dim;
  if (n < 1) throw InvariantError("fan dimension must be positive");
  if (static_cast<int>(fan.rays.size()) <= n) throw InvariantError("fan needs more rays than its dimension");
  for (std::size_t i = 0; i < fan.rays.size(); ++i) {
    if (static_cast<int>(fan.rays[i].size()) != n)
      throw InvariantError("ray #" + std::to_string(i) + " has wrong length");
    long long g = 0;
    for (long long x : fan.rays[i]) g = std::gcd(g, x);
    if (g != 1) throw InvariantError("ray #" + std::to_string(i) + " is not primitive");
  }
  std::map<std::vector<int>, std::vector<std::pair<std::size_t, int>>> walls;
  for (std::size_t k = 0; k < fan.max_cones.size(); ++k) {
    auto cone = fan.max_cones[k];
    std::sort(cone.begin(), cone.end());
    if (static_cast<int>(cone.size()) != n || std::adjacent_find(cone.begin(), cone.end()) != cone.end())
      throw InvariantError(cone_name(k, fan.max_cones[k]) + " does not have " + std::to_string(n) + " distinct rays");
    for (int i : cone)
      if (i < 0 || i >= static_cast<int>(fan.rays.size()))
        throw InvariantError(cone_name(k, fan.max_cones[k]) + " references a missing ray");
    Rational det = determinant(cone_matrix(fan, cone));
    if (det != 1 && det != -1) throw InvariantError(cone_name(k, fan.max_cones[k]) + " is not smooth");
    for (int drop = 0; drop < n; ++drop) {
      std::vector<int> wall;
      for (int j = 0; j < n; ++j)
        if (j != drop) wall.push_back(cone[j]);
      walls[wall].push_back({k, cone[drop]});
    }
  }
  for (const auto& [wall, owners] : walls) {
    if (owners.size() != 2)
      throw InvariantError(cone_name(owners[0].first, fan.max_cones[owners[0].first]) +
                           " has a wall shared by " + std::to_string(owners.size()) + " cones (fan not complete)");
    // The two opposite rays must lie on opposite sides of the wall hyperplane.
    Matrix<Rational> a = cone_matrix(fan, wall);
    a.push_back(ray_vector(fan, owners[0].second));
    Rational s0 = determinant(a);
    a.back() = ray_vector(fan, owners[1].second);
    Rational s1 = determinant(a);
    if (s0 * s1 >= 0)
      throw InvariantError(cone_name(owners[1].first, fan.max_cones[owners[1].first]) + " overlaps " +
                           cone_name(owners[0].first, fan.max_cones[owners[0].first]));
  }
  // Probe polytope: the cones must split [-1,1]^n into pieces of total volume 2^n.
  Rational total = 0;
  for (std::size_t k = 0; k < fan.max_cones.size(); ++k) {
    auto dual = inverse(cone_matrix(fan, fan.max_cones[k]));
    std::vector<RatVec> normals;
    RatVec rhs;
    for (int i = 0; i < n; ++i) {
      RatVec e(n, Rational(0));
      e[i] = 1;
      normals.push_back(e);
      rhs.emplace_back(-1);
      e[i] = -1;
      normals.push_back(e);
      rhs.emplace_back(-1);
      RatVec u(n);
      for (int j = 0; j < n; ++j) u[j] = (*dual)[j][i];
      normals.push_back(u);
      rhs.emplace_back(0);
    }
    total += hpolytope_volume(normals, rhs).volume;
  }
  if (total != Rational(1 << n))
    throw InvariantError("fan does not cover R^" + std::to_string(n) + " (probe volume " + format_rational(total) +
                         " instead of " + std::to_string(1 << n) + ")");
}

ToricFan parse_fan(const std::string& text) {
  auto sections = text::parse_sections(text);
  if (sections.empty()) throw ParseError("fan file is empty");
  ToricFan fan;
  bool has_dim = false, has_rays = false, has_cones = false;
  for (const auto& section : sections) {
    if (section.name != "fan") throw ParseError("unknown section [" + section.name + "]", section.line);
    for (const auto& e : section.entries) {
      if (e.key == "dim") {
        fan.dim = static_cast<int>(parse_rational(e.value).convert_to<double>());
        has_dim = true;
      } else if (e.key == "rays") {
        for (const auto& r : text::parse_nested_list(e.value, e.line)) {
          std::vector<long long> ray;
          for (const auto& q : r) {
            if (denominator(q) != 1) throw ParseError("ray coordinates must be integers", e.line);
            ray.push_back(numerator(q).convert_to<long long>());
          }
          fan.rays.push_back(std::move(ray));
        }
        has_rays = true;
      } else if (e.key == "max_cones") {
        for (const auto& c : text::parse_nested_list(e.value, e.line)) {
          std::vector<int> cone;
          for (const auto& q : c) cone.push_back(numerator(q).convert_to<int>());
          fan.max_cones.push_back(std::move(cone));
        }
        has_cones = true;
      } else {
        throw ParseError("unknown key '" + e.key + "' in [fan]", e.line);
      }
    }
  }
  if (!has_dim || !has_rays || !has_cones) throw ParseError("[fan] needs dim, rays and max_cones");
  validate_fan(fan);
  return fan;
}

ToricFan load_fan(const std::string& path) { return parse_fan(text::read_file(path)); }

ToricModel::ToricModel(ToricFan fan, std::optional<std::vector<RatVec>> basis_divisors) : fan_(std::move(fan)) {
  validate_fan(fan_);
  const int rays = static_cast<int>(fan_.rays.size());
  rank_ = rays - fan_.dim;
  for (int i = 0; i < rays; ++i) ray_normals_.push_back(ray_vector(fan_, i));
  for (const auto& r : ray_normals_) ray_normals_double_.push_back(to_double(r));
  const auto& ref = fan_.max_cones[0];
  for (int i = 0; i < rays; ++i)
    if (std::find(ref.begin(), ref.end(), i) == ref.end()) reference_complement_.push_back(i);

  if (basis_divisors) {
    basis_ = *basis_divisors;
  } else {
    for (int i : reference_complement_) {
      RatVec e(rays, Rational(0));
      e[i] = 1;
      basis_.push_back(e);
    }
  }
  if (static_cast<int>(basis_.size()) != rank_)
    throw ArgumentError("toric basis needs " + std::to_string(rank_) + " divisors");
  Matrix<Rational> k(rank_, RatVec(rank_));
  for (int j = 0; j < rank_; ++j) {
    if (static_cast<int>(basis_[j].size()) != rays) throw ArgumentError("basis divisor has wrong length");
    auto c = reference_class(basis_[j]);
    for (int i = 0; i < rank_; ++i) k[i][j] = c[i];
  }
  auto inv = inverse(k);
  if (!inv) throw ArgumentError("toric basis divisors are linearly dependent in Pic");
  basis_inverse_ = *inv;
  for (const auto& b : basis_) basis_double_.push_back(to_double(b));

  // Wall curves: v_a + v_b = Σ_{τ} c_j v_j gives D_a·C = D_b·C = 1 and D_j·C = -c_j.
  std::map<std::vector<int>, std::vector<std::pair<std::size_t, int>>> walls;
  for (std::size_t k2 = 0; k2 < fan_.max_cones.size(); ++k2) {
    auto cone = fan_.max_cones[k2];
    std::sort(cone.begin(), cone.end());
    for (int drop = 0; drop < fan_.dim; ++drop) {
      std::vector<int> wall;
      for (int j = 0; j < fan_.dim; ++j)
        if (j != drop) wall.push_back(cone[j]);
      walls[wall].push_back({k2, cone[drop]});
    }
  }
  for (const auto& [wall, owners] : walls) {
    int a = owners[0].second, b = owners[1].second;
    std::vector<int> sigma = wall;
    sigma.push_back(a);
    auto coeffs = solve(transpose(cone_matrix(fan_, sigma)), ray_normals_[b]);
    if (!coeffs || coeffs->back() != -1) throw InvariantError("wall between rays " + std::to_string(a) + " and " +
                                                              std::to_string(b) + " is not smooth");
    RatVec intersections(rays, Rational(0));
    intersections[a] = 1;
    intersections[b] = 1;
    for (std::size_t j = 0; j < wall.size(); ++j) intersections[wall[j]] = -(*coeffs)[j];
    RatVec curve(rank_, Rational(0));
    for (int i = 0; i < rank_; ++i) curve[i] = dot(basis_[i], intersections);
    walls_.push_back(std::move(curve));
  }
}

RatVec ToricModel::principal_shift(const RatVec& a, const std::vector<int>& cone) const {
  // m with <m, v_j> = -a_j on the cone; returns a + div(m).
  Matrix<Rational> m = cone_matrix(fan_, cone);
  RatVec rhs;
  for (int j : cone) rhs.push_back(-a[j]);
  auto sol = solve(m, rhs);
  RatVec out = a;
  for (std::size_t r = 0; r < out.size(); ++r) out[r] += dot(*sol, ray_normals_[r]);
  return out;
}

RatVec ToricModel::reference_class(const RatVec& a) const {
  RatVec shifted = principal_shift(a, fan_.max_cones[0]);
  RatVec out;
  for (int i : reference_complement_) out.push_back(shifted[i]);
  return out;
}

RatVec ToricModel::class_of(const RatVec& a) const {
  if (static_cast<int>(a.size()) != static_cast<int>(fan_.rays.size()))
    throw ArgumentError("ray coefficient vector has wrong length");
  return multiply(basis_inverse_, reference_class(a));
}

RatVec ToricModel::lift(const RatVec& coords) const {
  if (static_cast<int>(coords.size()) != rank_) throw ArgumentError("class has wrong length for this fan");
  RatVec a(fan_.rays.size(), Rational(0));
  for (int i = 0; i < rank_; ++i)
    for (std::size_t r = 0; r < a.size(); ++r) a[r] += coords[i] * basis_[i][r];
  std::optional<RatVec> best;
  long best_neg = 0;
  for (const auto& cone : fan_.max_cones) {
    RatVec cand = principal_shift(a, cone);
    long neg = std::count_if(cand.begin(), cand.end(), [](const Rational& q) { return q < 0; });
    if (!best || neg < best_neg || (neg == best_neg && cand < *best)) {
      best = cand;
      best_neg = neg;
    }
  }
  return *best;
}

Vec ToricModel::lift(std::span<const double> coords) const {
  Vec a(fan_.rays.size(), 0.0);
  for (int i = 0; i < rank_; ++i)
    for (std::size_t r = 0; r < a.size(); ++r) a[r] += coords[i] * basis_double_[i][r];
  return a;
}

PolytopeVolume<Rational> ToricModel::polytope(const RatVec& a) const {
  RatVec rhs;
  for (const auto& x : a) rhs.push_back(-x);
  return hpolytope_volume(ray_normals_, rhs);
}

PolytopeVolume<double> ToricModel::polytope(std::span<const double> a) const {
  Vec rhs;
  for (double x : a) rhs.push_back(-x);
  return hpolytope_volume(ray_normals_double_, rhs);
}

PolytopeVolumeValue polytope_volume(const ToricFan& fan, const RatVec& a) {
  if (a.size() != fan.rays.size()) throw ArgumentError("one coefficient per ray expected");
  std::vector<RatVec> normals;
  RatVec rhs;
  for (std::size_t i = 0; i < fan.rays.size(); ++i) {
    RatVec v;
    for (long long x : fan.rays[i]) v.emplace_back(x);
    normals.push_back(v);
    rhs.push_back(-a[i]);
  }
  auto r = hpolytope_volume(normals, rhs);
  return {r.volume, r.empty};
}

namespace {

Rational factorial(int n) {
  Rational f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

}  // namespace

NumericalVariety toric_variety(const ToricFan& fan, std::optional<std::vector<RatVec>> basis_divisors,
                               std::vector<std::string> labels, std::string name) {
  auto model = std::make_shared<ToricModel>(fan, std::move(basis_divisors));
  const int n = fan.dim;
  const int rho = model->picard_rank();
  if (rho > 6) throw ArgumentError("toric Picard rank " + std::to_string(rho) + " exceeds 6");

  VarietyData data;
  data.name = std::move(name);
  data.dim = n;
  if (labels.empty()) {
    if (basis_divisors) {
      for (int i = 0; i < rho; ++i) labels.push_back("B" + std::to_string(i));
    } else {
      const auto& ref = fan.max_cones[0];
      for (int i = 0; i < static_cast<int>(fan.rays.size()); ++i)
        if (std::find(ref.begin(), ref.end(), i) == ref.end()) labels.push_back("D" + std::to_string(i));
    }
  }
  data.basis = labels;
  for (std::size_t r = 0; r < fan.rays.size(); ++r) {
    RatVec e(fan.rays.size(), Rational(0));
    e[r] = 1;
    data.psef_generators.push_back(model->class_of(e));
  }
  auto mori = PolyhedralCone::from_generators(rho, model->wall_curves());
  auto nef = mori.dual();
  data.nef_generators = nef.generators();

  // Polarization over independent nef classes N_i, then a change of basis.
  std::vector<RatVec> spanning;
  for (const auto& g : nef.generators()) {
    spanning.push_back(g);
    if (matrix_rank(Matrix<Rational>(spanning)) < spanning.size()) spanning.pop_back();
  }
  if (static_cast<int>(spanning.size()) != rho) throw InvariantError("nef cone is not full-dimensional (fan not projective)");
  std::map<MultiIndex, Rational> volume_cache;
  auto volume_of = [&](MultiIndex multiset) {
    std::sort(multiset.begin(), multiset.end());
    auto it = volume_cache.find(multiset);
    if (it != volume_cache.end()) return it->second;
    RatVec sum(rho, Rational(0));
    for (int i : multiset)
      for (int k = 0; k < rho; ++k) sum[k] += spanning[i][k];
    Rational v = model->polytope(model->lift(sum)).volume;
    volume_cache.emplace(multiset, v);
    return v;
  };
  std::map<MultiIndex, Rational> in_nef_basis;
  MultiIndex idx(n, 0);
  std::function<void(int, int)> enumerate = [&](int pos, int start) {
    if (pos == n) {
      Rational value = 0;
      for (unsigned mask = 1; mask < (1u << n); ++mask) {
        MultiIndex subset;
        for (int t = 0; t < n; ++t)
          if (mask >> t & 1) subset.push_back(idx[t]);
        Rational v = volume_of(subset);
        value += ((n - static_cast<int>(subset.size())) % 2 == 0) ? v : Rational(-v);
      }
      in_nef_basis[idx] = value;
      return;
    }
    for (int i = start; i < rho; ++i) {
      idx[pos] = i;
      enumerate(pos + 1, i);
    }
  };
  enumerate(0, 0);
  SymmetricForm nef_form(n, rho, in_nef_basis);
  Matrix<Rational> columns(rho, RatVec(rho));
  for (int i = 0; i < rho; ++i)
    for (int r = 0; r < rho; ++r) columns[r][i] = spanning[i][r];
  auto w = *inverse(columns);
  std::map<MultiIndex, Rational> tensor;
  std::function<void(int, int)> enumerate_basis = [&](int pos, int start) {
    if (pos == n) {
      std::vector<RatVec> args;
      for (int j : idx) {
        RatVec col(rho);
        for (int i = 0; i < rho; ++i) col[i] = w[i][j];
        args.push_back(col);
      }
      tensor[idx] = nef_form.evaluate(args);
      return;
    }
    for (int i = start; i < rho; ++i) {
      idx[pos] = i;
      enumerate_basis(pos + 1, i);
    }
  };
  enumerate_basis(0, 0);
  data.intersection = tensor;

  if (n == 2) {
    SymmetricForm form(2, rho, tensor);
    for (std::size_t r = 0; r < fan.rays.size(); ++r) {
      RatVec c = data.psef_generators[r];
      if (form.power(c) < 0) data.negative_curves.push_back({"D" + std::to_string(r), c});
    }
  }
  data.oracle = VolumeOracle::ToricPolytope;
  data.toric = model;
  return make_variety(data);
}

BigVolume vol_big_toric(const NumericalVariety& v, const RatVec& alpha) {
  if (!v.toric) throw ArgumentError(v.name + " carries no fan");
  if (!v.psef.contains(alpha)) return {Rational(0), true};
  auto p = v.toric->polytope(v.toric->lift(alpha));
  return {p.volume * factorial(v.dim), false};
}

double vol_big_toric(const NumericalVariety& v, std::span<const double> alpha) {
  if (!v.toric) throw ArgumentError(v.name + " carries no fan");
  if (!v.psef.contains(alpha, 1e-13)) return 0.0;
  double f = 1;
  for (int k = 2; k <= v.dim; ++k) f *= k;
  return v.toric->polytope(v.toric->lift(alpha)).volume * f;
}

ToricFan projective_space_fan(int n) {
  ToricFan fan;
  fan.dim = n;
  for (int i = 0; i < n; ++i) {
    std::vector<long long> e(n, 0);
    e[i] = 1;
    fan.rays.push_back(e);
  }
  fan.rays.push_back(std::vector<long long>(n, -1));
  for (int skip = 0; skip <= n; ++skip) {
    std::vector<int> cone;
    for (int i = 0; i <= n; ++i)
      if (i != skip) cone.push_back(i);
    fan.max_cones.push_back(cone);
  }
  return fan;
}

ToricFan p1_product_fan(int factors) {
  ToricFan fan;
  fan.dim = factors;
  for (int i = 0; i < factors; ++i) {
    std::vector<long long> e(factors, 0);
    e[i] = 1;
    fan.rays.push_back(e);
    e[i] = -1;
    fan.rays.push_back(e);
  }
  for (int mask = 0; mask < (1 << factors); ++mask) {
    std::vector<int> cone;
    for (int i = 0; i < factors; ++i) cone.push_back(2 * i + (mask >> i & 1));
    fan.max_cones.push_back(cone);
  }
  return fan;
}

ToricFan hirzebruch_fan(int a) {
  ToricFan fan;
  fan.dim = 2;
  fan.rays = {{1, 0}, {0, 1}, {-1, a}, {0, -1}};
  fan.max_cones = {{0, 1}, {1, 2}, {2, 3}, {3, 0}};
  return fan;
}

ToricFan p2_bundle_fan(int e) {
  ToricFan fan;
  fan.dim = 3;
  fan.rays = {{1, 0, 0}, {0, 1, 0}, {-1, -1, e}, {0, 0, 1}, {0, 0, -1}};
  for (int top : {3, 4}) {
    fan.max_cones.push_back({0, 1, top});
    fan.max_cones.push_back({1, 2, top});
    fan.max_cones.push_back({0, 2, top});
  }
  return fan;
}

}  // namespace numvol
