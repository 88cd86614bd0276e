#include "numvol/verify.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <random>

#include "numvol/cycle_volume.hpp"
#include "numvol/divisor_volume.hpp"
#include "numvol/errors.hpp"
#include "numvol/toric.hpp"
#include "numvol/zariski.hpp"

namespace numvol {

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

std::vector<std::string> suite_names() { return {"duality", "properties", "zariski", "example31", "all"}; }

namespace {

class Recorder {
 public:
  Recorder(VerifyReport& report, std::string suite, std::string variety)
      : report_(report), suite_(std::move(suite)), variety_(std::move(variety)) {}

  void at_most(const std::string& name, double measured, double bound) {
    add(name, measured, bound, "<=", measured <= bound);
  }
  void at_least(const std::string& name, double measured, double bound) {
    add(name, measured, bound, ">=", measured >= bound);
  }
  void exact(const std::string& name, std::size_t mismatches) {
    add(name, static_cast<double>(mismatches), 0, "==", mismatches == 0);
  }

 private:
  void add(const std::string& name, double measured, double bound, const char* relation, bool pass) {
    report_.checks.push_back({suite_, variety_, name, measured, bound, relation, pass && !std::isnan(measured)});
  }
  VerifyReport& report_;
  std::string suite_;
  std::string variety_;
};

std::size_t scaled(double scale, std::size_t n) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(static_cast<double>(n) * scale)));
}

RatVec unit(std::size_t size, std::size_t k) {
  RatVec e(size, 0);
  e[k] = 1;
  return e;
}

Rational random_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(0, 20), den(1, 12);
  return Rational(num(rng), den(rng));
}

double relative(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

RatVec add(const RatVec& a, const RatVec& b) {
  RatVec out = a;
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += b[i];
  return out;
}

NumericalVariety f1_fan() {
  return toric_variety(hirzebruch_fan(1), std::vector<RatVec>{unit(4, 3), unit(4, 1)}, {"H", "E"}, "F1-fan");
}

/// Toric model with the same divisor basis as a catalog entry, when one exists.
std::optional<NumericalVariety> toric_counterpart(const NumericalVariety& v) {
  const std::string& n = v.name;
  if (n.size() == 2 && n[0] == 'P' && std::isdigit(static_cast<unsigned char>(n[1]))) {
    int dim = n[1] - '0';
    return toric_variety(projective_space_fan(dim), std::vector<RatVec>{unit(dim + 1, 0)}, v.basis, n + "-fan");
  }
  if (n == "P1xP1") return toric_variety(p1_product_fan(2), std::vector<RatVec>{unit(4, 0), unit(4, 2)}, v.basis, n + "-fan");
  if (n == "P1xP1xP1")
    return toric_variety(p1_product_fan(3), std::vector<RatVec>{unit(6, 0), unit(6, 2), unit(6, 4)}, v.basis,
                         n + "-fan");
  if (n.size() == 2 && n[0] == 'F') {
    int a = n[1] - '0';
    return toric_variety(hirzebruch_fan(a), std::vector<RatVec>{unit(4, 3), unit(4, 1)}, v.basis, n + "-fan");
  }
  if (n.rfind("Cutkosky", 0) == 0) {
    int d = std::stoi(n.substr(8));
    RatVec taut = unit(5, 3);
    taut[0] = d;
    return toric_variety(p2_bundle_fan(d + 1), std::vector<RatVec>{unit(5, 0), taut}, v.basis, n + "-fan");
  }
  return std::nullopt;
}

void toric_checks(Recorder& rec, const NumericalVariety& v, std::uint64_t seed) {
  auto t = toric_counterpart(v);
  if (!t) return;
  rec.exact("toric_tensor_matches", t->intersection == v.intersection ? 0 : 1);
  std::size_t cone_mismatch = (t->nef.same_as(v.nef) ? 0 : 1) + (t->psef.same_as(v.psef) ? 0 : 1);
  rec.exact("toric_cones_match", cone_mismatch);
  std::size_t bad = 0;
  std::mt19937_64 rng(seed);
  for (auto mode : {SampleMode::Interior, SampleMode::Boundary})
    for (const auto& a : sample(v.nef, 10, rng, mode).points)
      if (vol_big_toric(*t, a).value != v.intersection.power(a)) ++bad;
  rec.exact("toric_polytope_volume_equals_tensor", bad);
}

void example31(VerifyReport& report, const VerifyOptions& options) {
  std::mt19937_64 rng(options.config.seed);
  for (int d : {1, 2, 3, 4, 5}) {
    auto v = catalog("Cutkosky", {{"d", d}});
    Recorder rec(report, "example31", v.name);
    if (d != 4) {
      const auto& f = v.intersection;
      std::size_t bad = 0;
      bad += f.entry({0, 0, 0}) != 0;
      bad += f.entry({0, 0, 1}) != 1;
      bad += f.entry({0, 1, 1}) != d - 1;
      bad += f.entry({1, 1, 1}) != (d - 1) * (d - 1) + d;
      rec.exact("intersection_numbers", bad);

      std::size_t vol_bad = 0, pair_bad = 0, nef_bad = 0;
      const RatVec e0 = unit(2, 0), e1 = unit(2, 1);
      const RatVec hh = f.polar(e0);
      RatVec hl(2);
      for (int j = 0; j < 2; ++j) {
        std::vector<RatVec> args{e0, e1, unit(2, j)};
        hl[j] = f.evaluate(args);
      }
      for (int trial = 0; trial < 25; ++trial) {
        Rational a = random_rational(rng), b = random_rational(rng), x = random_rational(rng),
                 y = random_rational(rng);
        RatVec alpha{a + b, b};
        Rational expected = b * b * b * ((d - 1) * (d - 1) + d) + 3 * b * b * (a + b) * (d - 1) + 3 * (a + b) * (a + b) * b;
        std::vector<RatVec> args(3, alpha);
        if (f.evaluate(args) != expected) ++vol_bad;
        if (!v.nef.contains(alpha)) ++nef_bad;
        RatVec gamma{x * hh[0] + y * hl[0], x * hh[1] + y * hl[1]};
        if (dot(alpha, gamma) != (a + b) * y + b * x + b * y * (d - 1)) ++pair_bad;
      }
      rec.exact("volume_identity_25", vol_bad);
      rec.exact("pairing_identity_25", pair_bad);
      rec.exact("nef_parameter_region", nef_bad);
    }
    toric_checks(rec, v, options.config.seed + d);
  }
}

void properties(VerifyReport& report, const NumericalVariety& v, const VerifyOptions& options) {
  Recorder rec(report, "properties", v.name);
  const auto& cfg = options.config;
  const double n = v.dim;
  const double s = options.sample_scale;
  std::mt19937_64 rng(cfg.seed);
  auto R = [&](const RatVec& g) { return vol_hat(v, g, cfg); };

  double worst = 0;
  for (const auto& a : sample(v.nef, scaled(s, 20), rng, SampleMode::Interior).points) {
    double reference = to_double(v.intersection.power(a));
    worst = std::max(worst, relative(R(v.intersection.polar(a)).value, reference));
  }
  rec.at_most("volhat_of_nef_power_rel_gap", worst, 1e-4);

  auto interior = sample(v.mori, scaled(s, 100), rng, SampleMode::Interior).points;
  worst = 0;
  std::uniform_int_distribution<int> lam(2, 12);
  for (std::size_t i = 0; i < std::min<std::size_t>(interior.size(), 10); ++i) {
    Rational l(lam(rng), 4);
    RatVec scaled_class = interior[i];
    for (auto& c : scaled_class) c *= l;
    double expected = std::pow(to_double(l), n / (n - 1)) * R(interior[i]).value;
    worst = std::max(worst, relative(R(scaled_class).value, expected));
  }
  rec.at_most("volhat_homogeneity_rel_gap", worst, 1e-6);

  std::size_t nonpositive = 0;
  for (const auto& g : interior)
    if (!(R(g).value > 0)) ++nonpositive;
  rec.exact("volhat_positive_on_interior", nonpositive);

  auto boundary = sample(v.mori, scaled(s, 100), rng, SampleMode::Boundary);
  std::size_t nonzero = 0;
  if (boundary.rays_only) {
    nonzero = R(RatVec(v.rank, 0)).value == 0 ? 0 : 1;
  } else {
    for (const auto& g : boundary.points)
      if (R(g).value != 0) ++nonzero;
  }
  rec.exact("volhat_zero_on_boundary", nonzero);

  auto first = sample(v.mori, scaled(s, 1000), rng, SampleMode::Interior).points;
  auto second = sample(v.mori, first.size(), rng, SampleMode::Interior).points;
  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < first.size(); ++i) {
    double lhs = R(add(first[i], second[i])).opt.value;
    margin = std::min(margin, lhs - R(first[i]).opt.value - R(second[i]).opt.value);
  }
  rec.at_least("volhat_superadditivity_margin", margin, -1e-7);

  // Continuity probes along directions u inside the cone: superadditivity makes
  // vol_hat(γ + δu) strictly increasing in δ, so the differences must shrink with δ.
  double worst_increase = -std::numeric_limits<double>::infinity();
  auto probe_bases = sample(v.mori, 10, rng, SampleMode::Interior).points;
  auto boundary_bases = sample(v.mori, 10, rng, SampleMode::Boundary);
  if (!boundary_bases.rays_only)
    probe_bases.insert(probe_bases.end(), boundary_bases.points.begin(), boundary_bases.points.end());
  auto targets = sample(v.mori, probe_bases.size(), rng, SampleMode::Interior).points;
  for (std::size_t i = 0; i < probe_bases.size(); ++i) {
    const double base = R(probe_bases[i]).value;
    double previous = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 4; ++k) {
      Rational delta(1, static_cast<long>(std::pow(10, k)));
      RatVec point = probe_bases[i];
      for (int j = 0; j < v.rank; ++j) point[j] += delta * targets[i][j];
      double diff = std::abs(R(point).value - base);
      if (std::isfinite(previous)) worst_increase = std::max(worst_increase, diff - previous);
      previous = diff;
    }
  }
  rec.at_most("continuity_max_increase", std::max(worst_increase, 0.0), 1e-9);

  // Norm family: vol_hat^{(n-1)/n} <= ||γ|| for unit-volume ample bases.
  margin = std::numeric_limits<double>::infinity();
  auto gammas = sample(v.mori, 10, rng, SampleMode::Interior).points;
  for (int trial = 0; trial < 10; ++trial) {
    auto basis = sample(v.nef, static_cast<std::size_t>(v.rank), rng, SampleMode::Interior).points;
    RatVec total(v.rank, 0);
    for (const auto& b : basis) total = add(total, b);
    double scale = std::pow(to_double(v.intersection.power(total)), -1.0 / n);
    Rational norm_value;
    for (const auto& g : gammas) {
      try {
        norm_value = geometric_norm(v, basis, g);
      } catch (const ArgumentError&) {
        break;
      }
      margin = std::min(margin, scale * to_double(norm_value) - R(g).opt.value);
    }
  }
  rec.at_least("norm_family_margin", margin, -1e-7);

  if (v.oracle != VolumeOracle::NefOnly) {
    double excess = -std::numeric_limits<double>::infinity();
    for (const auto& g : sample(v.movable, scaled(s, 20), rng, SampleMode::Interior).points)
      excess = std::max(excess, m_invariant(v, g, cfg).value - R(g).value);
    rec.at_most("minv_le_volhat_excess", excess, 1e-7);
  }
  toric_checks(rec, v, cfg.seed);
}

void mobility_checks(VerifyReport& report, const OptConfig& cfg) {
  Recorder rec(report, "properties", "-");
  rec.exact("mobility_constant_n2", mobility_constant(2) == 1024 ? 0 : 1);
  rec.exact("mobility_constant_n3", mobility_constant(3) == 49152 ? 0 : 1);
  rec.exact("mobility_constant_n4", mobility_constant(4) == 3145728 ? 0 : 1);
  auto p3 = catalog("P3");
  rec.exact("mobility_bound_P3_line", mobility_upper_bound(p3, RatVec{1}, cfg).bound == 49152.0 ? 0 : 1);
}

void duality(VerifyReport& report, const NumericalVariety& v, const VerifyOptions& options) {
  Recorder rec(report, "duality", v.name);
  const auto& cfg = options.config;
  const double n = v.dim;
  const double s = options.sample_scale;
  std::mt19937_64 rng(cfg.seed);

  double worst = 0;
  for (const auto& a : sample(v.psef, scaled(s, 10), rng, SampleMode::Interior).points) {
    auto d = vol_via_duality(v, a, cfg);
    worst = std::max(worst, relative(d.value, d.reference));
  }
  rec.at_most("duality_rel_gap", worst, 1e-3);

  auto alphas = sample(v.psef, scaled(s, 100), rng, SampleMode::Interior).points;
  auto gammas = sample(v.movable, scaled(s, 100), rng, SampleMode::Interior).points;
  std::vector<double> vol_root, m_root;
  for (const auto& a : alphas) vol_root.push_back(std::pow(to_double(vol(v, a).value), 1.0 / n));
  for (const auto& g : gammas) m_root.push_back(m_invariant(v, g, cfg).opt.value);
  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < alphas.size(); ++i)
    for (std::size_t j = 0; j < gammas.size(); ++j)
      margin = std::min(margin, to_double(dot(alphas[i], gammas[j])) - vol_root[i] * m_root[j]);
  rec.at_least("duality_inequality_margin", margin, -1e-9);

  margin = std::numeric_limits<double>::infinity();
  auto omegas = sample(v.nef, alphas.size(), rng, SampleMode::Interior).points;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    double lhs = to_double(dot(alphas[i], v.intersection.polar(omegas[i])));
    double w = to_double(v.intersection.power(omegas[i]));
    margin = std::min(margin, lhs - vol_root[i] * std::pow(w, (n - 1) / n));
  }
  rec.at_least("khovanskii_teissier_margin", margin, -1e-9);

  worst = 0;
  for (std::size_t i = 0; i < std::min<std::size_t>(omegas.size(), 20); ++i) {
    double reference = to_double(v.intersection.power(omegas[i]));
    worst = std::max(worst, relative(m_invariant(v, v.intersection.polar(omegas[i]), cfg).value, reference));
  }
  rec.at_most("minv_of_nef_power_rel_gap", worst, 1e-4);

  margin = std::numeric_limits<double>::infinity();
  std::size_t nonpositive = 0;
  for (std::size_t i = 0; i + 1 < gammas.size(); i += 2) {
    double lhs = m_invariant(v, add(gammas[i], gammas[i + 1]), cfg).opt.value;
    margin = std::min(margin, lhs - m_root[i] - m_root[i + 1]);
  }
  for (double m : m_root)
    if (!(m > 0)) ++nonpositive;
  rec.at_least("minv_superadditivity_margin", margin, -1e-7);
  rec.exact("minv_positive_on_movable_interior", nonpositive);
}

std::map<std::string, Rational> negative_map(const ZariskiResult& z) {
  return {z.negative.begin(), z.negative.end()};
}

void zariski(VerifyReport& report, const NumericalVariety& v, const VerifyOptions& options) {
  Recorder rec(report, "zariski", v.name);
  const auto& cfg = options.config;
  std::mt19937_64 rng(cfg.seed);

  if (v.name == "F1" || v.name == "F1-fan") {
    auto z = zariski_decompose(v, RatVec{1, 1});
    auto labels = negative_map(z);
    std::size_t bad = z.positive == RatVec{1, 0} ? 0 : 1;
    bad += labels.size() == 1 && labels.begin()->second == 1 ? 0 : 1;
    auto nef = zariski_decompose(v, RatVec{2, -1});
    bad += nef.positive == RatVec{2, -1} && nef.negative.empty() ? 0 : 1;
    rec.exact("F1_exact_decompositions", bad);
  }

  auto points = sample(v.psef, scaled(options.sample_scale, 50), rng, SampleMode::Interior).points;
  auto edge = sample(v.psef, scaled(options.sample_scale, 50), rng, SampleMode::Boundary);
  points.insert(points.end(), edge.points.begin(), edge.points.end());

  NumericalVariety permuted = v;
  std::reverse(permuted.negative_curves.begin(), permuted.negative_curves.end());
  if (permuted.negative_curves.size() > 2)
    std::rotate(permuted.negative_curves.begin(), permuted.negative_curves.begin() + 1, permuted.negative_curves.end());

  std::size_t invariant_bad = 0, idempotence_bad = 0, permutation_bad = 0, domination_bad = 0, volume_bad = 0;
  auto nefs = sample(v.nef, points.size(), rng, SampleMode::Interior).points;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& g = points[i];
    auto z = zariski_decompose(v, g);
    RatVec rebuilt = z.positive;
    for (std::size_t k = 0; k < z.support.size(); ++k)
      for (int j = 0; j < v.rank; ++j) rebuilt[j] += z.negative[k].second * v.negative_curves[z.support[k]].coords[j];
    bool ok = rebuilt == g && v.nef.contains(z.positive);
    for (auto idx : z.support) ok = ok && dot(v.intersection.polar(z.positive), v.negative_curves[idx].coords) == 0;
    for (const auto& [label, nu] : z.negative) ok = ok && nu > 0;
    invariant_bad += !ok;
    idempotence_bad += !zariski_decompose(v, z.positive).negative.empty();
    auto zp = zariski_decompose(permuted, g);
    permutation_bad += !(zp.positive == z.positive && negative_map(zp) == negative_map(z));
    if (i + 1 < points.size()) {
      auto sum = negative_map(zariski_decompose(v, add(g, points[i + 1])));
      auto a = negative_map(z), b = negative_map(zariski_decompose(v, points[i + 1]));
      for (const auto& [label, nu] : sum) domination_bad += nu > a[label] + b[label];
    }
    RatVec doubled = g;
    for (auto& c : doubled) c *= 2;
    Rational base = zariski_volume(v, g);
    volume_bad += zariski_volume(v, doubled) != 4 * base;
    volume_bad += zariski_volume(v, add(g, nefs[i])) < base;
  }
  rec.exact("decomposition_invariants", invariant_bad);
  rec.exact("idempotence", idempotence_bad);
  rec.exact("permutation_invariance", permutation_bad);
  rec.exact("negative_part_domination", domination_bad);
  rec.exact("volume_homogeneous_and_monotone", volume_bad);

  double worst = 0;
  for (std::size_t i = 0; i < std::min<std::size_t>(points.size(), scaled(options.sample_scale, 20)); ++i) {
    auto r = verify_projection_preserves_volhat(v, points[i], cfg);
    double z2 = to_double(r.positive_square);
    worst = std::max(worst, r.gap_square / std::max(1.0, z2));
    worst = std::max(worst, r.gap_positive / std::max(1.0, z2));
  }
  rec.at_most("volhat_equals_positive_square", worst, 1e-4);

  if (v.nef_tangent_bundle)
    rec.exact("trivial_decomposition", check_trivial_decomposition(v, scaled(options.sample_scale, 100), cfg.seed) ? 0 : 1);
}

std::vector<NumericalVariety> defaults(const std::string& suite) {
  std::vector<NumericalVariety> out;
  auto add_names = [&](std::initializer_list<const char*> names) {
    for (const char* n : names) out.push_back(catalog(n));
  };
  if (suite == "duality") {
    add_names({"F1", "P1xP1"});
    out.push_back(f1_fan());
  } else if (suite == "properties") {
    add_names({"P2", "P3", "P1xP1", "P1xP1xP1", "F1", "F2", "F3", "Bl1P2", "Bl2P2", "Bl3P2", "Cutkosky1", "Cutkosky2"});
  } else if (suite == "zariski") {
    add_names({"F1", "F2", "Bl1P2", "Bl2P2", "Bl3P2", "P2", "P1xP1"});
  }
  return out;
}

void run_suite(VerifyReport& report, const std::string& suite, const VerifyOptions& options) {
  if (suite == "example31") {
    if (!options.varieties.empty())
      report.warnings.push_back("example31 always runs on the Cutkosky entries; the variety filter is ignored");
    example31(report, options);
    return;
  }
  const auto list = options.varieties.empty() ? defaults(suite) : options.varieties;
  for (const auto& v : list) {
    if (v.dim < 2) {
      report.warnings.push_back("skipped " + suite + " on " + v.name + ": needs n >= 2");
      continue;
    }
    if (suite == "zariski" && v.dim != 2) {
      report.warnings.push_back("skipped zariski on " + v.name + ": not a surface");
      continue;
    }
    if (suite == "duality" && v.oracle == VolumeOracle::NefOnly) {
      report.warnings.push_back("skipped duality on " + v.name + ": no big-volume oracle");
      continue;
    }
    if (suite == "properties") properties(report, v, options);
    if (suite == "duality") duality(report, v, options);
    if (suite == "zariski") zariski(report, v, options);
  }
  if (suite == "properties") mobility_checks(report, options.config);
}

}  // namespace

VerifyReport run_verify(const VerifyOptions& options) {
  VerifyReport report;
  if (options.suite == "all") {
    for (const char* s : {"example31", "zariski", "properties", "duality"}) run_suite(report, s, options);
  } else if (options.suite == "duality" || options.suite == "properties" || options.suite == "zariski" ||
             options.suite == "example31") {
    run_suite(report, options.suite, options);
  } else {
    throw ArgumentError("unknown suite '" + options.suite + "'; valid suites: duality, properties, zariski, example31, all");
  }
  return report;
}

}  // namespace numvol
