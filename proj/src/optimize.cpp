#include "numvol/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <random>

#include <gsl/gsl_multimin.h>

#include "numvol/errors.hpp"
#include "numvol/toric.hpp"
#include "numvol/varieties.hpp"
#include "numvol/zariski.hpp"

namespace numvol {

std::string to_string(OptStatus status) {
  switch (status) {
    case OptStatus::Converged: return "converged";
    case OptStatus::MaxIter: return "max_iter";
    case OptStatus::BoundaryZero: return "boundary_zero";
  }
  return "unknown";
}

Vec project_simplex(std::span<const double> w) {
  Vec u(w.begin(), w.end());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0, theta = 0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cumulative += u[j];
    double candidate = (cumulative - 1.0) / static_cast<double>(j + 1);
    if (u[j] - candidate > 0) theta = candidate;
  }
  Vec out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out[i] = std::max(w[i] - theta, 0.0);
  return out;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint64_t kOutsideBit = std::uint64_t{1} << 63;
constexpr int kMaxBacktracks = 20;

double norm(const Vec& x) { return std::sqrt(dot(x, x)); }

double max_abs(std::span<const double> x) {
  double m = 0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

Vec combine(const std::vector<Vec>& gens, const Vec& w) {
  Vec beta(gens.front().size(), 0.0);
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t k = 0; k < beta.size(); ++k) beta[k] += w[i] * gens[i][k];
  return beta;
}

bool fd_gradient(const VolumeEvaluator& ev, std::span<const double> beta, double rel_step, Vec& out) {
  const std::size_t n = beta.size();
  double h = rel_step * std::max(max_abs(beta), 1e-300);
  Vec x(beta.begin(), beta.end());
  std::optional<std::uint64_t> base;
  if (ev.chamber) base = ev.chamber(beta);
  out.assign(n, 0.0);
  for (int attempt = 0; attempt <= 8; ++attempt, h *= 0.5) {
    bool stable = true;
    if (base) {
      for (std::size_t j = 0; j < n && stable; ++j) {
        for (double sign : {1.0, -1.0}) {
          x[j] = beta[j] + sign * h;
          if (ev.chamber(x) != *base) stable = false;
        }
        x[j] = beta[j];
      }
    }
    if (!stable && attempt < 8) continue;
    for (std::size_t j = 0; j < n; ++j) {
      x[j] = beta[j] + h;
      double up = ev.value(x);
      x[j] = beta[j] - h;
      double down = ev.value(x);
      x[j] = beta[j];
      out[j] = (up - down) / (2 * h);
    }
    return stable;
  }
  return false;
}

struct StartOutcome {
  bool ok = false;
  Vec w;
  double f = kInf;
  int iterations = 0;
  bool fallback = false;
  double kkt_gap = kInf;
};

class StartRunner {
 public:
  StartRunner(const std::vector<Vec>& gens, const LogObjective& objective, const OptConfig& config,
              const DescentObserver& observer, int index)
      : gens_(gens), objective_(objective), config_(config), observer_(observer), index_(index) {}

  StartOutcome run() {
    std::mt19937_64 rng(config_.seed + static_cast<std::uint64_t>(index_));
    w_ = dirichlet_weights(gens_.size(), rng);
    f_ = eval(w_);
    StartOutcome out;
    if (!std::isfinite(f_)) return out;
    bool stable = barrier_phase() && polish_phase();
    if (!stable) {
      nelder_mead();
      out.fallback = true;
    }
    Vec g;
    gradient(w_, g);
    out.kkt_gap = kkt_gap(g);
    out.ok = true;
    out.w = w_;
    out.f = f_;
    out.iterations = iterations_;
    return out;
  }

  double eval(const Vec& w) const {
    auto r = objective_.value(combine(gens_, w));
    return r ? *r : kInf;
  }

 private:
  bool gradient(const Vec& w, Vec& g) const {
    Vec ambient;
    bool ok = objective_.gradient(combine(gens_, w), ambient);
    g.assign(gens_.size(), 0.0);
    for (std::size_t i = 0; i < gens_.size(); ++i) g[i] = dot(gens_[i], ambient);
    return ok;
  }

  double kkt_gap(const Vec& g) const { return kkt_gap_at(w_, g); }

  static double kkt_gap_at(const Vec& w, const Vec& g) {
    Vec trial(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) trial[i] = w[i] - g[i];
    Vec p = project_simplex(trial);
    for (std::size_t i = 0; i < w.size(); ++i) p[i] -= w[i];
    return norm(p);
  }

  void accept(Vec w, double f) {
    w_ = std::move(w);
    f_ = f;
    ++iterations_;
    if (observer_) observer_(index_, f_);
  }

  static double barrier(const Vec& w) {
    double s = 0;
    for (double x : w) s += std::log(x);
    return s;
  }

  bool barrier_phase() {
    const std::size_t m = w_.size();
    const int stage_budget = std::max(1, config_.max_iter / 8);
    for (double mu : {1e-2, 1e-4, 1e-6, 1e-8}) {
      double t = 1.0;
      const int before = iterations_;
      for (int k = 0; k < stage_budget && iterations_ < config_.max_iter / 2; ++k) {
        Vec g;
        if (!gradient(w_, g)) return false;
        Vec d(m);
        double mean = 0;
        for (std::size_t i = 0; i < m; ++i) {
          d[i] = g[i] - mu / w_[i];
          mean += d[i];
        }
        mean /= static_cast<double>(m);
        for (auto& x : d) x = -(x - mean);
        if (norm(d) <= 0.1 * config_.tol) break;
        double t_max = kInf;
        for (std::size_t i = 0; i < m; ++i)
          if (d[i] < 0) t_max = std::min(t_max, -w_[i] / d[i]);
        t = std::min(2 * t, 0.99 * t_max);
        const double phi = f_ - mu * barrier(w_);
        const double slope = -dot(d, d);
        bool accepted = false;
        for (int tries = 0; tries < kMaxBacktracks; ++tries, t *= 0.5) {
          Vec trial(m);
          bool positive = true;
          for (std::size_t i = 0; i < m; ++i) {
            trial[i] = w_[i] + t * d[i];
            positive = positive && trial[i] > 0;
          }
          if (!positive) continue;
          double f = eval(trial);
          if (!(f <= f_)) continue;
          double phi_new = f - mu * barrier(trial);
          if (phi_new <= phi + 1e-4 * t * slope) {
            bool stalled = phi - phi_new <= 1e-15 * std::max(1.0, std::abs(phi));
            accept(std::move(trial), f);
            accepted = !stalled;
            break;
          }
        }
        if (!accepted) break;
      }
      if (iterations_ == before) break;
    }
    return true;
  }

  bool polish_phase() {
    const std::size_t m = w_.size();
    Vec g;
    if (!gradient(w_, g)) return false;
    double t = 1.0 / std::max(norm(g), 1e-12);
    Vec prev_w, prev_g;
    while (iterations_ < config_.max_iter) {
      if (kkt_gap(g) <= 0.5 * config_.tol) break;
      if (!prev_w.empty()) {
        double sy = 0, ss = 0;
        for (std::size_t i = 0; i < m; ++i) {
          double s = w_[i] - prev_w[i], y = g[i] - prev_g[i];
          sy += s * y;
          ss += s * s;
        }
        if (sy > 0) t = std::clamp(ss / sy, 1e-12, 1e12);
      }
      bool accepted = false;
      const double t_first = t;
      for (int tries = 0; tries < kMaxBacktracks; ++tries, t *= 0.5) {
        Vec step(m);
        for (std::size_t i = 0; i < m; ++i) step[i] = w_[i] - t * g[i];
        Vec trial = project_simplex(step);
        double decrease = 0;
        for (std::size_t i = 0; i < m; ++i) decrease += g[i] * (trial[i] - w_[i]);
        double f = eval(trial);
        if (f <= f_ + 1e-4 * decrease && f <= f_ && decrease < 0) {
          prev_w = w_;
          prev_g = g;
          accept(std::move(trial), f);
          accepted = true;
          break;
        }
      }
      if (!accepted) {
        // Armijo cannot resolve decreases below the rounding level of f; near the
        // minimizer accept a non-increasing step that shrinks the projected gradient.
        const double gap = kkt_gap(g);
        double tf = std::min(t_first, 1.0);
        for (int tries = 0; tries < 10 && !accepted; ++tries, tf *= 0.5) {
          Vec step(m), g_trial;
          for (std::size_t i = 0; i < m; ++i) step[i] = w_[i] - tf * g[i];
          Vec trial = project_simplex(step);
          double f = eval(trial);
          if (!(f <= f_) || !gradient(trial, g_trial) || !(kkt_gap_at(trial, g_trial) < gap)) continue;
          prev_w = w_;
          prev_g = g;
          accept(std::move(trial), f);
          g = std::move(g_trial);
          accepted = true;
        }
        if (!accepted) break;
        t = t_first;
        continue;
      }
      if (!gradient(w_, g)) return false;
    }
    return true;
  }

  struct NmContext {
    const StartRunner* runner;
    std::size_t m;
  };

  static Vec softmax(const gsl_vector* x, std::size_t m) {
    double top = -kInf;
    for (std::size_t i = 0; i < m; ++i) top = std::max(top, gsl_vector_get(x, i));
    Vec w(m);
    double s = 0;
    for (std::size_t i = 0; i < m; ++i) s += w[i] = std::exp(gsl_vector_get(x, i) - top);
    for (auto& v : w) v /= s;
    return w;
  }

  static double nm_objective(const gsl_vector* x, void* params) {
    auto* ctx = static_cast<NmContext*>(params);
    double f = ctx->runner->eval(softmax(x, ctx->m));
    return std::isfinite(f) ? f : 1e300;
  }

  void nelder_mead() {
    const std::size_t m = w_.size();
    NmContext ctx{this, m};
    gsl_multimin_function fn{&nm_objective, m, &ctx};
    gsl_vector* x = gsl_vector_alloc(m);
    gsl_vector* step = gsl_vector_alloc(m);
    for (std::size_t i = 0; i < m; ++i) {
      gsl_vector_set(x, i, std::log(std::max(w_[i], 1e-12)));
      gsl_vector_set(step, i, 0.5);
    }
    gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, m);
    gsl_multimin_fminimizer_set(s, &fn, x, step);
    const int budget = std::max(200, 20 * config_.max_iter);
    for (int k = 0; k < budget; ++k) {
      if (gsl_multimin_fminimizer_iterate(s)) break;
      if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), 1e-12) == GSL_SUCCESS) break;
    }
    Vec best = softmax(gsl_multimin_fminimizer_x(s), m);
    double f = eval(best);
    if (f < f_) accept(std::move(best), f);
    gsl_multimin_fminimizer_free(s);
    gsl_vector_free(step);
    gsl_vector_free(x);
  }

  const std::vector<Vec>& gens_;
  const LogObjective& objective_;
  const OptConfig& config_;
  const DescentObserver& observer_;
  int index_;
  Vec w_;
  double f_ = kInf;
  int iterations_ = 0;
};

}  // namespace

EngineResult minimize_on_cone(const std::vector<Vec>& generators, const LogObjective& objective,
                              const OptConfig& config, const DescentObserver& observer) {
  if (generators.empty()) throw ArgumentError("cone has no generators");
  EngineResult result;
  if (generators.size() == 1) {
    auto r = objective.value(generators.front());
    result.found = r.has_value();
    result.log_value = r.value_or(kInf);
    result.point = generators.front();
    result.starts_used = 1;
    return result;
  }
  result.log_value = kInf;
  for (int start = 0; start < std::max(1, config.starts); ++start) {
    StartRunner runner(generators, objective, config, observer, start);
    StartOutcome outcome = runner.run();
    if (!outcome.ok) continue;
    ++result.starts_used;
    result.iterations += outcome.iterations;
    if (outcome.fallback) ++result.fallback_starts;
    if (!result.found || outcome.f < result.log_value) {
      result.found = true;
      result.log_value = outcome.f;
      result.point = combine(generators, outcome.w);
      result.kkt_gap = outcome.kkt_gap;
    }
  }
  return result;
}

OptResult min_pairing_on_slice(const OptProblem& problem, const OptConfig& config, const DescentObserver& observer) {
  const auto& gamma = problem.objective;
  const auto& ev = problem.volume;
  if (static_cast<int>(gamma.size()) != problem.cone.rank())
    throw ArgumentError("objective class length does not match the cone rank");
  auto unit = [&](Vec beta) {
    double v = ev.value(beta);
    if (v > 0) {
      double s = std::pow(v, 1.0 / problem.exponent);
      for (auto& x : beta) x /= s;
    }
    return beta;
  };

  OptResult result;
  const auto& gens = problem.cone.generators();
  for (std::size_t k = 0; k < gens.size(); ++k) {
    Rational q = dot(gens[k], gamma);
    bool zero = q < 0;
    if (q == 0) {
      zero = problem.zero_pairing_forces_zero ||
             (ev.exact ? ev.exact(gens[k]) > 0 : ev.value(to_double(gens[k])) > 0);
    }
    if (zero) {
      result.value = 0;
      result.argmin = unit(to_double(gens[k]));
      result.kkt_gap = 0;
      result.status = OptStatus::BoundaryZero;
      result.diagnostics = "generator #" + std::to_string(k) + " pairs to " + format_rational(q);
      return result;
    }
  }

  const Vec g = to_double(gamma);
  const double p = problem.exponent;
  LogObjective objective;
  objective.value = [&](std::span<const double> beta) -> std::optional<double> {
    double pairing = dot<double>(beta, std::span<const double>(g));
    if (!(pairing > 0)) return std::nullopt;
    double v = ev.value(beta);
    if (!(v > 0) || !std::isfinite(v)) return std::nullopt;
    return std::log(pairing) - std::log(v) / p;
  };
  objective.gradient = [&](std::span<const double> beta, Vec& out) {
    double pairing = dot<double>(beta, std::span<const double>(g));
    double v = ev.value(beta);
    Vec dv;
    bool stable = true;
    if (ev.gradient)
      dv = ev.gradient(beta);
    else
      stable = fd_gradient(ev, beta, config.fd_step, dv);
    out.assign(beta.size(), 0.0);
    for (std::size_t j = 0; j < beta.size(); ++j) out[j] = g[j] / pairing - dv[j] / (p * v);
    return stable;
  };

  std::vector<Vec> dgens;
  for (const auto& gen : gens) dgens.push_back(to_double(gen));
  EngineResult engine = minimize_on_cone(dgens, objective, config, observer);
  result.iterations = engine.iterations;
  result.starts_used = engine.starts_used;
  result.fallback_starts = engine.fallback_starts;
  if (!engine.found) {
    result.value = kInf;
    result.status = OptStatus::MaxIter;
    result.kkt_gap = kInf;
    result.diagnostics = "every start was discarded: volume not positive at the start point";
    return result;
  }
  result.value = std::exp(engine.log_value);
  result.argmin = unit(engine.point);
  result.kkt_gap = engine.kkt_gap;
  result.status = engine.kkt_gap <= config.tol ? OptStatus::Converged : OptStatus::MaxIter;
  if (engine.fallback_starts > 0)
    result.diagnostics = std::to_string(engine.fallback_starts) + " start(s) used derivative-free search";
  return result;
}

bool certify_interior_optimum(const NumericalVariety& v, std::span<const double> beta, const RatVec& gamma,
                              double tol) {
  if (v.rank == 1) return true;
  Vec curve = v.intersection.polar(beta);
  Vec g = to_double(gamma);
  // angle between unit vectors as 2·atan2(|a−b|, |a+b|), accurate near zero
  const double nc = norm(curve), ng = norm(g);
  Vec diff(g.size()), sum(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    diff[i] = curve[i] / nc - g[i] / ng;
    sum[i] = curve[i] / nc + g[i] / ng;
  }
  return 2 * std::atan2(norm(diff), norm(sum)) <= tol;
}

VolumeEvaluator nef_polynomial_evaluator(const NumericalVariety& v) {
  auto form = std::make_shared<const SymmetricForm>(v.intersection);
  const double n = v.dim;
  VolumeEvaluator ev;
  ev.tag = "nef-polynomial";
  ev.value = [form](std::span<const double> b) { return form->power(b); };
  ev.gradient = [form, n](std::span<const double> b) {
    Vec g = form->polar(b);
    for (auto& x : g) x *= n;
    return g;
  };
  ev.exact = [form](const RatVec& b) { return form->power(b); };
  return ev;
}

VolumeEvaluator big_volume_evaluator(const NumericalVariety& v) {
  auto shared = std::make_shared<const NumericalVariety>(v);
  VolumeEvaluator ev;
  switch (v.oracle) {
    case VolumeOracle::NefOnly:
      throw NefOnlyError(v.name +
                         " has no big-volume oracle (nef-only); load it from a fan with --fan to use the toric "
                         "polytope volume");
    case VolumeOracle::SurfaceZariski:
      ev.tag = "surface-zariski";
    {
      auto solver = std::make_shared<const ZariskiSolver>(*shared);
      ev.value = [shared, solver](std::span<const double> b) { return solver->volume(b); };
      ev.chamber = [shared, solver](std::span<const double> b) {
        auto z = solver->decompose(b);
        return z.outside ? kOutsideBit : z.support_mask;
      };
      ev.exact = [shared](const RatVec& b) { return zariski_volume(*shared, b); };
      break;
    }
    case VolumeOracle::ToricPolytope:
      ev.tag = "toric-polytope";
      ev.value = [shared](std::span<const double> b) { return vol_big_toric(*shared, b); };
      ev.chamber = [shared](std::span<const double> b) {
        if (!shared->psef.contains(b, 1e-13)) return kOutsideBit;
        return shared->toric->polytope(shared->toric->lift(b)).facet_mask;
      };
      ev.exact = [shared](const RatVec& b) { return vol_big_toric(*shared, b).value; };
      break;
  }
  return ev;
}

}  // namespace numvol
