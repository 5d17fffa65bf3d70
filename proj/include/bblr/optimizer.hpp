#pragma once

#include <chrono>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bblr/dataset.hpp"
#include "bblr/hyper.hpp"
#include "bblr/model.hpp"
#include "bblr/prior.hpp"
#include "bblr/types.hpp"

namespace bblr {

// Annealing schedule and step-size policy. Every threshold a fit
// decision compares against lives here.
struct SlaConfig {
  Scalar r0 = 8.0;          // initial probe range
  Scalar eps_s0 = 0.2;      // initial probe resolution
  Scalar gamma_min = 2.0;
  Scalar gamma_max = 200.0;
  Scalar r_gamma = 10.0;    // gamma multiplier per stage
  Scalar r_r = 0.5;         // range decay per stage
  Scalar r_eps = 0.5;       // resolution decay per stage
  Scalar rg_max = 1.0;      // initial ascent rate
  Scalar rg_min = 1e-5;     // ascent gives up below this rate
  Scalar r_g = 0.1;         // ascent rate decay on a failed step
  Scalar eps_l = 1e-6;      // minimum meaningful objective gain
  Scalar eps_g = 1e-6;      // gradient sup-norm stopping threshold

  void validate() const;
};

// Probe ladder {eps_s, -eps_s, 2 eps_s, -2 eps_s, ..., r, -r}. The
// endpoint pair is appended only when r is not already a multiple of
// eps_s (within 1e-9 relative).
std::vector<Scalar> probe_steps(Scalar r, Scalar eps_s);

struct StageRecord {
  Scalar gamma;
  Scalar objective;
  int train01;
};

struct FitReport {
  Vec coefficients;
  std::vector<StageRecord> stages;
  long probe_accepts = 0;
  double wall_ms = 0;
  std::uint64_t seed = 0;
};

template <class Obj>
concept GradObjective = requires(const Obj& o, const Vec& v) {
  { o.dim() } -> std::convertible_to<Index>;
  { o.value(v) } -> std::convertible_to<Scalar>;
  { o.gradient(v) } -> std::convertible_to<Vec>;
};

template <class Obj>
concept AnnealedObjective =
    GradObjective<Obj> && requires(Obj& o, const Vec& v, Scalar g) {
      o.set_gamma(g);
      { o.train01(v) } -> std::convertible_to<int>;
    };

namespace detail {

template <GradObjective Obj>
Scalar probe_value(const Obj& obj, const Vec& v, Index i, Scalar step,
                   Vec& scratch) {
  if constexpr (requires {
                  { obj.value_shifted(v, i, step) } -> std::convertible_to<Scalar>;
                }) {
    return obj.value_shifted(v, i, step);
  } else {
    scratch = v;
    scratch[i] += step;
    return obj.value(scratch);
  }
}

}  // namespace detail

// Backtracking gradient ascent. The rate starts at rg_max, shrinks by
// r_g whenever a step fails to improve the objective, and the search
// stops on a vanishing gradient, on a gain below eps_l, or once the
// rate drops under rg_min. Throws std::domain_error when the objective
// is not finite at the start.
template <GradObjective Obj>
Vec vanilla_grad_desc(const Obj& obj, Vec v, const SlaConfig& cfg) {
  Scalar fv = obj.value(v);
  if (!std::isfinite(fv))
    throw std::domain_error("objective is not finite at the starting point");

  Scalar rate = cfg.rg_max;
  Vec cand(v.size());
  Vec g = obj.gradient(v);
  // Cheap safety net; regular exits happen orders of magnitude earlier.
  for (long iter = 0; iter < 1000000; ++iter) {
    if (g.lpNorm<Eigen::Infinity>() < cfg.eps_g) break;
    cand = v + rate * g;
    const Scalar fc = obj.value(cand);
    if (fc > fv) {
      const Scalar gain = fc - fv;
      v.swap(cand);
      fv = fc;
      if (gain < cfg.eps_l) break;
      g = obj.gradient(v);
    } else {
      rate *= cfg.r_g;
      if (rate < cfg.rg_min) break;
    }
  }
  return v;
}

// Ascent to a local optimum, then per-coordinate probes over the ladder
// probe_steps(r, eps_s). Any probe that gains at least eps_l is applied
// and the whole cycle restarts; returns when a full sweep finds nothing.
template <GradObjective Obj>
Vec grad_desc_in_range(const Obj& obj, Vec v, Scalar r, Scalar eps_s,
                       const SlaConfig& cfg, long* accepts = nullptr) {
  const auto steps = probe_steps(r, eps_s);
  Vec scratch;
  bool improved = true;
  while (improved) {
    v = vanilla_grad_desc(obj, std::move(v), cfg);
    const Scalar fv = obj.value(v);
    improved = false;
    for (Index i = 0; i < obj.dim() && !improved; ++i) {
      for (const Scalar step : steps) {
        const Scalar fc = detail::probe_value(obj, v, i, step, scratch);
        if (fc - fv >= cfg.eps_l) {
          v[i] += step;
          if (accepts) ++*accepts;
          improved = true;
          break;
        }
      }
    }
  }
  return v;
}

// grad_desc_in_range with a sparsification phase between ascent and
// probing: each cycle refits the mixture prior by a few hard-EM rounds
// and re-ascends the coefficients, and the loop runs until the probes
// find nothing AND the clusters have stopped changing, in membership
// and in moments. A fixed point costs exactly one alternation.
//
// The EM rounds per cycle stay small on purpose. Every round shrinks
// the Laplace scale toward the magnitudes of the coefficients it pins,
// and a probe can only drop a coefficient into the Laplace basin while
// that basin is still wide enough for the probe lattice to hit.
// Interleaving keeps the recruitment window open while the collapse
// proceeds; running EM to convergence up front would slam it shut.
//
// Riding pinned coefficients down the tightening cliff takes descent
// steps of order b_l^2. The rate floor that suits the smooth phase
// would reject every such step and freeze the collapse partway, so the
// post-EM descents run with a much deeper floor.
inline constexpr Scalar kSparsePhaseRateFloor = 1e-16;

template <class Obj>
  requires GradObjective<Obj> && requires(Obj& o, Prior p) {
    { o.prior() } -> std::convertible_to<const Prior&>;
    o.set_prior(p);
  }
Vec grad_desc_in_range_sparse(Obj& obj, Vec v, Scalar r, Scalar eps_s,
                              const SlaConfig& cfg, long* accepts = nullptr,
                              int em_rounds = 2, int em_total_cap = 500) {
  const auto steps = probe_steps(r, eps_s);
  SlaConfig em_cfg = cfg;
  em_cfg.rg_min = std::min(cfg.rg_min, kSparsePhaseRateFloor);
  Vec scratch;
  int spent = 0;
  bool improved = true;
  while (improved) {
    v = vanilla_grad_desc(obj, std::move(v), cfg);
    bool settled = spent >= em_total_cap;
    for (int it = 0; it < em_rounds && !settled; ++it, ++spent) {
      const auto& cur = std::get<MixturePrior>(obj.prior());
      MixturePrior next = hard_em_update(v, cur);
      settled = next.assign == cur.assign &&
                std::abs(next.pi_l - cur.pi_l) <= 1e-3 &&
                std::abs(next.sigma_g - cur.sigma_g) <= 1e-3 * cur.sigma_g &&
                std::abs(next.b_l - cur.b_l) <= 1e-3 * cur.b_l;
      obj.set_prior(Prior{std::move(next)});
      v = vanilla_grad_desc(obj, std::move(v), em_cfg);
    }
    const Scalar fv = obj.value(v);
    improved = !settled;
    for (Index i = 0; i < obj.dim(); ++i) {
      bool hit = false;
      for (const Scalar step : steps) {
        const Scalar fc = detail::probe_value(obj, v, i, step, scratch);
        if (fc - fv >= cfg.eps_l) {
          v[i] += step;
          if (accepts) ++*accepts;
          improved = true;
          hit = true;
          break;
        }
      }
      if (hit) break;
    }
  }
  return v;
}

// Annealed fit: one grad_desc_in_range pass per stage while gamma walks
// gamma_min, gamma_min * r_gamma, ... up to gamma_max, with the probe
// range and resolution decaying by r_r and r_eps. Coefficients carry
// over between stages. Objectives exposing a mixture prior in
// sparse_mode() get the sparsifying pass instead.
template <AnnealedObjective Obj>
FitReport find_sla_solution(Obj& obj, Vec start, const SlaConfig& cfg,
                            std::uint64_t seed = 0) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();

  FitReport report;
  report.seed = seed;
  Vec v = std::move(start);
  Scalar r = cfg.r0;
  Scalar eps_s = cfg.eps_s0;

  for (Scalar gamma = cfg.gamma_min; gamma <= cfg.gamma_max * (1 + 1e-12);
       gamma *= cfg.r_gamma) {
    obj.set_gamma(gamma);
    if (!std::isfinite(obj.value(v)))
      throw std::domain_error("objective is not finite entering stage gamma=" +
                              std::to_string(gamma));

    bool handled = false;
    if constexpr (requires {
                    { obj.sparse_mode() } -> std::convertible_to<bool>;
                  }) {
      if (obj.sparse_mode()) {
        v = grad_desc_in_range_sparse(obj, std::move(v), r, eps_s, cfg,
                                      &report.probe_accepts);
        handled = true;
      }
    }
    if (!handled)
      v = grad_desc_in_range(obj, std::move(v), r, eps_s, cfg,
                             &report.probe_accepts);

    report.stages.push_back({gamma, obj.value(v), obj.train01(v)});
    r *= cfg.r_r;
    eps_s *= cfg.r_eps;
  }

  report.coefficients = std::move(v);
  report.wall_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
  return report;
}

// Convenience entry point for the linear model: builds the design
// matrix and a plateau-likelihood objective, then anneals from model0.
FitReport find_sla_solution(const Dataset& train, const LinearModel& model0,
                            const BBHyper& hyper, const Prior& prior,
                            const SlaConfig& cfg, std::uint64_t seed = 0);

}  // namespace bblr
