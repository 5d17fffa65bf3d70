#include "bblr/slam.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "bblr/detail/subsets.hpp"
#include "bblr/metrics.hpp"
#include "bblr/objective.hpp"

namespace bblr {

namespace {

using detail::labels_of;
using detail::rows_of;

using FitFn = std::function<Vec(const Mat&, const IntVec&)>;

int held_out_errors(const Mat& design, const IntVec& y,
                    const std::vector<FoldSplit>& splits, const FitFn& fit) {
  int errors = 0;
  for (const auto& fs : splits) {
    const Mat dtr = rows_of(design, fs.train_idx);
    const IntVec ytr = labels_of(y, fs.train_idx);
    const Vec v = fit(dtr, ytr);
    const Mat dva = rows_of(design, fs.test_idx);
    errors += count_01_errors(dva * v, labels_of(y, fs.test_idx));
  }
  return errors;
}

GridInit grid_search(const Mat& design, const IntVec& y,
                     const std::vector<Scalar>& lambdas,
                     const std::vector<Scalar>& gamma_inits, int folds,
                     std::uint64_t seed,
                     const std::function<Vec(const Mat&, const IntVec&, Scalar,
                                             Scalar)>& fit) {
  if (lambdas.empty() || gamma_inits.empty())
    throw std::invalid_argument("empty tuning grid");
  const auto splits = make_splits(y, SplitPlan{seed, folds, 1, true});

  GridInit out;
  int best = std::numeric_limits<int>::max();
  // Ascending iteration plus strict improvement lands ties on the
  // smallest lambda, then the smallest gamma.
  for (const Scalar lambda : lambdas) {
    for (const Scalar gamma : gamma_inits) {
      const int err = held_out_errors(
          design, y, splits,
          [&](const Mat& d, const IntVec& yy) { return fit(d, yy, lambda, gamma); });
      if (err < best) {
        best = err;
        out.lambda = lambda;
        out.gamma_init = gamma;
      }
    }
  }
  out.model0 = fit(design, y, out.lambda, out.gamma_init);
  return out;
}

}  // namespace

Vec smooth_fit(const Mat& design, const IntVec& labels, const BBHyper& hyper,
               Scalar gamma, Scalar lambda, const SlaConfig& cfg) {
  BBHyper h = hyper;
  h.gamma = gamma;
  TrainObjective obj(design, labels, h, Prior{GaussianPrior{lambda}});
  return vanilla_grad_desc(obj, Vec::Zero(design.cols()), cfg);
}

GridInit grid_init(const Mat& design, const IntVec& labels, const BBHyper& hyper,
                   const std::vector<Scalar>& lambdas,
                   const std::vector<Scalar>& gamma_inits, const SlaConfig& cfg,
                   int folds, std::uint64_t seed) {
  return grid_search(design, labels, lambdas, gamma_inits, folds, seed,
                     [&](const Mat& d, const IntVec& y, Scalar lambda,
                         Scalar gamma) {
                       return smooth_fit(d, y, hyper, gamma, lambda, cfg);
                     });
}

GridInit grid_init_sigmoid(const Mat& design, const IntVec& labels,
                           const std::vector<Scalar>& lambdas,
                           const std::vector<Scalar>& gamma_inits,
                           const SlaConfig& cfg, int folds, std::uint64_t seed) {
  return grid_search(design, labels, lambdas, gamma_inits, folds, seed,
                     [&](const Mat& d, const IntVec& y, Scalar lambda,
                         Scalar gamma) {
                       SigmoidSlaObjective obj(d, y, gamma, lambda);
                       return vanilla_grad_desc(obj, Vec::Zero(d.cols()), cfg);
                     });
}

SlamResult slam_tune(const Dataset& train, const BBHyper& hyper,
                     const SlamSpace& space, const SlaConfig& tmpl, int folds,
                     std::uint64_t seed) {
  if (space.lambdas.empty() || space.gamma_inits.empty() ||
      space.gamma_rates.empty())
    throw std::invalid_argument("empty tuning space");

  const Mat design = design_matrix(train);
  SlamResult res;
  res.cfg = tmpl;

  if (space.lambdas.size() == 1 && space.gamma_inits.size() == 1 &&
      space.gamma_rates.size() == 1) {
    res.lambda = space.lambdas[0];
    res.gamma_init = space.gamma_inits[0];
    res.cfg.r_gamma = space.gamma_rates[0];
    res.cfg.validate();
    res.model0.weights =
        smooth_fit(design, train.y, hyper, res.gamma_init, res.lambda, res.cfg);
    return res;
  }

  GridInit gi = grid_init(design, train.y, hyper, space.lambdas,
                          space.gamma_inits, tmpl, folds, seed);
  res.lambda = gi.lambda;
  res.gamma_init = gi.gamma_init;
  res.model0.weights = std::move(gi.model0);

  const auto splits = make_splits(train.y, SplitPlan{seed, folds, 1, true});
  const auto annealed_errors = [&](const SlaConfig& cfg) {
    return held_out_errors(design, train.y, splits,
                           [&](const Mat& d, const IntVec& y) {
                             const Vec v0 = smooth_fit(d, y, hyper,
                                                       res.gamma_init,
                                                       res.lambda, cfg);
                             BBHyper h = hyper;
                             h.gamma = res.gamma_init;
                             TrainObjective obj(d, y, h,
                                                Prior{GaussianPrior{res.lambda}});
                             return find_sla_solution(obj, v0, cfg).coefficients;
                           });
  };

  // Growth rate; on ties the coarser (cheaper) schedule wins.
  std::vector<Scalar> rates = space.gamma_rates;
  std::sort(rates.begin(), rates.end(), std::greater<>());
  int rate_best = std::numeric_limits<int>::max();
  for (const Scalar rate : rates) {
    SlaConfig c = res.cfg;
    c.r_gamma = rate;
    const int err = annealed_errors(c);
    if (err < rate_best) {
      rate_best = err;
      res.cfg = c;
    }
  }

  // Bracket the annealing endpoints around the defaults: shrink or grow
  // the floor while errors strictly drop, then push the ceiling up to
  // at most 2000 the same way.
  const Scalar rg = res.cfg.r_gamma;
  const auto eval_endpoints = [&](Scalar gmin, Scalar gmax) {
    SlaConfig c = res.cfg;
    c.gamma_min = gmin;
    c.gamma_max = gmax;
    return annealed_errors(c);
  };

  Scalar gm = res.cfg.gamma_min;
  int best = (gm * rg * rg == res.cfg.gamma_max)
                 ? rate_best
                 : eval_endpoints(gm, gm * rg * rg);
  const Scalar orig_gm = gm;
  while (gm / rg >= 1e-3) {
    const int e = eval_endpoints(gm / rg, gm * rg);
    if (e >= best) break;
    best = e;
    gm /= rg;
  }
  if (gm == orig_gm) {
    while (gm * rg * rg * rg <= 2000.0 * (1 + 1e-12)) {
      const int e = eval_endpoints(gm * rg, gm * rg * rg * rg);
      if (e >= best) break;
      best = e;
      gm *= rg;
    }
  }
  Scalar gx = gm * rg * rg;
  while (gx * rg <= 2000.0 * (1 + 1e-12)) {
    const int e = eval_endpoints(gm, gx * rg);
    if (e >= best) break;
    best = e;
    gx *= rg;
  }

  res.cfg.gamma_min = gm;
  res.cfg.gamma_max = gx;
  res.cfg.validate();
  return res;
}

Bblr3Fit fit_bblr3(const Dataset& train, const SlaConfig& tmpl, int folds,
                   std::uint64_t seed) {
  BBHyper h = empirical_hyper(train.y);
  SlamResult s = slam_tune(train, h, SlamSpace{}, tmpl, folds, seed);
  h.gamma = s.gamma_init;
  FitReport rep = find_sla_solution(train, s.model0, h,
                                    Prior{GaussianPrior{s.lambda}}, s.cfg, seed);
  return {std::move(rep), std::move(s), h};
}

namespace {

struct HyperCandidate {
  BBHyper h;
  Scalar lambda;
  SlaConfig cfg;
};

// Backtracking ascent of the unpenalized likelihood in the
// hyper-parameters at fixed weights, projected into their domains.
BBHyper ascend_hyper(const Dataset& ds, const Vec& weights, BBHyper h,
                     int iters = 20) {
  const LinearModel m{weights};
  Scalar cur = log_likelihood(ds, m, h, 0.0);
  Scalar rate = 1e-3;
  for (int it = 0; it < iters; ++it) {
    const HyperGrad g = grad_hyper(ds, m, h);
    if (g.d_mix_w == 0 && g.d_theta_b == 0 && g.d_gamma == 0) break;
    BBHyper cand = h;
    cand.set_mixture(std::clamp(h.mix_w + rate * g.d_mix_w, 1e-4, 1.0 - 1e-4),
                     std::clamp(h.theta_b + rate * g.d_theta_b, 1e-4, 1.0 - 1e-4));
    cand.gamma = std::clamp(h.gamma + rate * g.d_gamma, 0.5, 2000.0);
    const Scalar ll = log_likelihood(ds, m, cand, 0.0);
    if (ll > cur) {
      h = cand;
      cur = ll;
      rate *= 1.5;
    } else {
      rate *= 0.25;
      if (rate < 1e-9) break;
    }
  }
  return h;
}

}  // namespace

Bblr4Fit fit_bblr4(const Dataset& train, const SlaConfig& tmpl, int folds,
                   std::uint64_t seed) {
  Bblr3Fit base = fit_bblr3(train, tmpl, folds, seed);
  Bblr4Fit out{base.report, base.hyper, base.tuned.lambda, base.tuned.cfg, false};

  // Training rates of the base fit seed the learnable plateau.
  const IntVec pred =
      predict_labels(LinearModel{base.report.coefficients}, train);
  long tp = 0, fn = 0, tn = 0, fp = 0;
  for (Index i = 0; i < train.rows(); ++i) {
    if (train.y[i] == 1)
      (pred[i] == 1 ? tp : fn)++;
    else
      (pred[i] == 0 ? tn : fp)++;
  }
  const MixtureInit mi =
      asymptotic_init(static_cast<Scalar>(tp) / static_cast<Scalar>(tp + fn),
                      static_cast<Scalar>(tn) / static_cast<Scalar>(tn + fp));
  BBHyper h4 = base.hyper;
  h4.gamma = base.report.stages.back().gamma;
  h4.set_mixture(mi.mix_w, mi.theta_b);

  // Held-out fifth of the rows for every acceptance decision.
  const auto vsplits = make_splits(
      train.y, SplitPlan{seed ^ 0x9e3779b97f4a7c15ULL, 5, 1, true});
  const Dataset d80 = subset(train, vsplits[0].train_idx);
  const Dataset dval = subset(train, vsplits[0].test_idx);
  const Mat design80 = design_matrix(d80);
  const Mat designval = design_matrix(dval);

  const auto fit80 = [&](const HyperCandidate& c) {
    const Vec v0 = smooth_fit(design80, d80.y, c.h, base.tuned.gamma_init,
                              c.lambda, c.cfg);
    return find_sla_solution(d80, LinearModel{v0}, c.h,
                             Prior{GaussianPrior{c.lambda}}, c.cfg, seed);
  };
  const auto val_errors = [&](const FitReport& r) {
    return count_01_errors(designval * r.coefficients, dval.y);
  };

  HyperCandidate incumbent{base.hyper, base.tuned.lambda, base.tuned.cfg};
  FitReport inc80 = fit80(incumbent);
  int inc_err = val_errors(inc80);
  Vec w80 = inc80.coefficients;

  // A vanished hyper-gradient leaves nothing to refine.
  {
    const HyperGrad g = grad_hyper(d80, LinearModel{w80}, h4);
    if (g.d_mix_w == 0 && g.d_theta_b == 0 && g.d_gamma == 0) return out;
  }

  HyperCandidate cur{h4, incumbent.lambda, incumbent.cfg};
  bool improved_any = false;

  for (int round = 0; round < 5; ++round) {
    cur.h = ascend_hyper(d80, w80, cur.h);

    // Nearby penalty strengths, judged by held-out errors of smooth fits.
    {
      int best_err = std::numeric_limits<int>::max();
      Scalar best_lambda = cur.lambda;
      for (const Scalar cand :
           {cur.lambda, 0.5 * cur.lambda, 2.0 * cur.lambda}) {
        const Vec v =
            smooth_fit(design80, d80.y, cur.h, base.tuned.gamma_init, cand, cur.cfg);
        const int e = count_01_errors(designval * v, dval.y);
        if (e < best_err) {
          best_err = e;
          best_lambda = cand;
        }
      }
      cur.lambda = best_lambda;
    }

    // Endpoint bracket on the held-out fifth; the surviving fit doubles
    // as this round's candidate.
    const Scalar rg = cur.cfg.r_gamma;
    const auto eval_endpoints = [&](Scalar gmin, Scalar gmax) {
      HyperCandidate c = cur;
      c.cfg.gamma_min = gmin;
      c.cfg.gamma_max = gmax;
      FitReport r = fit80(c);
      return std::pair<int, FitReport>(val_errors(r), std::move(r));
    };

    Scalar gm = cur.cfg.gamma_min;
    auto [cand_err, cand_fit] = eval_endpoints(gm, gm * rg * rg);
    const Scalar orig_gm = gm;
    while (gm / rg >= 1e-3) {
      auto [e, r] = eval_endpoints(gm / rg, gm * rg);
      if (e >= cand_err) break;
      cand_err = e;
      cand_fit = std::move(r);
      gm /= rg;
    }
    if (gm == orig_gm) {
      while (gm * rg * rg * rg <= 2000.0 * (1 + 1e-12)) {
        auto [e, r] = eval_endpoints(gm * rg, gm * rg * rg * rg);
        if (e >= cand_err) break;
        cand_err = e;
        cand_fit = std::move(r);
        gm *= rg;
      }
    }
    Scalar gx = gm * rg * rg;
    while (gx * rg <= 2000.0 * (1 + 1e-12)) {
      auto [e, r] = eval_endpoints(gm, gx * rg);
      if (e >= cand_err) break;
      cand_err = e;
      cand_fit = std::move(r);
      gx *= rg;
    }
    cur.cfg.gamma_min = gm;
    cur.cfg.gamma_max = gx;

    if (cand_err < inc_err) {
      incumbent = cur;
      inc_err = cand_err;
      w80 = cand_fit.coefficients;
      improved_any = true;
    } else {
      break;
    }
  }

  if (improved_any) {
    const Mat design = design_matrix(train);
    const Vec v0 = smooth_fit(design, train.y, incumbent.h,
                              base.tuned.gamma_init, incumbent.lambda,
                              incumbent.cfg);
    out.report =
        find_sla_solution(train, LinearModel{v0}, incumbent.h,
                          Prior{GaussianPrior{incumbent.lambda}}, incumbent.cfg,
                          seed);
    out.hyper = incumbent.h;
    out.lambda = incumbent.lambda;
    out.cfg = incumbent.cfg;
    out.refined = true;
  }
  return out;
}

}  // namespace bblr
