#pragma once

#include <cstdint>
#include <vector>

#include "bblr/dataset.hpp"
#include "bblr/hyper.hpp"
#include "bblr/model.hpp"
#include "bblr/optimizer.hpp"
#include "bblr/prior.hpp"

namespace bblr {

// Ascent-only fit of the plateau likelihood from zeros at a fixed gamma.
Vec smooth_fit(const Mat& design, const IntVec& labels, const BBHyper& hyper,
               Scalar gamma, Scalar lambda, const SlaConfig& cfg);

struct GridInit {
  Scalar lambda = 1e-2;
  Scalar gamma_init = 1.0;
  Vec model0;  // smooth fit on the full data at the winning cell
};

// Cross-validated (lambda, gamma) grid over smooth fits from zeros.
// Ties prefer the smaller lambda, then the smaller gamma.
GridInit grid_init(const Mat& design, const IntVec& labels, const BBHyper& hyper,
                   const std::vector<Scalar>& lambdas,
                   const std::vector<Scalar>& gamma_inits, const SlaConfig& cfg,
                   int folds, std::uint64_t seed);

// Same grid for the sigmoid-loss objective.
GridInit grid_init_sigmoid(const Mat& design, const IntVec& labels,
                           const std::vector<Scalar>& lambdas,
                           const std::vector<Scalar>& gamma_inits,
                           const SlaConfig& cfg, int folds, std::uint64_t seed);

struct SlamSpace {
  std::vector<Scalar> lambdas = {1e-4, 1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0};
  std::vector<Scalar> gamma_inits = {0.5, 1.0, 2.0, 4.0, 8.0};
  std::vector<Scalar> gamma_rates = {2.0, 5.0, 10.0};
};

struct SlamResult {
  Scalar lambda = 1e-2;
  Scalar gamma_init = 1.0;
  SlaConfig cfg{};
  LinearModel model0;
};

// Meta-optimization of the annealing schedule by k-fold validation:
// (lambda, gamma) grid first, then the gamma growth rate, then a
// bracket search of the annealing endpoints (the ceiling is capped at
// 2000). Touches only the rows it is given. A search space of single
// values short-circuits to those values plus the smooth fit.
SlamResult slam_tune(const Dataset& train, const BBHyper& hyper,
                     const SlamSpace& space, const SlaConfig& tmpl, int folds,
                     std::uint64_t seed);

struct Bblr3Fit {
  FitReport report;
  SlamResult tuned;
  BBHyper hyper;
};

// Pseudo-count hyper-parameters from the class counts, schedule from
// slam_tune, then the annealed fit.
Bblr3Fit fit_bblr3(const Dataset& train, const SlaConfig& tmpl, int folds,
                   std::uint64_t seed);

struct Bblr4Fit {
  FitReport report;
  BBHyper hyper;
  Scalar lambda = 1e-2;
  SlaConfig cfg{};
  bool refined = false;  // false when the base fit was kept
};

// Extends fit_bblr3 with hyper-parameter learning: (mix_w, theta_b)
// start at asymptotic_init of the base fit's training rates and move
// along grad_hyper, lambda and the annealing endpoints are re-tuned on
// a held-out fifth of the rows, and every candidate must beat the
// incumbent's held-out accuracy to be kept (at most 5 rounds). The
// winner is refit on all rows; when nothing wins, the base fit is
// returned unchanged.
Bblr4Fit fit_bblr4(const Dataset& train, const SlaConfig& tmpl, int folds,
                   std::uint64_t seed);

}  // namespace bblr
