#pragma once

#include "bblr/losses.hpp"
#include "bblr/types.hpp"

namespace bblr {

// Beta-Bernoulli hyper-parameter bundle. The pseudo-count view
// (alpha, beta, n) and the mixture view (mix_w, theta_b) are kept
// consistent: mix_w = (alpha+beta)/(alpha+beta+n) and
// theta_b = alpha/(alpha+beta). Mutate only through the setters.
struct BBHyper {
  Scalar alpha = 1.0;
  Scalar beta = 1.0;
  Scalar n = 100.0;
  Scalar mix_w = 2.0 / 102.0;
  Scalar theta_b = 0.5;
  Scalar gamma = 1.0;

  static BBHyper from_counts(Scalar alpha, Scalar beta, Scalar n, Scalar gamma = 1.0);
  // Inverts the mixture view at the reference sample size n_ref.
  static BBHyper from_mixture(Scalar mix_w, Scalar theta_b, Scalar gamma = 1.0,
                              Scalar n_ref = 100.0);

  void set_counts(Scalar alpha, Scalar beta, Scalar n);
  // Recomputes (alpha, beta) holding n fixed.
  void set_mixture(Scalar mix_w, Scalar theta_b);

  Scalar floor_a() const { return mix_w * theta_b; }
  Scalar span_b() const { return 1.0 - mix_w; }
  PlateauConstants plateau() const { return {floor_a(), span_b()}; }

  // Throws std::invalid_argument on out-of-domain fields.
  void validate() const;
};

// Closed-form (mix_w, theta_b) from training true positive/negative rates:
// mix_w = 2 - (tnr + tpr), theta_b = (1 - tnr) / (2 - (tnr + tpr)).
// Rates are clamped to at most 1 - 1e-6 and the outputs to
// mix_w in [1e-4, 1 - 1e-4], theta_b in (0, 1).
struct MixtureInit {
  Scalar mix_w;
  Scalar theta_b;
};
MixtureInit asymptotic_init(Scalar tpr, Scalar tnr);

// Pseudo-counts matched to the label frequencies: alpha = positives,
// beta = negatives, n = total, giving mix_w = 1/2 and theta_b equal to
// the positive fraction.
BBHyper empirical_hyper(const IntVec& labels, Scalar gamma = 1.0);

}  // namespace bblr
