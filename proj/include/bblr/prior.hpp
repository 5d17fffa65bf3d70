#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "bblr/types.hpp"

namespace bblr {

// Zero-mean isotropic Gaussian up to a constant: log prior is
// -(lambda/2)||v||^2.
struct GaussianPrior {
  Scalar lambda = 0.0;
};

enum class Cluster : std::uint8_t { Gauss = 0, Laplace = 1 };

// Two-component pointwise prior: each coefficient is Gaussian
// (wide, keeps informative coefficients) or Laplace (narrow, pulls the
// rest toward zero). assign records the current hard cluster choice and
// is refreshed by hard_em_update.
struct MixturePrior {
  Scalar pi_g = 0.5;
  Scalar pi_l = 0.5;
  Scalar sigma_g = 1.0;
  Scalar b_l = 0.1;
  std::vector<Cluster> assign;

  void validate() const;
};

using Prior = std::variant<GaussianPrior, MixturePrior>;

// One coordinate's additive contribution to the log prior. For the
// mixture this is log(pi_g N(a; 0, sigma_g^2) + pi_l Lap(a; 0, b_l)),
// normalization constants included; computed in log space.
Scalar log_prior_term(const Prior& prior, Scalar a);

Scalar log_prior(const Prior& prior, const Vec& coeffs);

// d log prior / d coeffs. The Laplace kink uses d|a|/da = 0 at a = 0, so
// the mixture gradient vanishes at the origin.
Vec grad_prior(const Prior& prior, const Vec& coeffs);
Scalar grad_prior_term(const Prior& prior, Scalar a);

// One hard-EM step: reassign each coefficient to its most probable
// component, then refit pi, sigma_g (zero-mean rms of the Gauss cluster,
// floored at 1e-6) and b_l (mean |a| of the Laplace cluster, floored at
// 1e-8). An empty cluster keeps its previous scale and gets a mixing
// mass floor of 1/#coeffs.
MixturePrior hard_em_update(const Vec& coeffs, const MixturePrior& prev);

// Starting mixture for a coefficient vector: equal mixing masses,
// sigma_g from the coefficients' rms, b_l = 0.1 * mean |a|, assignments
// from one posterior pass.
MixturePrior init_mixture(const Vec& coeffs);

}  // namespace bblr
