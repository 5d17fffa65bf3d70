#include "bblr/hyper.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bblr {

namespace {
constexpr Scalar kRateCap = 1.0 - 1e-6;
constexpr Scalar kMixFloor = 1e-4;
}  // namespace

BBHyper BBHyper::from_counts(Scalar alpha, Scalar beta, Scalar n, Scalar gamma) {
  BBHyper h;
  h.gamma = gamma;
  h.set_counts(alpha, beta, n);
  return h;
}

BBHyper BBHyper::from_mixture(Scalar mix_w, Scalar theta_b, Scalar gamma, Scalar n_ref) {
  BBHyper h;
  h.gamma = gamma;
  h.n = n_ref;
  h.set_mixture(mix_w, theta_b);
  return h;
}

void BBHyper::set_counts(Scalar a, Scalar b, Scalar n_new) {
  if (!(a > 0) || !(b > 0) || !(n_new > 0))
    throw std::invalid_argument("BBHyper: alpha, beta, n must be positive");
  alpha = a;
  beta = b;
  n = n_new;
  mix_w = (alpha + beta) / (alpha + beta + n);
  theta_b = alpha / (alpha + beta);
}

void BBHyper::set_mixture(Scalar w, Scalar theta) {
  if (!(w >= 0) || !(w < 1) || !(theta > 0) || !(theta < 1))
    throw std::invalid_argument("BBHyper: need mix_w in [0,1), theta_b in (0,1)");
  mix_w = w;
  theta_b = theta;
  // alpha + beta solves w = s / (s + n) for the current n.
  const Scalar s = n * w / (1.0 - w);
  alpha = std::max(theta * s, 1e-12);
  beta = std::max(s - alpha, 1e-12);
}

void BBHyper::validate() const {
  if (!(gamma > 0)) throw std::invalid_argument("BBHyper: gamma must be positive");
  if (!(mix_w >= 0) || !(mix_w < 1))
    throw std::invalid_argument("BBHyper: mix_w out of [0,1)");
  if (!(theta_b > 0) || !(theta_b < 1))
    throw std::invalid_argument("BBHyper: theta_b out of (0,1)");
  plateau().validate();
}

BBHyper empirical_hyper(const IntVec& labels, Scalar gamma) {
  Scalar pos = 0;
  for (Index i = 0; i < labels.size(); ++i) pos += labels[i];
  const auto n = static_cast<Scalar>(labels.size());
  if (!(pos > 0) || !(n - pos > 0))
    throw std::invalid_argument("empirical_hyper needs both classes present");
  return BBHyper::from_counts(pos, n - pos, n, gamma);
}

MixtureInit asymptotic_init(Scalar tpr, Scalar tnr) {
  const Scalar p = std::clamp(tpr, 0.0, kRateCap);
  const Scalar q = std::clamp(tnr, 0.0, kRateCap);
  Scalar w = 2.0 - (q + p);
  Scalar theta = (1.0 - q) / w;
  w = std::clamp(w, kMixFloor, 1.0 - kMixFloor);
  theta = std::clamp(theta, kMixFloor, 1.0 - kMixFloor);
  return {w, theta};
}

}  // namespace bblr
