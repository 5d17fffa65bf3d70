#include "bblr/losses.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bblr/detail/plateau.hpp"

namespace bblr {

using detail::kDensityFloor;
using detail::neg_log_mu;
using detail::neg_log_one_minus_mu;

namespace {

void require_gamma(const LossSpec& spec) {
  const bool uses_gamma = spec.kind == LossKind::Sigmoid ||
                          spec.kind == LossKind::GenLogistic ||
                          spec.kind == LossKind::BetaBernoulli;
  if (uses_gamma && !(spec.gamma > 0))
    throw std::invalid_argument("loss: gamma must be positive");
}

}  // namespace

void PlateauConstants::validate() const {
  if (!(a >= 0.0) || !(b > 0.0) || !(a + b <= 1.0))
    throw std::invalid_argument("plateau constants need a >= 0, b > 0, a + b <= 1");
}

Scalar eval_loss(const LossSpec& spec, Scalar z) {
  require_gamma(spec);
  switch (spec.kind) {
    case LossKind::Logistic:
      return log1pexp(-z);
    case LossKind::Hinge:
      return std::max(0.0, 1.0 - z);
    case LossKind::ZeroOne:
      return z <= 0 ? 1.0 : 0.0;
    case LossKind::Sigmoid:
      return sigmoid(-spec.gamma * z);
    case LossKind::GenLogistic:
      return log1pexp(spec.gamma * (1.0 - z)) / spec.gamma;
    case LossKind::BetaBernoulli: {
      spec.plateau.validate();
      const Scalar u = spec.gamma * z;
      return spec.target >= 0 ? neg_log_mu(u, spec.plateau.a, spec.plateau.b)
                              : neg_log_one_minus_mu(u, spec.plateau.a, spec.plateau.b);
    }
  }
  throw std::logic_error("unreachable loss kind");
}

Scalar loss_grad(const LossSpec& spec, Scalar z) {
  require_gamma(spec);
  switch (spec.kind) {
    case LossKind::Logistic:
      return -sigmoid(-z);
    case LossKind::Hinge:
      return z < 1.0 ? -1.0 : 0.0;
    case LossKind::ZeroOne:
      return 0.0;
    case LossKind::Sigmoid:
      return -spec.gamma * sigmoid_deriv(spec.gamma * z);
    case LossKind::GenLogistic:
      return -sigmoid(spec.gamma * (1.0 - z));
    case LossKind::BetaBernoulli: {
      spec.plateau.validate();
      const Scalar a = spec.plateau.a;
      const Scalar b = spec.plateau.b;
      const Scalar u = spec.gamma * z;
      if (spec.target >= 0) {
        const Scalar mu = std::max(a + b * sigmoid(u), kDensityFloor);
        return -spec.gamma * b * sigmoid_deriv(u) / mu;
      }
      // 1 - mu equals (c + d e^{-u})/(1 + e^{-u}) for u >= 0 and
      // (d + c e^{u})/(1 + e^{u}) below, with c = 1-a, d = 1-a-b. The
      // grouped forms never subtract nearly equal terms, unlike the
      // direct 1 - a - b*sig(-u).
      const Scalar c = 1.0 - a;
      const Scalar d = 1.0 - a - b;
      const Scalar e = std::exp(-std::abs(u));
      const Scalar q = 1.0 + e;
      if (u < 0 && d == 0.0) return -spec.gamma * b / (q * c);
      const Scalar dens =
          std::max(u >= 0 ? c + d * e : d + c * e, kDensityFloor);
      return -spec.gamma * b * e / (q * dens);
    }
  }
  throw std::logic_error("unreachable loss kind");
}

Scalar eval_loss(LossKind kind, Scalar z, Scalar gamma) {
  return eval_loss(LossSpec{kind, gamma}, z);
}

Scalar loss_grad(LossKind kind, Scalar z, Scalar gamma) {
  return loss_grad(LossSpec{kind, gamma}, z);
}

}  // namespace bblr
