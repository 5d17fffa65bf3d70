#pragma once

#include "bblr/types.hpp"

namespace bblr {

enum class LossKind { Logistic, Hinge, ZeroOne, Sigmoid, GenLogistic, BetaBernoulli };

// Floor and span of the Beta-Bernoulli probability: mu ranges over [a, a+b].
struct PlateauConstants {
  Scalar a = 0.0;
  Scalar b = 1.0;

  // Throws std::invalid_argument unless a >= 0, b > 0, a + b <= 1.
  void validate() const;
};

struct LossSpec {
  LossKind kind = LossKind::Logistic;
  Scalar gamma = 1.0;
  PlateauConstants plateau{};  // BetaBernoulli only
  int target = +1;             // BetaBernoulli only; +1 or -1
};

// Loss value at margin z. z is the margin t * (w . x), so every kind is
// non-increasing in z. Stable for |gamma * z| up to 1e4 and beyond.
Scalar eval_loss(const LossSpec& spec, Scalar z);

// dL/dz. Kinks use the conventions: hinge is 0 at z = 1, zero-one is 0
// everywhere.
Scalar loss_grad(const LossSpec& spec, Scalar z);

// Shorthand for the kinds that carry no plateau state.
Scalar eval_loss(LossKind kind, Scalar z, Scalar gamma = 1.0);
Scalar loss_grad(LossKind kind, Scalar z, Scalar gamma = 1.0);

}  // namespace bblr
