#pragma once

#include <Eigen/Dense>

#include <cmath>

namespace bblr {

using Scalar = double;
using Vec = Eigen::VectorX<Scalar>;
using Mat = Eigen::MatrixX<Scalar>;
using IntVec = Eigen::VectorX<int>;
using Index = Eigen::Index;

// Overflow-free standard sigmoid.
inline Scalar sigmoid(Scalar u) {
  if (u >= 0) {
    const Scalar e = std::exp(-u);
    return 1.0 / (1.0 + e);
  }
  const Scalar e = std::exp(u);
  return e / (1.0 + e);
}

// log(1 + exp(u)) without overflow for any u.
inline Scalar log1pexp(Scalar u) {
  return u > 0 ? u + std::log1p(std::exp(-u)) : std::log1p(std::exp(u));
}

// d/du sigmoid(u) = exp(-|u|) / (1 + exp(-|u|))^2; even in u.
inline Scalar sigmoid_deriv(Scalar u) {
  const Scalar e = std::exp(-std::abs(u));
  const Scalar q = 1.0 + e;
  return e / (q * q);
}

}  // namespace bblr
