#pragma once

#include <algorithm>
#include <cmath>

#include "bblr/types.hpp"

namespace bblr::detail {

// Keeps log arguments positive when a = 0 and the plateau saturates.
constexpr Scalar kDensityFloor = 1e-300;

// -log(a + b * sigmoid(u)), evaluated so that neither exp overflows.
inline Scalar neg_log_mu(Scalar u, Scalar a, Scalar b) {
  if (u >= 0) {
    const Scalar e = std::exp(-u);
    return std::log1p(e) - std::log(std::max((a + b) + a * e, kDensityFloor));
  }
  const Scalar e = std::exp(u);
  return std::log1p(e) - std::log(std::max(a + (a + b) * e, kDensityFloor));
}

// -log(1 - a - b * sigmoid(-u)); the complement plateau for the negative class.
inline Scalar neg_log_one_minus_mu(Scalar u, Scalar a, Scalar b) {
  const Scalar c = 1.0 - a;
  const Scalar d = 1.0 - a - b;
  if (u >= 0) {
    const Scalar e = std::exp(-u);
    return std::log1p(e) - std::log(std::max(c + d * e, kDensityFloor));
  }
  const Scalar e = std::exp(u);
  return std::log1p(e) - std::log(std::max(d + c * e, kDensityFloor));
}

}  // namespace bblr::detail
