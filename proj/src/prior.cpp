#include "bblr/prior.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bblr {

namespace {

constexpr Scalar kSigmaFloor = 1e-6;
constexpr Scalar kLaplaceFloor = 1e-8;
constexpr Scalar kLaplaceShrinkCap = 0.5;  // b_l may at most halve per update
const Scalar kHalfLog2Pi = 0.5 * std::log(2.0 * M_PI);

Scalar log_gauss(Scalar a, Scalar sigma) {
  return -0.5 * (a / sigma) * (a / sigma) - std::log(sigma) - kHalfLog2Pi;
}

Scalar log_laplace(Scalar a, Scalar b) {
  return -std::abs(a) / b - std::log(2.0 * b);
}

Scalar log_sum_exp2(Scalar x, Scalar y) {
  const Scalar m = std::max(x, y);
  return m + std::log1p(std::exp(std::min(x, y) - m));
}

Scalar sign0(Scalar a) { return a > 0 ? 1.0 : (a < 0 ? -1.0 : 0.0); }

}  // namespace

void MixturePrior::validate() const {
  if (!(pi_g >= 0) || !(pi_l >= 0) || std::abs(pi_g + pi_l - 1.0) > 1e-9)
    throw std::invalid_argument("mixture masses must be nonnegative and sum to 1");
  if (!(sigma_g > 0) || !(b_l > 0))
    throw std::invalid_argument("mixture scales must be positive");
}

Scalar log_prior_term(const Prior& prior, Scalar a) {
  if (const auto* g = std::get_if<GaussianPrior>(&prior))
    return -0.5 * g->lambda * a * a;
  const auto& m = std::get<MixturePrior>(prior);
  return log_sum_exp2(std::log(m.pi_g) + log_gauss(a, m.sigma_g),
                      std::log(m.pi_l) + log_laplace(a, m.b_l));
}

Scalar log_prior(const Prior& prior, const Vec& coeffs) {
  if (const auto* g = std::get_if<GaussianPrior>(&prior))
    return -0.5 * g->lambda * coeffs.squaredNorm();
  Scalar sum = 0;
  for (Index i = 0; i < coeffs.size(); ++i)
    sum += log_prior_term(prior, coeffs[i]);
  return sum;
}

Scalar grad_prior_term(const Prior& prior, Scalar a) {
  if (const auto* g = std::get_if<GaussianPrior>(&prior)) return -g->lambda * a;
  const auto& m = std::get<MixturePrior>(prior);
  const Scalar lg = std::log(m.pi_g) + log_gauss(a, m.sigma_g);
  const Scalar ll = std::log(m.pi_l) + log_laplace(a, m.b_l);
  const Scalar tot = log_sum_exp2(lg, ll);
  const Scalar p_g = std::exp(lg - tot);
  const Scalar p_l = std::exp(ll - tot);
  return -(a / (m.sigma_g * m.sigma_g)) * p_g - (sign0(a) / m.b_l) * p_l;
}

Vec grad_prior(const Prior& prior, const Vec& coeffs) {
  if (const auto* g = std::get_if<GaussianPrior>(&prior))
    return (-g->lambda) * coeffs;
  Vec out(coeffs.size());
  for (Index i = 0; i < coeffs.size(); ++i)
    out[i] = grad_prior_term(prior, coeffs[i]);
  return out;
}

MixturePrior hard_em_update(const Vec& coeffs, const MixturePrior& prev) {
  prev.validate();
  const Index m = coeffs.size();
  if (m == 0) throw std::invalid_argument("hard_em_update on empty coefficients");

  MixturePrior next = prev;
  next.assign.assign(static_cast<std::size_t>(m), Cluster::Gauss);

  const Scalar lpg = std::log(prev.pi_g);
  const Scalar lpl = std::log(prev.pi_l);
  Index n_g = 0;
  Index n_l_live = 0;  // Laplace members that are not exactly zero
  Scalar sq_g = 0;     // sum a^2 over the Gauss cluster
  Scalar abs_l = 0;    // sum |a| over the live Laplace members
  for (Index i = 0; i < m; ++i) {
    const Scalar a = coeffs[i];
    const bool gauss = lpg + log_gauss(a, prev.sigma_g) >=
                       lpl + log_laplace(a, prev.b_l);
    if (gauss) {
      next.assign[static_cast<std::size_t>(i)] = Cluster::Gauss;
      ++n_g;
      sq_g += a * a;
    } else {
      next.assign[static_cast<std::size_t>(i)] = Cluster::Laplace;
      if (a != 0.0) {
        ++n_l_live;
        abs_l += std::abs(a);
      }
    }
  }
  const Index n_l = m - n_g;

  // M step. The Gauss component is zero-mean, so its scale update is the
  // cluster rms.
  const Scalar mass_floor = 1.0 / static_cast<Scalar>(m);
  if (n_g == 0) {
    next.pi_g = mass_floor;
    next.pi_l = 1.0 - mass_floor;
    next.sigma_g = prev.sigma_g;
  } else {
    next.pi_g = static_cast<Scalar>(n_g) / static_cast<Scalar>(m);
    next.sigma_g =
        std::max(std::sqrt(sq_g / static_cast<Scalar>(n_g)), kSigmaFloor);
  }
  if (n_l == 0) {
    next.pi_l = mass_floor;
    next.pi_g = 1.0 - mass_floor;
    next.b_l = prev.b_l;
  } else {
    if (n_g > 0) next.pi_l = static_cast<Scalar>(n_l) / static_cast<Scalar>(m);
    // Exact zeros carry no scale information: the shape update tracks
    // the members still riding toward zero, so the needle narrows only
    // as fast as they actually shrink. The shrink cap damps the update
    // on top of that: hard assignment moves much faster than descent,
    // and an uncapped scale would lock the clusters in before borderline
    // coefficients get a chance to cross over.
    const Scalar target = n_l_live == 0
                              ? prev.b_l
                              : abs_l / static_cast<Scalar>(n_l_live);
    next.b_l =
        std::max({target, kLaplaceShrinkCap * prev.b_l, kLaplaceFloor});
  }
  next.validate();
  return next;
}

MixturePrior init_mixture(const Vec& coeffs) {
  const Index m = coeffs.size();
  if (m == 0) throw std::invalid_argument("init_mixture on empty coefficients");

  // Balanced start: the half of the coefficients nearest zero seeds the
  // Laplace cluster, the rest seed the Gauss cluster, and each scale is
  // that half's own moment. The initial Laplace share is the control
  // that trades sparsity against accuracy; an even split is the neutral
  // setting. Seeding from a posterior at some guessed scale instead
  // would make the share an accident of the guess.
  std::vector<Scalar> mag(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i)
    mag[static_cast<std::size_t>(i)] = std::abs(coeffs[i]);
  std::vector<Scalar> sorted = mag;
  std::nth_element(sorted.begin(), sorted.begin() + (m / 2), sorted.end());
  const Scalar split = sorted[static_cast<std::size_t>(m / 2)];

  MixturePrior p;
  p.pi_g = 0.5;
  p.pi_l = 0.5;
  p.assign.assign(static_cast<std::size_t>(m), Cluster::Gauss);
  Index n_l = 0;
  for (Index i = 0; i < m && n_l < m / 2; ++i) {
    // Strict compare keeps ties at the split value in the Gauss half;
    // the index cap keeps a run of equal magnitudes from tipping the
    // balance past even.
    if (mag[static_cast<std::size_t>(i)] < split) {
      p.assign[static_cast<std::size_t>(i)] = Cluster::Laplace;
      ++n_l;
    }
  }
  if (n_l == 0 && m > 1) {
    // All magnitudes tie; split by index instead.
    for (; n_l < m / 2; ++n_l) p.assign[static_cast<std::size_t>(n_l)] = Cluster::Laplace;
  }

  Scalar abs_l = 0, sq_g = 0;
  Index n_g = 0;
  for (Index i = 0; i < m; ++i) {
    if (p.assign[static_cast<std::size_t>(i)] == Cluster::Laplace)
      abs_l += mag[static_cast<std::size_t>(i)];
    else {
      sq_g += coeffs[i] * coeffs[i];
      ++n_g;
    }
  }
  p.sigma_g = std::max(
      n_g > 0 ? std::sqrt(sq_g / static_cast<Scalar>(n_g))
              : std::sqrt(coeffs.squaredNorm() / static_cast<Scalar>(m)),
      kSigmaFloor);
  p.b_l = std::max(n_l > 0 ? abs_l / static_cast<Scalar>(n_l)
                           : 0.1 * coeffs.cwiseAbs().mean(),
                   kLaplaceFloor);
  return p;
}

}  // namespace bblr
