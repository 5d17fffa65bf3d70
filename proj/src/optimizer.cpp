#include "bblr/optimizer.hpp"

#include <cmath>
#include <stdexcept>

#include "bblr/objective.hpp"

namespace bblr {

void SlaConfig::validate() const {
  if (!(r0 > 0) || !(eps_s0 > 0))
    throw std::invalid_argument("probe range and resolution must be positive");
  if (!(gamma_min > 0) || !(gamma_max >= gamma_min))
    throw std::invalid_argument("need 0 < gamma_min <= gamma_max");
  if (!(r_gamma > 1))
    throw std::invalid_argument("gamma multiplier must exceed 1");
  if (!(r_r > 0) || !(r_eps > 0))
    throw std::invalid_argument("range and resolution decay must be positive");
  if (!(rg_max > 0) || !(rg_min > 0) || rg_min > rg_max)
    throw std::invalid_argument("need 0 < rg_min <= rg_max");
  if (!(r_g > 0) || !(r_g < 1))
    throw std::invalid_argument("ascent rate decay must lie in (0, 1)");
  if (!(eps_l > 0) || !(eps_g > 0))
    throw std::invalid_argument("stopping thresholds must be positive");
}

std::vector<Scalar> probe_steps(Scalar r, Scalar eps_s) {
  if (!(r > 0) || !(eps_s > 0))
    throw std::invalid_argument("probe range and resolution must be positive");
  const auto k_max = static_cast<long>(std::floor(r / eps_s + 1e-9));
  std::vector<Scalar> out;
  out.reserve(static_cast<std::size_t>(2 * k_max + 2));
  for (long k = 1; k <= k_max; ++k) {
    const Scalar step = static_cast<Scalar>(k) * eps_s;
    out.push_back(step);
    out.push_back(-step);
  }
  if (r - static_cast<Scalar>(k_max) * eps_s > 1e-9 * std::max(1.0, r)) {
    out.push_back(r);
    out.push_back(-r);
  }
  return out;
}

FitReport find_sla_solution(const Dataset& train, const LinearModel& model0,
                            const BBHyper& hyper, const Prior& prior,
                            const SlaConfig& cfg, std::uint64_t seed) {
  if (model0.weights.size() != train.dims() + 1)
    throw std::invalid_argument("model size must be feature dim + 1");
  const Mat design = design_matrix(train);
  TrainObjective obj(design, train.y, hyper, prior);
  return find_sla_solution(obj, model0.weights, cfg, seed);
}

}  // namespace bblr
