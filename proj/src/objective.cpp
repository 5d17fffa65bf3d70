#include "bblr/objective.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bblr/detail/plateau.hpp"

namespace bblr {

namespace {
const Scalar kMinLogProb = std::log(1e-12);
}

int count_01_errors(const Vec& scores, const IntVec& labels) {
  int errors = 0;
  for (Index i = 0; i < scores.size(); ++i)
    errors += (scores[i] >= 0 ? 1 : 0) != labels[i];
  return errors;
}

TrainObjective::TrainObjective(const Mat& design, const IntVec& labels,
                               BBHyper hyper, Prior prior)
    : cache_(design), labels_(labels), hyper_(hyper), prior_(std::move(prior)) {
  if (design.rows() != labels.size())
    throw std::invalid_argument("design rows and label count differ");
  hyper_.validate();
  if (const auto* m = std::get_if<MixturePrior>(&prior_)) m->validate();
}

Scalar TrainObjective::data_term(const Vec& scores) const {
  const Scalar a = hyper_.floor_a();
  const Scalar b = hyper_.span_b();
  const Scalar g = hyper_.gamma;
  Scalar sum = 0;
  for (Index i = 0; i < scores.size(); ++i) {
    // neg_log_one_minus_mu takes the margin-scaled argument, and the
    // margin of a negative example is the negated score.
    const Scalar u = g * scores[i];
    const Scalar log_term = labels_[i] == 1
                                ? -detail::neg_log_mu(u, a, b)
                                : -detail::neg_log_one_minus_mu(-u, a, b);
    sum += std::max(log_term, kMinLogProb);
  }
  return sum;
}

Scalar TrainObjective::value(const Vec& v) const {
  return data_term(cache_.scores(v)) + log_prior(prior_, v);
}

Vec TrainObjective::gradient(const Vec& v) const {
  const Scalar a = hyper_.floor_a();
  const Scalar b = hyper_.span_b();
  const Scalar g = hyper_.gamma;
  const Vec& s = cache_.scores(v);

  Vec r(s.size());
  for (Index i = 0; i < s.size(); ++i) {
    const Scalar u = g * s[i];
    const Scalar mu = std::clamp(a + b * sigmoid(u), 1e-12, 1.0 - 1e-12);
    const Scalar q = labels_[i] == 1 ? 1.0 / mu : -1.0 / (1.0 - mu);
    r[i] = q * g * b * sigmoid_deriv(u);
  }
  return cache_.design().transpose() * r + grad_prior(prior_, v);
}

Scalar TrainObjective::value_shifted(const Vec& v, Index i, Scalar step) const {
  const Scalar shifted_data = data_term(cache_.scores_shifted(v, i, step));
  const Scalar prior_delta =
      log_prior_term(prior_, v[i] + step) - log_prior_term(prior_, v[i]);
  return shifted_data + log_prior(prior_, v) + prior_delta;
}

void TrainObjective::set_gamma(Scalar gamma) {
  if (!(gamma > 0)) throw std::invalid_argument("gamma must be positive");
  hyper_.gamma = gamma;
}

void TrainObjective::set_hyper(const BBHyper& hyper) {
  hyper.validate();
  hyper_ = hyper;
}

void TrainObjective::set_prior(Prior prior) {
  if (const auto* m = std::get_if<MixturePrior>(&prior)) m->validate();
  prior_ = std::move(prior);
}

bool TrainObjective::sparse_mode() const {
  return std::holds_alternative<MixturePrior>(prior_);
}

int TrainObjective::train01(const Vec& v) const {
  return count_01_errors(cache_.scores(v), labels_);
}

SigmoidSlaObjective::SigmoidSlaObjective(const Mat& design, const IntVec& labels,
                                         Scalar gamma, Scalar l2)
    : cache_(design), labels_(labels), gamma_(gamma), l2_(l2) {
  if (design.rows() != labels.size())
    throw std::invalid_argument("design rows and label count differ");
  if (!(gamma > 0)) throw std::invalid_argument("gamma must be positive");
  if (l2 < 0) throw std::invalid_argument("l2 must be nonnegative");
}

Scalar SigmoidSlaObjective::data_term(const Vec& scores) const {
  Scalar sum = 0;
  for (Index i = 0; i < scores.size(); ++i) {
    const Scalar t = labels_[i] == 1 ? 1.0 : -1.0;
    sum -= sigmoid(-gamma_ * t * scores[i]);
  }
  return sum;
}

Scalar SigmoidSlaObjective::value(const Vec& v) const {
  return data_term(cache_.scores(v)) - 0.5 * l2_ * v.squaredNorm();
}

Vec SigmoidSlaObjective::gradient(const Vec& v) const {
  const Vec& s = cache_.scores(v);
  Vec r(s.size());
  for (Index i = 0; i < s.size(); ++i) {
    const Scalar t = labels_[i] == 1 ? 1.0 : -1.0;
    r[i] = gamma_ * t * sigmoid_deriv(gamma_ * t * s[i]);
  }
  return cache_.design().transpose() * r - l2_ * v;
}

Scalar SigmoidSlaObjective::value_shifted(const Vec& v, Index i,
                                          Scalar step) const {
  const Scalar shifted_data = data_term(cache_.scores_shifted(v, i, step));
  const Scalar vi = v[i];
  const Scalar penalty_delta =
      -0.5 * l2_ * ((vi + step) * (vi + step) - vi * vi);
  return shifted_data - 0.5 * l2_ * v.squaredNorm() + penalty_delta;
}

void SigmoidSlaObjective::set_gamma(Scalar gamma) {
  if (!(gamma > 0)) throw std::invalid_argument("gamma must be positive");
  gamma_ = gamma;
}

int SigmoidSlaObjective::train01(const Vec& v) const {
  return count_01_errors(cache_.scores(v), labels_);
}

}  // namespace bblr
