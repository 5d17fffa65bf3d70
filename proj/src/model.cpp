#include "bblr/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bblr/detail/plateau.hpp"

namespace bblr {

namespace {

// Per-example log terms never drop below this; keeps the objective
// finite when a plateau floor of 0 meets a confidently wrong score.
const Scalar kMinLogProb = std::log(1e-12);
constexpr Scalar kMinProb = 1e-12;

void check_dims(const Dataset& ds, const LinearModel& model) {
  if (model.weights.size() != ds.dims() + 1)
    throw std::invalid_argument("model size must be feature dim + 1");
}

}  // namespace

LinearModel zero_model(Index feature_dim) {
  return {Vec::Zero(feature_dim + 1)};
}

Mat design_matrix(const Dataset& ds) {
  Mat d(ds.rows(), ds.dims() + 1);
  d.leftCols(ds.dims()) = ds.x;
  d.col(ds.dims()).setOnes();
  return d;
}

Scalar score(const LinearModel& model, const Vec& x) {
  if (model.weights.size() != x.size() + 1)
    throw std::invalid_argument("model size must be feature dim + 1");
  return model.weights.head(x.size()).dot(x) + model.weights(x.size());
}

Scalar predict_probability(const LinearModel& model, const Vec& x,
                           const BBHyper& hyper) {
  return hyper.floor_a() +
         hyper.span_b() * sigmoid(hyper.gamma * score(model, x));
}

Prediction predict(const LinearModel& model, const Vec& x, const BBHyper& hyper) {
  const Scalar s = score(model, x);
  return {s >= 0 ? 1 : 0,
          hyper.floor_a() + hyper.span_b() * sigmoid(hyper.gamma * s)};
}

IntVec predict_labels(const LinearModel& model, const Dataset& ds) {
  check_dims(ds, model);
  Vec s = ds.x * model.weights.head(ds.dims());
  s.array() += model.weights(ds.dims());
  IntVec out(ds.rows());
  for (Index i = 0; i < ds.rows(); ++i) out[i] = s[i] >= 0 ? 1 : 0;
  return out;
}

Scalar log_likelihood(const Dataset& ds, const LinearModel& model,
                      const BBHyper& hyper, Scalar l2) {
  check_dims(ds, model);
  hyper.validate();
  const Scalar a = hyper.floor_a();
  const Scalar b = hyper.span_b();

  Vec s = ds.x * model.weights.head(ds.dims());
  s.array() += model.weights(ds.dims());

  Scalar ll = 0;
  for (Index i = 0; i < ds.rows(); ++i) {
    // neg_log_one_minus_mu takes the margin-scaled argument, and the
    // margin of a negative example is the negated score.
    const Scalar u = hyper.gamma * s[i];
    const Scalar log_term = ds.y[i] == 1
                                ? -detail::neg_log_mu(u, a, b)
                                : -detail::neg_log_one_minus_mu(-u, a, b);
    ll += std::max(log_term, kMinLogProb);
  }
  return ll - 0.5 * l2 * model.weights.squaredNorm();
}

Vec grad_weights(const Dataset& ds, const LinearModel& model,
                 const BBHyper& hyper, Scalar l2) {
  check_dims(ds, model);
  hyper.validate();
  const Scalar a = hyper.floor_a();
  const Scalar b = hyper.span_b();
  const Scalar g = hyper.gamma;

  Vec s = ds.x * model.weights.head(ds.dims());
  s.array() += model.weights(ds.dims());

  Vec r(ds.rows());
  for (Index i = 0; i < ds.rows(); ++i) {
    const Scalar u = g * s[i];
    const Scalar mu =
        std::clamp(a + b * sigmoid(u), kMinProb, 1.0 - kMinProb);
    const Scalar q = ds.y[i] == 1 ? 1.0 / mu : -1.0 / (1.0 - mu);
    r[i] = q * g * b * sigmoid_deriv(u);
  }

  Vec grad(model.weights.size());
  grad.head(ds.dims()) = ds.x.transpose() * r;
  grad(ds.dims()) = r.sum();
  grad -= l2 * model.weights;
  return grad;
}

HyperGrad grad_hyper(const Dataset& ds, const LinearModel& model,
                     const BBHyper& hyper) {
  check_dims(ds, model);
  hyper.validate();
  const Scalar a = hyper.floor_a();
  const Scalar b = hyper.span_b();
  const Scalar g = hyper.gamma;

  Vec s = ds.x * model.weights.head(ds.dims());
  s.array() += model.weights(ds.dims());

  HyperGrad out{0, 0, 0};
  for (Index i = 0; i < ds.rows(); ++i) {
    const Scalar u = g * s[i];
    const Scalar sig = sigmoid(u);
    const Scalar mu = std::clamp(a + b * sig, kMinProb, 1.0 - kMinProb);
    const Scalar q = ds.y[i] == 1 ? 1.0 / mu : -1.0 / (1.0 - mu);
    out.d_mix_w += q * (hyper.theta_b - sig);
    out.d_theta_b += q * hyper.mix_w;
    out.d_gamma += q * (1.0 - hyper.mix_w) * sigmoid_deriv(u) * s[i];
  }
  return out;
}

}  // namespace bblr
