#pragma once

#include "bblr/dataset.hpp"
#include "bblr/hyper.hpp"
#include "bblr/types.hpp"

namespace bblr {

// Linear scorer over standardized features. weights has d + 1 entries;
// the last one is the intercept.
struct LinearModel {
  Vec weights;

  Index feature_dim() const { return weights.size() - 1; }
};

LinearModel zero_model(Index feature_dim);

// Feature matrix with a trailing all-ones column, so a model is a plain
// coefficient vector over design columns.
Mat design_matrix(const Dataset& ds);

Scalar score(const LinearModel& model, const Vec& x);

// a + b * sigmoid(gamma * score); lives in [a, a + b].
Scalar predict_probability(const LinearModel& model, const Vec& x,
                           const BBHyper& hyper);

struct Prediction {
  int label;    // 1 when score >= 0
  Scalar prob;  // plateau probability of class 1
};
Prediction predict(const LinearModel& model, const Vec& x, const BBHyper& hyper);

// Hard-threshold labels for every row.
IntVec predict_labels(const LinearModel& model, const Dataset& ds);

// Penalized Bernoulli log likelihood: sum_i log p(y_i | mu_i) minus
// (l2/2)||w||^2 over all coordinates, intercept included. Log terms are
// floored at log(1e-12).
Scalar log_likelihood(const Dataset& ds, const LinearModel& model,
                      const BBHyper& hyper, Scalar l2);

// Gradient of log_likelihood in the weights, intercept last.
Vec grad_weights(const Dataset& ds, const LinearModel& model,
                 const BBHyper& hyper, Scalar l2);

// Partials of the unpenalized log likelihood in the hyper-parameters.
struct HyperGrad {
  Scalar d_mix_w;
  Scalar d_theta_b;
  Scalar d_gamma;
};
HyperGrad grad_hyper(const Dataset& ds, const LinearModel& model,
                     const BBHyper& hyper);

}  // namespace bblr
