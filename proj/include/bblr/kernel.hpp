#pragma once

#include "bblr/hyper.hpp"
#include "bblr/prior.hpp"
#include "bblr/types.hpp"

namespace bblr {

enum class KernelKind { Rbf };

struct KernelSpec {
  KernelKind kind = KernelKind::Rbf;
  Scalar sigma = 1.0;  // RBF bandwidth

  void validate() const;
};

Scalar kernel_eval(const KernelSpec& spec, const Vec& x, const Vec& z);

// Symmetric kernel matrix over the rows of pts; unit diagonal for RBF.
Mat gram(const KernelSpec& spec, const Mat& pts);

// rows(a) x rows(b) matrix of k(a_i, b_j).
Mat cross_gram(const KernelSpec& spec, const Mat& a, const Mat& b);

// Median Euclidean distance over all point pairs; the customary
// bandwidth reference. Returns 1 when there are fewer than two points.
Scalar median_pairwise_distance(const Mat& pts);

// Kernel expansion over stored training points. alphas has one
// coefficient per point plus a trailing intercept.
struct KernelModel {
  Vec alphas;
  Mat train_points;
  KernelSpec spec;

  Index point_count() const { return train_points.rows(); }
  Scalar score(const Vec& x) const;
};

IntVec kernel_predict_labels(const KernelModel& model, const Mat& pts);

// Gradient of the plateau log likelihood plus log prior in the
// expansion coefficients, over the centered design [gram | 1].
Vec grad_alphas(const Mat& gram_design, const IntVec& labels, const Vec& alphas,
                const BBHyper& hyper, const Prior& prior);

// Number of coefficients with |a_j| > tau * max_j |a_j|. Zero for an
// all-zero vector.
Index support_count(const Vec& coeffs, Scalar tau = 1e-4);
// Counts the per-point coefficients only; the intercept is not one.
Index support_count(const KernelModel& model, Scalar tau = 1e-4);

}  // namespace bblr
