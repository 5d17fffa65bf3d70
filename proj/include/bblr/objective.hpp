#pragma once

#include "bblr/hyper.hpp"
#include "bblr/prior.hpp"
#include "bblr/types.hpp"

namespace bblr {

namespace detail {

// Memoizes design * v so that single-coordinate probes cost one axpy
// over rows instead of a full matrix product.
class ScoreCache {
 public:
  explicit ScoreCache(const Mat& design) : design_(design) {}

  const Vec& scores(const Vec& v) const {
    if (cached_v_.size() != v.size() || cached_v_ != v) {
      cached_v_ = v;
      scores_ = design_ * v;
    }
    return scores_;
  }

  // scores(v) + step * column i; valid until the next call.
  const Vec& scores_shifted(const Vec& v, Index i, Scalar step) const {
    scores(v);
    probe_ = scores_ + step * design_.col(i);
    return probe_;
  }

  void invalidate() { cached_v_.resize(0); }
  const Mat& design() const { return design_; }

 private:
  const Mat& design_;
  mutable Vec cached_v_;
  mutable Vec scores_;
  mutable Vec probe_;
};

}  // namespace detail

// Penalized Beta-Bernoulli log likelihood over a fixed design matrix
// (features plus intercept column, or a Gram matrix plus intercept).
// All entry points are written for a maximizer.
class TrainObjective {
 public:
  // design and labels must outlive this object.
  TrainObjective(const Mat& design, const IntVec& labels, BBHyper hyper,
                 Prior prior);

  Index dim() const { return cache_.design().cols(); }
  Scalar value(const Vec& v) const;
  Vec gradient(const Vec& v) const;
  // value of v with coordinate i shifted by step; O(rows), no allocation.
  Scalar value_shifted(const Vec& v, Index i, Scalar step) const;

  void set_gamma(Scalar gamma);
  Scalar gamma() const { return hyper_.gamma; }
  const BBHyper& hyper() const { return hyper_; }
  void set_hyper(const BBHyper& hyper);
  const Prior& prior() const { return prior_; }
  void set_prior(Prior prior);
  // True when the prior is the sparsity mixture.
  bool sparse_mode() const;

  // Hard-threshold training errors at v.
  int train01(const Vec& v) const;

 private:
  Scalar data_term(const Vec& scores) const;

  detail::ScoreCache cache_;
  const IntVec& labels_;
  BBHyper hyper_;
  Prior prior_;
};

// Penalized negative sigmoid-loss sum with an L2 term: value is
// -sum_i sigmoid(-gamma t_i s_i) - (l2/2)||v||^2, again for a maximizer.
class SigmoidSlaObjective {
 public:
  SigmoidSlaObjective(const Mat& design, const IntVec& labels, Scalar gamma,
                      Scalar l2);

  Index dim() const { return cache_.design().cols(); }
  Scalar value(const Vec& v) const;
  Vec gradient(const Vec& v) const;
  Scalar value_shifted(const Vec& v, Index i, Scalar step) const;

  void set_gamma(Scalar gamma);
  Scalar gamma() const { return gamma_; }

  int train01(const Vec& v) const;

 private:
  Scalar data_term(const Vec& scores) const;

  detail::ScoreCache cache_;
  const IntVec& labels_;
  Scalar gamma_;
  Scalar l2_;
};

int count_01_errors(const Vec& scores, const IntVec& labels);

}  // namespace bblr
