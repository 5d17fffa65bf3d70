#pragma once

#include "bblr/types.hpp"

namespace bblr {

// Self-contained L2 logistic regression likelihood, written directly in
// softplus form. It deliberately shares no code with the plateau
// likelihood so the two act as independent cross-checks where they
// coincide.
class LogisticObjective {
 public:
  // design rows pair with labels in {0, 1}; both must outlive this object.
  LogisticObjective(const Mat& design, const IntVec& labels, Scalar l2);

  Index dim() const { return design_.cols(); }
  Scalar value(const Vec& v) const;
  Vec gradient(const Vec& v) const;

 private:
  const Mat& design_;
  const IntVec& labels_;
  Scalar l2_;
};

}  // namespace bblr
