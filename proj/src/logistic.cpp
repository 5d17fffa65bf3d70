#include "bblr/logistic.hpp"

#include <cmath>
#include <stdexcept>

namespace bblr {

namespace {

Scalar softplus(Scalar u) {
  return u > 0 ? u + std::log1p(std::exp(-u)) : std::log1p(std::exp(u));
}

Scalar logistic(Scalar u) {
  if (u >= 0) return 1.0 / (1.0 + std::exp(-u));
  const Scalar e = std::exp(u);
  return e / (1.0 + e);
}

}  // namespace

LogisticObjective::LogisticObjective(const Mat& design, const IntVec& labels,
                                     Scalar l2)
    : design_(design), labels_(labels), l2_(l2) {
  if (design.rows() != labels.size())
    throw std::invalid_argument("design rows and label count differ");
  if (l2 < 0) throw std::invalid_argument("l2 must be nonnegative");
}

Scalar LogisticObjective::value(const Vec& v) const {
  const Vec s = design_ * v;
  Scalar ll = 0;
  for (Index i = 0; i < s.size(); ++i)
    ll -= softplus(labels_[i] == 1 ? -s[i] : s[i]);
  return ll - 0.5 * l2_ * v.squaredNorm();
}

Vec LogisticObjective::gradient(const Vec& v) const {
  const Vec s = design_ * v;
  Vec r(s.size());
  for (Index i = 0; i < s.size(); ++i)
    r[i] = static_cast<Scalar>(labels_[i]) - logistic(s[i]);
  return design_.transpose() * r - l2_ * v;
}

}  // namespace bblr
