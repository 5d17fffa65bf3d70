#include "bblr/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "bblr/objective.hpp"

namespace bblr {

void KernelSpec::validate() const {
  if (kind != KernelKind::Rbf) throw std::invalid_argument("unknown kernel kind");
  if (!(sigma > 0)) throw std::invalid_argument("kernel bandwidth must be positive");
}

Scalar kernel_eval(const KernelSpec& spec, const Vec& x, const Vec& z) {
  spec.validate();
  const Scalar d2 = (x - z).squaredNorm();
  return std::exp(-d2 / (2.0 * spec.sigma * spec.sigma));
}

namespace {

// Squared distances via the Gram identity, clamped at zero against
// cancellation.
Mat squared_distances(const Mat& a, const Mat& b) {
  const Vec an = a.rowwise().squaredNorm();
  const Vec bn = b.rowwise().squaredNorm();
  Mat d2 = -2.0 * (a * b.transpose());
  d2.colwise() += an;
  d2.rowwise() += bn.transpose();
  return d2.cwiseMax(0.0);
}

}  // namespace

Mat gram(const KernelSpec& spec, const Mat& pts) {
  spec.validate();
  Mat k = (-squared_distances(pts, pts) / (2.0 * spec.sigma * spec.sigma))
              .array()
              .exp();
  // Exact symmetry and unit diagonal, independent of rounding in the
  // distance identity.
  k = ((k + k.transpose()) * 0.5).eval();
  k.diagonal().setOnes();
  return k;
}

Mat cross_gram(const KernelSpec& spec, const Mat& a, const Mat& b) {
  spec.validate();
  return (-squared_distances(a, b) / (2.0 * spec.sigma * spec.sigma))
      .array()
      .exp();
}

Scalar median_pairwise_distance(const Mat& pts) {
  const Index m = pts.rows();
  if (m < 2) return 1.0;
  std::vector<Scalar> d;
  d.reserve(static_cast<std::size_t>(m * (m - 1) / 2));
  for (Index i = 0; i < m; ++i)
    for (Index j = i + 1; j < m; ++j)
      d.push_back((pts.row(i) - pts.row(j)).norm());
  const std::size_t mid = d.size() / 2;
  std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(mid),
                   d.end());
  if (d.size() % 2 == 1) return d[mid];
  const Scalar hi = d[mid];
  std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(mid) - 1,
                   d.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (d[mid - 1] + hi);
}

Scalar KernelModel::score(const Vec& x) const {
  if (alphas.size() != point_count() + 1)
    throw std::invalid_argument("alphas must have one entry per point plus bias");
  Scalar s = alphas(point_count());
  for (Index j = 0; j < point_count(); ++j)
    s += alphas(j) * kernel_eval(spec, train_points.row(j).transpose(), x);
  return s;
}

IntVec kernel_predict_labels(const KernelModel& model, const Mat& pts) {
  if (model.alphas.size() != model.point_count() + 1)
    throw std::invalid_argument("alphas must have one entry per point plus bias");
  const Mat k = cross_gram(model.spec, pts, model.train_points);
  Vec s = k * model.alphas.head(model.point_count());
  s.array() += model.alphas(model.point_count());
  IntVec out(pts.rows());
  for (Index i = 0; i < pts.rows(); ++i) out[i] = s[i] >= 0 ? 1 : 0;
  return out;
}

Vec grad_alphas(const Mat& gram_design, const IntVec& labels, const Vec& alphas,
                const BBHyper& hyper, const Prior& prior) {
  TrainObjective obj(gram_design, labels, hyper, prior);
  return obj.gradient(alphas);
}

Index support_count(const Vec& coeffs, Scalar tau) {
  if (coeffs.size() == 0) return 0;
  const Scalar peak = coeffs.cwiseAbs().maxCoeff();
  if (peak == 0) return 0;
  const Scalar cut = tau * peak;
  Index n = 0;
  for (Index i = 0; i < coeffs.size(); ++i)
    if (std::abs(coeffs[i]) > cut) ++n;
  return n;
}

Index support_count(const KernelModel& model, Scalar tau) {
  return support_count(model.alphas.head(model.point_count()).eval(), tau);
}

}  // namespace bblr
