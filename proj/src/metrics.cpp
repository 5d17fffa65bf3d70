#include "bblr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bblr {

int zero_one_total(const IntVec& predictions, const IntVec& labels) {
  if (predictions.size() != labels.size())
    throw std::invalid_argument("prediction and label counts differ");
  int errors = 0;
  for (Index i = 0; i < labels.size(); ++i)
    errors += predictions[i] != labels[i];
  return errors;
}

Scalar error_percent(const IntVec& predictions, const IntVec& labels) {
  if (labels.size() == 0) throw std::invalid_argument("no labels");
  return 100.0 * static_cast<Scalar>(zero_one_total(predictions, labels)) /
         static_cast<Scalar>(labels.size());
}

ContingencyPair contingency(const IntVec& first, const IntVec& second,
                            const IntVec& labels) {
  if (first.size() != labels.size() || second.size() != labels.size())
    throw std::invalid_argument("prediction and label counts differ");
  ContingencyPair c;
  for (Index i = 0; i < labels.size(); ++i) {
    const bool first_wrong = first[i] != labels[i];
    const bool second_wrong = second[i] != labels[i];
    if (first_wrong && !second_wrong) ++c.n01;
    if (!first_wrong && second_wrong) ++c.n10;
  }
  return c;
}

bool z_flags_significant(Scalar z) { return z >= kMcnemarZThreshold; }

namespace {

// Decides P[Bin(m, 1/2) >= k] <= 1/100 exactly: the tail equals
// (sum of the top binomial coefficients) / 2^m, so the comparison is
// 100 * sum <= 2^m in 128-bit integers. Valid for m <= 64.
bool exact_tail_significant(long m, long k) {
  using U = unsigned __int128;
  U coeff = 1;  // C(m, 0)
  U tail = 0;
  for (long i = 0; i <= m; ++i) {
    if (i >= k) tail += coeff;
    coeff = coeff * static_cast<U>(m - i) / static_cast<U>(i + 1);
  }
  const U total = static_cast<U>(1) << m;
  return 100 * tail <= total;
}

}  // namespace

McNemarResult mcnemar_test(const ContingencyPair& counts) {
  if (counts.n01 < 0 || counts.n10 < 0)
    throw std::invalid_argument("disagreement counts must be nonnegative");
  const long m = counts.n01 + counts.n10;
  McNemarResult r;
  if (m == 0) {
    r.z = 0;
    r.defined = false;
    r.significant = false;
    return r;
  }
  const Scalar diff = std::abs(static_cast<Scalar>(counts.n01 - counts.n10));
  r.z = (diff - 1.0) / std::sqrt(static_cast<Scalar>(m));
  r.significant = m <= 64
                      ? exact_tail_significant(m, std::max(counts.n01, counts.n10))
                      : z_flags_significant(r.z);
  return r;
}

McNemarResult pooled_mcnemar(const std::vector<ContingencyPair>& counts) {
  ContingencyPair total;
  for (const auto& c : counts) {
    total.n01 += c.n01;
    total.n10 += c.n10;
  }
  return mcnemar_test(total);
}

}  // namespace bblr
