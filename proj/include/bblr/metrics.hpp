#pragma once

#include <vector>

#include "bblr/types.hpp"

namespace bblr {

int zero_one_total(const IntVec& predictions, const IntVec& labels);
Scalar error_percent(const IntVec& predictions, const IntVec& labels);

// Disagreement counts between two classifiers on shared cases:
// n01 = first wrong, second right; n10 = first right, second wrong.
struct ContingencyPair {
  long n01 = 0;
  long n10 = 0;
};

ContingencyPair contingency(const IntVec& first, const IntVec& second,
                            const IntVec& labels);

struct McNemarResult {
  Scalar z = 0;             // continuity-corrected statistic
  bool defined = true;      // false when both disagreement counts are zero
  bool significant = false; // one-sided exceedance probability <= 0.01
};

// z = (|n01 - n10| - 1) / sqrt(n01 + n10). Small disagreement totals
// (m <= 64) decide significance by the exact one-sided binomial tail
// P[Bin(m, 1/2) >= max(n01, n10)] <= 0.01, computed in integer
// arithmetic; larger totals use the z >= threshold rule.
McNemarResult mcnemar_test(const ContingencyPair& counts);

// Sums the disagreement counts across folds, then tests once.
McNemarResult pooled_mcnemar(const std::vector<ContingencyPair>& counts);

// The asymptotic decision boundary on the corrected statistic.
constexpr Scalar kMcnemarZThreshold = 2.32;
bool z_flags_significant(Scalar z);

}  // namespace bblr
