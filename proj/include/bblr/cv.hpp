#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "bblr/dataset.hpp"
#include "bblr/kernel.hpp"
#include "bblr/metrics.hpp"
#include "bblr/model.hpp"
#include "bblr/optimizer.hpp"

namespace bblr {

enum class Method {
  Lr,           // L2 logistic regression, penalty cross-validated
  SlaSigmoid,   // sigmoid loss through the annealed optimizer
  Bblr1,        // fixed unit pseudo-counts (alpha = beta = 1, n = 100)
  Bblr2,        // pseudo-counts from the class frequencies
  Bblr3,        // Bblr2 plus schedule meta-optimization
  Bblr4,        // Bblr3 plus hyper-parameter learning
  Kbblr,        // kernelized plateau fit, RBF
  SparseKbblr,  // Kbblr under the sparsifying mixture prior
};

Method parse_method(std::string_view name);
std::string method_name(Method method);

struct CvOptions {
  Scalar noise_rate = 0.0;  // fraction of training labels flipped per fold
  int inner_folds = 5;      // folds for every hyper-parameter search
  SlaConfig cfg{};          // annealing template
  int jobs = 1;             // worker threads across outer folds
};

// One trained classifier, linear or kernel.
struct MethodFit {
  bool is_kernel = false;
  Vec coefficients;    // design-space weights, intercept last (linear)
  BBHyper hyper;       // plateau state used by the fit, when any
  KernelModel kernel;  // kernel methods only
};

// Trains on already-standardized rows. seed drives every internal split.
MethodFit fit_method(const Dataset& train, Method method, const CvOptions& opt,
                     std::uint64_t seed);
IntVec method_predict(const MethodFit& fit, const Dataset& ds);
// Coefficients carrying the kernel expansion; -1 for linear fits.
Index method_support(const MethodFit& fit);

struct FoldOutcome {
  int repetition = 0;
  int fold = 0;
  std::vector<Index> test_idx;
  IntVec predictions;  // aligned with test_idx
  int errors = 0;
  Index support = -1;
};

struct CvResult {
  Method method = Method::Lr;
  int folds_per_rep = 5;
  int repetitions = 10;
  Index rows = 0;
  std::vector<FoldOutcome> outcomes;

  Scalar mean_error_percent() const;
  int total_errors() const;
  // Whole-dataset 0-1 error count, averaged over the repetitions (each
  // repetition tests every row exactly once).
  Scalar sum_per_rep_mean01() const;
  Scalar mean_support() const;
};

// Repeated stratified k-fold protocol on raw (unstandardized) rows.
// Per fold: optional training-label noise, scaling fit on the training
// rows only, one fit_method call, hard predictions on the untouched
// test rows. Deterministic for a fixed (plan, options) whatever jobs is.
CvResult cross_validate(const Dataset& raw, const SplitPlan& plan,
                        Method method, const CvOptions& opt);

// Per-fold disagreement counts between two runs of the same plan.
std::vector<ContingencyPair> fold_contingencies(const CvResult& a,
                                                const CvResult& b,
                                                const IntVec& labels);
McNemarResult pooled_mcnemar_between(const CvResult& a, const CvResult& b,
                                     const IntVec& labels);

}  // namespace bblr
