#include "bblr/cv.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "bblr/detail/subsets.hpp"
#include "bblr/logistic.hpp"
#include "bblr/objective.hpp"
#include "bblr/slam.hpp"

namespace bblr {

namespace {

using detail::labels_of;
using detail::rows_of;

constexpr std::array<Scalar, 7> kLambdaGrid = {1e-4, 1e-3, 1e-2, 1e-1,
                                               1.0,  10.0, 100.0};
const std::vector<Scalar> kGammaInitGrid = {0.5, 1.0, 2.0, 4.0, 8.0};
const std::vector<Scalar> kBandwidthGrid = {0.125, 0.25, 0.5, 1.0,
                                            2.0,   4.0,  8.0};

// splitmix64-style mixer; gives each fold its own noise and fit streams.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt, long rep,
                       long fold) {
  std::uint64_t x =
      seed ^ (salt + 0x9e3779b97f4a7c15ULL *
                         (static_cast<std::uint64_t>(rep) * 131 +
                          static_cast<std::uint64_t>(fold) + 1));
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

// Armijo backtracking ascent; the logistic likelihood is concave, so
// this lands reliably near the optimum.
Vec fit_logistic(const Mat& design, const IntVec& y, Scalar lambda) {
  LogisticObjective obj(design, y, lambda);
  Vec v = Vec::Zero(design.cols());
  Scalar fv = obj.value(v);
  for (int iter = 0; iter < 500; ++iter) {
    const Vec g = obj.gradient(v);
    if (g.lpNorm<Eigen::Infinity>() < 1e-8) break;
    Scalar rate = 1.0;
    bool moved = false;
    while (rate >= 1e-12) {
      const Vec cand = v + rate * g;
      const Scalar fc = obj.value(cand);
      if (fc > fv + 1e-4 * rate * g.squaredNorm()) {
        v = cand;
        fv = fc;
        moved = true;
        break;
      }
      rate *= 0.5;
    }
    if (!moved) break;
  }
  return v;
}

Vec lr_fit_tuned(const Mat& design, const IntVec& y, int folds,
                 std::uint64_t seed) {
  const auto splits = make_splits(y, SplitPlan{seed, folds, 1, true});
  Scalar best_lambda = kLambdaGrid[0];
  int best = std::numeric_limits<int>::max();
  for (const Scalar lambda : kLambdaGrid) {
    int err = 0;
    for (const auto& fs : splits) {
      const Vec v = fit_logistic(rows_of(design, fs.train_idx),
                                 labels_of(y, fs.train_idx), lambda);
      err += count_01_errors(rows_of(design, fs.test_idx) * v,
                             labels_of(y, fs.test_idx));
    }
    if (err < best) {
      best = err;
      best_lambda = lambda;
    }
  }
  return fit_logistic(design, y, best_lambda);
}

struct KernelTuned {
  KernelSpec spec{};
  Scalar lambda = 1e-2;
  Mat gram_design;
  Vec model0;
};

KernelTuned tune_kernel(const Dataset& train, const BBHyper& hyper,
                        const SlaConfig& cfg, int folds, std::uint64_t seed) {
  KernelTuned out;
  const Scalar med = median_pairwise_distance(train.x);
  const auto splits = make_splits(train.y, SplitPlan{seed, folds, 1, true});
  int best = std::numeric_limits<int>::max();

  for (const Scalar mult : kBandwidthGrid) {
    const KernelSpec spec{KernelKind::Rbf, mult * med};
    const Mat g = gram(spec, train.x);
    for (const Scalar lambda : kLambdaGrid) {
      int err = 0;
      for (const auto& fs : splits) {
        const auto ntr = static_cast<Index>(fs.train_idx.size());
        const auto nva = static_cast<Index>(fs.test_idx.size());
        Mat dtr(ntr, ntr + 1);
        for (Index r = 0; r < ntr; ++r)
          for (Index c = 0; c < ntr; ++c)
            dtr(r, c) = g(fs.train_idx[static_cast<std::size_t>(r)],
                          fs.train_idx[static_cast<std::size_t>(c)]);
        dtr.col(ntr).setOnes();
        Mat dva(nva, ntr + 1);
        for (Index r = 0; r < nva; ++r)
          for (Index c = 0; c < ntr; ++c)
            dva(r, c) = g(fs.test_idx[static_cast<std::size_t>(r)],
                          fs.train_idx[static_cast<std::size_t>(c)]);
        dva.col(ntr).setOnes();

        const Vec v = smooth_fit(dtr, labels_of(train.y, fs.train_idx), hyper,
                                 1.0, lambda, cfg);
        err += count_01_errors(dva * v, labels_of(train.y, fs.test_idx));
      }
      if (err < best) {
        best = err;
        out.spec = spec;
        out.lambda = lambda;
      }
    }
  }

  const Mat g = gram(out.spec, train.x);
  out.gram_design.resize(train.rows(), train.rows() + 1);
  out.gram_design.leftCols(train.rows()) = g;
  out.gram_design.col(train.rows()).setOnes();
  out.model0 = smooth_fit(out.gram_design, train.y, hyper, 1.0, out.lambda, cfg);
  return out;
}

MethodFit fit_kernel_method(const Dataset& train, const CvOptions& opt,
                            std::uint64_t seed, bool sparse) {
  BBHyper h = empirical_hyper(train.y);
  const KernelTuned kt = tune_kernel(train, h, opt.cfg, opt.inner_folds, seed);
  h.gamma = 1.0;

  Prior prior = sparse ? Prior{init_mixture(kt.model0)}
                       : Prior{GaussianPrior{kt.lambda}};
  TrainObjective obj(kt.gram_design, train.y, h, std::move(prior));
  FitReport rep = find_sla_solution(obj, kt.model0, opt.cfg, seed);

  MethodFit out;
  out.is_kernel = true;
  out.hyper = h;
  out.kernel = KernelModel{std::move(rep.coefficients), train.x, kt.spec};
  return out;
}

}  // namespace

Method parse_method(std::string_view name) {
  if (name == "lr") return Method::Lr;
  if (name == "sla") return Method::SlaSigmoid;
  if (name == "bblr1") return Method::Bblr1;
  if (name == "bblr2") return Method::Bblr2;
  if (name == "bblr3") return Method::Bblr3;
  if (name == "bblr4") return Method::Bblr4;
  if (name == "kbblr") return Method::Kbblr;
  if (name == "sparse-kbblr") return Method::SparseKbblr;
  throw std::invalid_argument("unknown method '" + std::string(name) + "'");
}

std::string method_name(Method method) {
  switch (method) {
    case Method::Lr: return "lr";
    case Method::SlaSigmoid: return "sla";
    case Method::Bblr1: return "bblr1";
    case Method::Bblr2: return "bblr2";
    case Method::Bblr3: return "bblr3";
    case Method::Bblr4: return "bblr4";
    case Method::Kbblr: return "kbblr";
    case Method::SparseKbblr: return "sparse-kbblr";
  }
  throw std::logic_error("unreachable method");
}

MethodFit fit_method(const Dataset& train, Method method, const CvOptions& opt,
                     std::uint64_t seed) {
  train.validate();
  const std::vector<Scalar> lambdas(kLambdaGrid.begin(), kLambdaGrid.end());
  MethodFit out;

  switch (method) {
    case Method::Lr: {
      const Mat design = design_matrix(train);
      out.coefficients = lr_fit_tuned(design, train.y, opt.inner_folds, seed);
      break;
    }
    case Method::SlaSigmoid: {
      const Mat design = design_matrix(train);
      GridInit gi = grid_init_sigmoid(design, train.y, lambdas, kGammaInitGrid,
                                      opt.cfg, opt.inner_folds, seed);
      SigmoidSlaObjective obj(design, train.y, gi.gamma_init, gi.lambda);
      out.coefficients =
          find_sla_solution(obj, std::move(gi.model0), opt.cfg, seed)
              .coefficients;
      break;
    }
    case Method::Bblr1:
    case Method::Bblr2: {
      BBHyper h = method == Method::Bblr1 ? BBHyper::from_counts(1, 1, 100)
                                          : empirical_hyper(train.y);
      const Mat design = design_matrix(train);
      GridInit gi = grid_init(design, train.y, h, lambdas, kGammaInitGrid,
                              opt.cfg, opt.inner_folds, seed);
      h.gamma = gi.gamma_init;
      TrainObjective obj(design, train.y, h, Prior{GaussianPrior{gi.lambda}});
      out.coefficients =
          find_sla_solution(obj, std::move(gi.model0), opt.cfg, seed)
              .coefficients;
      out.hyper = h;
      break;
    }
    case Method::Bblr3: {
      Bblr3Fit f = fit_bblr3(train, opt.cfg, opt.inner_folds, seed);
      out.coefficients = std::move(f.report.coefficients);
      out.hyper = f.hyper;
      break;
    }
    case Method::Bblr4: {
      Bblr4Fit f = fit_bblr4(train, opt.cfg, opt.inner_folds, seed);
      out.coefficients = std::move(f.report.coefficients);
      out.hyper = f.hyper;
      break;
    }
    case Method::Kbblr:
      return fit_kernel_method(train, opt, seed, false);
    case Method::SparseKbblr:
      return fit_kernel_method(train, opt, seed, true);
  }
  return out;
}

IntVec method_predict(const MethodFit& fit, const Dataset& ds) {
  if (fit.is_kernel) return kernel_predict_labels(fit.kernel, ds.x);
  return predict_labels(LinearModel{fit.coefficients}, ds);
}

Index method_support(const MethodFit& fit) {
  return fit.is_kernel ? support_count(fit.kernel) : -1;
}

Scalar CvResult::mean_error_percent() const {
  if (outcomes.empty()) return 0;
  Scalar sum = 0;
  for (const auto& o : outcomes)
    sum += 100.0 * static_cast<Scalar>(o.errors) /
           static_cast<Scalar>(o.test_idx.size());
  return sum / static_cast<Scalar>(outcomes.size());
}

int CvResult::total_errors() const {
  int sum = 0;
  for (const auto& o : outcomes) sum += o.errors;
  return sum;
}

Scalar CvResult::sum_per_rep_mean01() const {
  return static_cast<Scalar>(total_errors()) /
         static_cast<Scalar>(repetitions);
}

Scalar CvResult::mean_support() const {
  Scalar sum = 0;
  long n = 0;
  for (const auto& o : outcomes) {
    if (o.support < 0) continue;
    sum += static_cast<Scalar>(o.support);
    ++n;
  }
  return n == 0 ? -1.0 : sum / static_cast<Scalar>(n);
}

CvResult cross_validate(const Dataset& raw, const SplitPlan& plan,
                        Method method, const CvOptions& opt) {
  raw.validate();
  if (raw.standardized)
    throw std::invalid_argument(
        "cross_validate expects raw rows; scaling is fit per training fold");
  if (opt.noise_rate < 0 || opt.noise_rate > 1)
    throw std::invalid_argument("noise rate outside [0,1]");

  const auto splits = make_splits(raw.y, plan);
  CvResult res;
  res.method = method;
  res.folds_per_rep = plan.folds;
  res.repetitions = plan.repetitions;
  res.rows = raw.rows();
  res.outcomes.resize(splits.size());

  std::atomic<std::size_t> cursor{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  const auto worker = [&] {
    for (std::size_t i = cursor.fetch_add(1); i < splits.size();
         i = cursor.fetch_add(1)) {
      try {
        const auto& fs = splits[i];
        Dataset tr = subset(raw, fs.train_idx);
        Dataset te = subset(raw, fs.test_idx);
        if (opt.noise_rate > 0)
          tr = inject_label_noise(
              tr, opt.noise_rate,
              mix_seed(plan.seed, 0xA11CEULL, fs.repetition, fs.fold));
        standardize(tr, {&te});

        const MethodFit fit = fit_method(
            tr, method, opt,
            mix_seed(plan.seed, 0xF17ULL, fs.repetition, fs.fold));

        FoldOutcome& o = res.outcomes[i];
        o.repetition = fs.repetition;
        o.fold = fs.fold;
        o.test_idx = fs.test_idx;
        o.predictions = method_predict(fit, te);
        o.errors = zero_one_total(o.predictions, te.y);
        o.support = method_support(fit);
      } catch (...) {
        std::scoped_lock lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };

  const int jobs = std::max(1, opt.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(jobs));
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return res;
}

std::vector<ContingencyPair> fold_contingencies(const CvResult& a,
                                                const CvResult& b,
                                                const IntVec& labels) {
  if (a.outcomes.size() != b.outcomes.size())
    throw std::invalid_argument("results cover different numbers of folds");
  std::vector<ContingencyPair> out;
  out.reserve(a.outcomes.size());
  for (std::size_t i = 0; i < a.outcomes.size(); ++i) {
    const auto& oa = a.outcomes[i];
    const auto& ob = b.outcomes[i];
    if (oa.test_idx != ob.test_idx)
      throw std::invalid_argument("results come from different split plans");
    out.push_back(
        contingency(oa.predictions, ob.predictions, labels_of(labels, oa.test_idx)));
  }
  return out;
}

McNemarResult pooled_mcnemar_between(const CvResult& a, const CvResult& b,
                                     const IntVec& labels) {
  return pooled_mcnemar(fold_contingencies(a, b, labels));
}

}  // namespace bblr
