// Acceptance gates, one per command-line argument 1..10. Each prints a
// single [PASS]/[FAIL] line with the measured quantities and returns a
// nonzero exit code on failure. Tolerances live next to the checks.
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bblr/cv.hpp"
#include "bblr/logistic.hpp"
#include "bblr/losses.hpp"
#include "bblr/metrics.hpp"
#include "bblr/model.hpp"
#include "bblr/objective.hpp"
#include "bblr/optimizer.hpp"
#include "bblr/tables.hpp"

using namespace bblr;

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

constexpr const char* kDataDir = "datasets";

Dataset random_dataset(std::mt19937_64& gen, Index rows, Index dims,
                       Scalar gap = 0.0) {
  std::normal_distribution<Scalar> d(0.0, 1.0);
  Dataset ds;
  ds.x = Mat(rows, dims);
  ds.y = IntVec(rows);
  for (Index i = 0; i < rows; ++i) {
    const int label = i % 2;
    for (Index j = 0; j < dims; ++j)
      ds.x(i, j) = d(gen) + (j == 0 ? (label ? gap : -gap) : 0.0);
    ds.y[i] = label;
  }
  return ds;
}

Vec random_vec(std::mt19937_64& gen, Index n, Scalar scale) {
  std::normal_distribution<Scalar> d(0.0, scale);
  Vec v(n);
  for (Index i = 0; i < n; ++i) v[i] = d(gen);
  return v;
}

// |got - want| relative to the larger of 1 and |want|; keeps tiny true
// values from blowing the ratio up with finite-difference noise.
Scalar rel_err(Scalar got, Scalar want) {
  return std::abs(got - want) / std::max<Scalar>(1.0, std::abs(want));
}

// ---- criterion 1: the plateau objective at (a,b,gamma) = (0,1,1) is
// logistic regression, in values, gradients, and fitted labels.
bool criterion_1(std::ostringstream& out) {
  const auto t0 = Clock::now();
  std::mt19937_64 gen(2024);
  const Dataset ds = random_dataset(gen, 80, 5, 0.6);
  const Mat design = design_matrix(ds);
  const Scalar lambda = 0.5;

  BBHyper degenerate;  // mix_w = 0 collapses the plateau entirely
  degenerate.mix_w = 0.0;
  degenerate.theta_b = 0.5;
  degenerate.gamma = 1.0;

  TrainObjective plateau(design, ds.y, degenerate, GaussianPrior{lambda});
  LogisticObjective logistic(design, ds.y, lambda);

  Scalar worst_v = 0, worst_g = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const Vec v = random_vec(gen, design.cols(), 0.5);
    worst_v = std::max(worst_v, std::abs(plateau.value(v) - logistic.value(v)));
    worst_g = std::max(worst_g, (plateau.gradient(v) - logistic.gradient(v))
                                    .lpNorm<Eigen::Infinity>());
  }

  SlaConfig cfg;
  const Vec wp = vanilla_grad_desc(plateau, Vec::Zero(design.cols()), cfg);
  const Vec wl = vanilla_grad_desc(logistic, Vec::Zero(design.cols()), cfg);
  int label_diff = 0;
  const Vec sp = design * wp;
  const Vec sl = design * wl;
  for (Index i = 0; i < ds.rows(); ++i)
    label_diff += (sp[i] >= 0) != (sl[i] >= 0);

  const double ms = ms_since(t0);
  out << "max |value diff| " << worst_v << " (<= 1e-12), max |grad diff| "
      << worst_g << " (<= 1e-12), fitted label mismatches " << label_diff
      << " (= 0), " << ms << " ms (< 1000)";
  return worst_v <= 1e-12 && worst_g <= 1e-12 && label_diff == 0 && ms < 1000;
}

// ---- criterion 2: analytic gradients against central differences.
bool criterion_2(std::ostringstream& out) {
  const auto t0 = Clock::now();
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<Scalar> wdist(0.05, 0.4);
  std::uniform_real_distribution<Scalar> tdist(0.2, 0.7);
  std::uniform_real_distribution<Scalar> gdist(0.5, 16.0);
  const Scalar step = 1e-6;

  Scalar worst = 0;
  int instances = 0;

  // grad_weights
  for (int trial = 0; trial < 100; ++trial, ++instances) {
    const Dataset ds = random_dataset(gen, 30, 4, 0.5);
    LinearModel m{random_vec(gen, 5, 0.6)};
    const BBHyper h = BBHyper::from_mixture(wdist(gen), tdist(gen), gdist(gen));
    const Scalar l2 = trial % 2 ? 0.3 : 0.0;
    const Vec g = grad_weights(ds, m, h, l2);
    for (Index j = 0; j < 5; ++j) {
      LinearModel up = m, dn = m;
      up.weights[j] += step;
      dn.weights[j] -= step;
      const Scalar fd =
          (log_likelihood(ds, up, h, l2) - log_likelihood(ds, dn, h, l2)) /
          (2 * step);
      worst = std::max(worst, rel_err(fd, g[j]));
    }
  }

  // grad_hyper
  for (int trial = 0; trial < 100; ++trial, ++instances) {
    const Dataset ds = random_dataset(gen, 30, 3, 0.5);
    const LinearModel m{random_vec(gen, 4, 0.6)};
    const BBHyper h = BBHyper::from_mixture(wdist(gen), tdist(gen), gdist(gen));
    const HyperGrad g = grad_hyper(ds, m, h);
    const auto ll = [&](Scalar w, Scalar t, Scalar gam) {
      return log_likelihood(ds, m, BBHyper::from_mixture(w, t, gam), 0.0);
    };
    worst = std::max(worst, rel_err((ll(h.mix_w + step, h.theta_b, h.gamma) -
                                     ll(h.mix_w - step, h.theta_b, h.gamma)) /
                                        (2 * step),
                                    g.d_mix_w));
    worst = std::max(worst, rel_err((ll(h.mix_w, h.theta_b + step, h.gamma) -
                                     ll(h.mix_w, h.theta_b - step, h.gamma)) /
                                        (2 * step),
                                    g.d_theta_b));
    worst = std::max(worst, rel_err((ll(h.mix_w, h.theta_b, h.gamma + step) -
                                     ll(h.mix_w, h.theta_b, h.gamma - step)) /
                                        (2 * step),
                                    g.d_gamma));
  }

  // grad_alphas over a Gram design, both prior families
  for (int trial = 0; trial < 100; ++trial, ++instances) {
    const Dataset pts = random_dataset(gen, 10, 3, 0.5);
    const KernelSpec spec{KernelKind::Rbf, 1.0 + 0.1 * (trial % 10)};
    Mat gdesign(10, 11);
    gdesign.leftCols(10) = gram(spec, pts.x);
    gdesign.col(10).setOnes();
    const Vec alphas = random_vec(gen, 11, 0.4);
    const BBHyper h = BBHyper::from_mixture(wdist(gen), tdist(gen),
                                            std::min<Scalar>(gdist(gen), 16.0));
    const Prior prior =
        trial % 2 ? Prior(GaussianPrior{0.25})
                  : Prior(MixturePrior{0.5, 0.5, 1.0, 0.2,
                                       std::vector<Cluster>(11, Cluster::Gauss)});
    const Vec g = grad_alphas(gdesign, pts.y, alphas, h, prior);

    TrainObjective obj(gdesign, pts.y, h, prior);
    for (Index j = 0; j < 11; ++j) {
      Vec up = alphas, dn = alphas;
      up[j] += step;
      dn[j] -= step;
      const Scalar fd = (obj.value(up) - obj.value(dn)) / (2 * step);
      worst = std::max(worst, rel_err(fd, g[j]));
    }
  }

  // grad_prior on the mixture
  for (int trial = 0; trial < 100; ++trial, ++instances) {
    const MixturePrior p{0.3 + 0.04 * (trial % 10), 0.7 - 0.04 * (trial % 10),
                         0.5 + 0.2 * (trial % 5), 0.1 + 0.05 * (trial % 7),
                         {}};
    Vec v = random_vec(gen, 8, 1.0);
    for (Index j = 0; j < 8; ++j)
      if (std::abs(v[j]) < 1e-3) v[j] = 0.25;  // stay off the kink
    const Prior prior(p);
    const Vec g = grad_prior(prior, v);
    for (Index j = 0; j < 8; ++j) {
      Vec up = v, dn = v;
      up[j] += step;
      dn[j] -= step;
      const Scalar fd =
          (log_prior(prior, up) - log_prior(prior, dn)) / (2 * step);
      worst = std::max(worst, rel_err(fd, g[j]));
    }
  }

  const double ms = ms_since(t0);
  out << instances << " instances across 4 suites, worst relative error "
      << worst << " (< 1e-6), " << ms << " ms (< 10000)";
  return instances >= 400 && worst < 1e-6 && ms < 10000;
}

// ---- criterion 3: affinely rescaled plateau loss approaches the
// indicator as gamma grows.
bool criterion_3(std::ostringstream& out) {
  const auto t0 = Clock::now();
  const BBHyper h = BBHyper::from_counts(1, 1, 100);  // alpha = beta
  const PlateauConstants pc = h.plateau();
  const Scalar c = -std::log(pc.a + pc.b);
  const Scalar s = 1.0 / std::log((pc.a + pc.b) / pc.a);

  std::vector<Scalar> zs;
  for (Scalar z = 0.1; z <= 5.0; z += 0.003) zs.push_back(z);
  for (const Scalar z : {10.0, 20.0, 50.0, 100.0}) zs.push_back(z);

  std::vector<Scalar> devs;
  for (const Scalar gamma : {2.0, 20.0, 200.0}) {
    const LossSpec spec{LossKind::BetaBernoulli, gamma, pc, +1};
    Scalar dev = 0;
    for (const Scalar z : zs) {
      const Scalar right = s * (eval_loss(spec, z) - c);        // want 0
      const Scalar wrong = s * (eval_loss(spec, -z) - c) - 1.0; // want 1
      dev = std::max(dev, std::max(std::abs(right), std::abs(wrong)));
    }
    devs.push_back(dev);
  }

  const bool monotone = devs[0] >= devs[1] - 1e-12 && devs[1] >= devs[2] - 1e-12;
  const double ms = ms_since(t0);
  out << "max deviations " << devs[0] << " -> " << devs[1] << " -> " << devs[2]
      << " over gamma {2,20,200}; final < 0.01 and non-increasing, " << ms
      << " ms (< 1000)";
  return devs[2] < 0.01 && monotone && ms < 1000;
}

bool run_table(const std::string& id, bool full, std::ostringstream& out) {
  TableOptions opt;
  opt.seed = 1;
  opt.jobs = 1;
  opt.full = full;
  const TableReport rep = reproduce_table(id, kDataDir, opt);
  std::cout << format_table(rep);
  int failed = 0;
  for (const auto& r : rep.rows) failed += !r.pass;
  for (const auto& c : rep.checks) failed += !c.pass;
  out << "table " << id << ": " << rep.rows.size() << " rows, "
      << rep.checks.size() << " checks, " << failed << " failing";
  return rep.all_pass();
}

// ---- criterion 8: halved kernel support plus sub-linear support growth.
bool criterion_8(std::ostringstream& out) {
  std::ostringstream part;
  const bool halved = run_table("sparse-kernel", false, part);

  std::mt19937_64 gen(5);
  const Dataset blob = random_dataset(gen, 900, 4, 1.2);
  CvOptions opt;
  const auto points = sparsity_sweep(blob, {100, 200, 400, 800}, opt, 5);

  bool decreasing = true;
  std::ostringstream ratios;
  for (std::size_t k = 0; k < points.size(); ++k) {
    const Scalar ratio = static_cast<Scalar>(points[k].support) /
                         static_cast<Scalar>(points[k].rows);
    if (k > 0)
      decreasing = decreasing &&
                   ratio < static_cast<Scalar>(points[k - 1].support) /
                               static_cast<Scalar>(points[k - 1].rows);
    ratios << (k ? ", " : "") << points[k].rows << "->" << points[k].support
           << " (" << ratio << ")";
  }

  out << part.str() << "; sweep " << ratios.str()
      << "; support/n strictly decreasing: " << (decreasing ? "yes" : "no");
  return halved && decreasing;
}

// ---- criterion 9: McNemar worked example and exact-tail agreement.
bool criterion_9(std::ostringstream& out) {
  const auto t0 = Clock::now();

  const McNemarResult r = mcnemar_test({10, 2});
  const Scalar want = 7.0 / std::sqrt(12.0);
  const bool example_ok =
      std::abs(r.z - want) <= 1e-12 && std::abs(r.z - 2.0207) <= 1e-4;

  // Independent oracle: Pascal triangle in long double.
  int disagreements = 0;
  for (int m = 1; m <= 25 && disagreements == 0; ++m) {
    std::vector<long double> row(static_cast<std::size_t>(m) + 1, 1.0L);
    for (int n = 2; n <= m; ++n)
      for (int j = n - 1; j >= 1; --j)
        row[static_cast<std::size_t>(j)] += row[static_cast<std::size_t>(j - 1)];
    const long double denom = std::pow(2.0L, m);
    for (int n01 = 0; n01 <= m; ++n01) {
      const int k = std::max(n01, m - n01);
      long double tail = 0.0L;
      for (int j = k; j <= m; ++j) tail += row[static_cast<std::size_t>(j)];
      const bool want_sig = tail / denom <= 0.01L;
      if (mcnemar_test({n01, m - n01}).significant != want_sig) ++disagreements;
    }
  }

  const double ms = ms_since(t0);
  out << "worked example z = " << r.z << " (expect 2.0207), oracle disagreements "
      << disagreements << " over all pairs with n01+n10 <= 25, " << ms
      << " ms (< 1000)";
  return example_ok && disagreements == 0 && ms < 1000;
}

// ---- criterion 10: sparse-format ingestion round-trips on synthetic
// web-scale-shaped fixtures (the full corpora stay out of scope).
bool criterion_10(std::ostringstream& out) {
  const auto t0 = Clock::now();
  std::mt19937_64 gen(303);
  std::uniform_real_distribution<Scalar> unit(0.0, 1.0);
  bool ok = true;
  std::ostringstream notes;

  // Shape A: wide binary-ish rows, ~3% density.
  {
    Dataset ds;
    const Index rows = 120, dims = 300;
    ds.x = Mat::Zero(rows, dims);
    ds.y = IntVec(rows);
    for (Index i = 0; i < rows; ++i) {
      ds.y[i] = unit(gen) < 0.5 ? 1 : 0;
      for (Index j = 0; j < dims; ++j)
        if (unit(gen) < 0.03) ds.x(i, j) = unit(gen) < 0.8 ? 1.0 : unit(gen);
    }
    ds.x(0, dims - 1) = 1.0;  // keep the last column occupied

    std::stringstream buf;
    write_libsvm(ds, buf);
    const Dataset back = parse_libsvm(buf);
    const bool same = back == ds;
    ok = ok && same;
    notes << "wide-binary " << (same ? "ok" : "MISMATCH");
  }

  // Shape B: fractional magnitudes across 20 orders, zero rows included.
  {
    Dataset ds;
    const Index rows = 60, dims = 254;
    ds.x = Mat::Zero(rows, dims);
    ds.y = IntVec(rows);
    for (Index i = 0; i < rows; ++i) {
      ds.y[i] = i % 3 == 0 ? 1 : 0;
      if (i % 10 == 9) continue;  // leave every tenth row empty
      for (Index j = 0; j < dims; ++j)
        if (unit(gen) < 0.05)
          ds.x(i, j) = (unit(gen) - 0.5) *
                       std::pow(10.0, -10 + 20 * unit(gen));
    }
    ds.x(1, dims - 1) = -7.25e-9;

    std::stringstream buf;
    write_libsvm(ds, buf);
    const Dataset back = parse_libsvm(buf);
    const bool same = back == ds;
    ok = ok && same;

    // Writing the parsed copy again reproduces the bytes.
    std::stringstream buf2;
    write_libsvm(back, buf2);
    const bool stable = buf2.str() == [&] {
      std::stringstream again;
      write_libsvm(ds, again);
      return again.str();
    }();
    ok = ok && stable;
    notes << ", heavy-tail " << (same ? "ok" : "MISMATCH") << ", rewrite "
          << (stable ? "stable" : "UNSTABLE");
  }

  const double ms = ms_since(t0);
  out << notes.str() << ", " << ms << " ms";
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: bblr_acceptance <criterion 1..10>\n";
    return 2;
  }
  const int k = std::atoi(argv[1]);
  std::ostringstream detail;
  bool pass = false;
  try {
    switch (k) {
      case 1: pass = criterion_1(detail); break;
      case 2: pass = criterion_2(detail); break;
      case 3: pass = criterion_3(detail); break;
      case 4: pass = run_table("training-01", false, detail); break;
      case 5: pass = run_table("clean-cv", false, detail); break;
      case 6: pass = run_table("noisy-cv", false, detail); break;
      case 7: pass = run_table("kernel-compare", false, detail); break;
      case 8: pass = criterion_8(detail); break;
      case 9: pass = criterion_9(detail); break;
      case 10: pass = criterion_10(detail); break;
      default:
        std::cerr << "criterion must be 1..10\n";
        return 2;
    }
  } catch (const std::exception& e) {
    std::cout << "[FAIL] criterion " << k << ": exception: " << e.what()
              << "\n";
    return 1;
  }
  std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << k << ": "
            << detail.str() << "\n";
  return pass ? 0 : 1;
}
