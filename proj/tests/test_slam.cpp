#include <doctest.h>

#include <cmath>
#include <random>

#include "bblr/model.hpp"
#include "bblr/objective.hpp"
#include "bblr/slam.hpp"

using namespace bblr;

namespace {

// Two noisy Gaussian blobs, linearly separable except for overlap.
Dataset blob_data(std::mt19937_64& gen, Index per_class, Scalar gap) {
  std::normal_distribution<Scalar> d(0.0, 1.0);
  Dataset ds;
  ds.x = Mat(2 * per_class, 2);
  ds.y = IntVec(2 * per_class);
  for (Index i = 0; i < per_class; ++i) {
    ds.x(i, 0) = gap + d(gen);
    ds.x(i, 1) = d(gen);
    ds.y[i] = 1;
    ds.x(per_class + i, 0) = -gap + d(gen);
    ds.x(per_class + i, 1) = d(gen);
    ds.y[per_class + i] = 0;
  }
  return ds;
}

}  // namespace

TEST_CASE("smooth fit improves the objective from zeros") {
  std::mt19937_64 gen(3);
  const Dataset ds = blob_data(gen, 20, 1.5);
  const Mat design = design_matrix(ds);
  const BBHyper hyper = empirical_hyper(ds.y);
  SlaConfig cfg;

  const Vec v = smooth_fit(design, ds.y, hyper, 1.0, 0.01, cfg);
  TrainObjective obj(design, ds.y, hyper, GaussianPrior{0.01});
  obj.set_gamma(1.0);
  CHECK(obj.value(v) > obj.value(Vec::Zero(3)));
  CHECK(obj.train01(v) < ds.rows() / 2);
}

TEST_CASE("grid search lands on a grid member and carries a warm start") {
  std::mt19937_64 gen(7);
  const Dataset ds = blob_data(gen, 25, 1.2);
  const Mat design = design_matrix(ds);
  const BBHyper hyper = empirical_hyper(ds.y);
  SlaConfig cfg;

  const std::vector<Scalar> lambdas = {1e-3, 1e-1};
  const std::vector<Scalar> gammas = {0.5, 2.0};
  const GridInit init =
      grid_init(design, ds.y, hyper, lambdas, gammas, cfg, 3, 11);

  const bool lambda_on_grid = init.lambda == 1e-3 || init.lambda == 1e-1;
  const bool gamma_on_grid = init.gamma_init == 0.5 || init.gamma_init == 2.0;
  CHECK(lambda_on_grid);
  CHECK(gamma_on_grid);
  CHECK(init.model0.size() == 3);
  CHECK(std::isfinite(init.model0[0]));

  const GridInit sig =
      grid_init_sigmoid(design, ds.y, lambdas, gammas, cfg, 3, 11);
  CHECK((sig.lambda == 1e-3 || sig.lambda == 1e-1));
}

TEST_CASE("a singleton search space short-circuits the meta search") {
  std::mt19937_64 gen(13);
  const Dataset ds = blob_data(gen, 15, 1.5);
  SlamSpace space;
  space.lambdas = {0.05};
  space.gamma_inits = {1.0};
  space.gamma_rates = {10.0};
  SlaConfig tmpl;

  const SlamResult got = slam_tune(ds, empirical_hyper(ds.y), space, tmpl, 3, 5);
  CHECK(got.lambda == 0.05);
  CHECK(got.gamma_init == 1.0);
  CHECK(got.cfg.r_gamma == 10.0);
  CHECK(got.cfg.gamma_min == tmpl.gamma_min);
  CHECK(got.cfg.gamma_max == tmpl.gamma_max);
  CHECK(got.model0.weights.size() == 3);
}

TEST_CASE("flat validation error keeps the default annealing endpoints") {
  // Wide separation: every schedule gets zero validation error, so no
  // bracket move is a strict improvement and the template endpoints
  // survive.
  std::mt19937_64 gen(17);
  const Dataset ds = blob_data(gen, 12, 30.0);
  SlamSpace space;
  space.lambdas = {1e-2};
  space.gamma_inits = {1.0};
  SlaConfig tmpl;

  const SlamResult got = slam_tune(ds, empirical_hyper(ds.y), space, tmpl, 3, 5);
  CHECK(got.cfg.gamma_min == doctest::Approx(2.0));
  CHECK(got.cfg.gamma_max == doctest::Approx(200.0));
  // Rate ties also break toward the coarsest schedule.
  CHECK(got.cfg.r_gamma == 10.0);
}

TEST_CASE("bblr3 is deterministic in the seed") {
  std::mt19937_64 gen(23);
  const Dataset ds = blob_data(gen, 20, 1.0);
  SlaConfig tmpl;

  const Bblr3Fit a = fit_bblr3(ds, tmpl, 3, 99);
  const Bblr3Fit b = fit_bblr3(ds, tmpl, 3, 99);
  CHECK(a.report.coefficients == b.report.coefficients);
  CHECK(a.tuned.lambda == b.tuned.lambda);
  CHECK(a.tuned.cfg.gamma_max == b.tuned.cfg.gamma_max);
  CHECK(a.hyper.mix_w == doctest::Approx(0.5));  // class counts are equal

  // The fit classifies the well-separated majority correctly.
  LinearModel m{a.report.coefficients};
  const IntVec pred = predict_labels(m, ds);
  int errors = 0;
  for (Index i = 0; i < ds.rows(); ++i) errors += pred[i] != ds.y[i];
  CHECK(errors <= ds.rows() / 4);
}

TEST_CASE("bblr4 returns a valid refinement or the base fit intact") {
  std::mt19937_64 gen(29);
  const Dataset ds = blob_data(gen, 25, 0.9);
  SlaConfig tmpl;

  const Bblr4Fit fit = fit_bblr4(ds, tmpl, 3, 7);
  CHECK(fit.report.coefficients.size() == 3);
  CHECK(std::isfinite(fit.report.coefficients[0]));
  CHECK(fit.hyper.mix_w >= 1e-4);
  CHECK(fit.hyper.mix_w <= 1.0 - 1e-4);
  CHECK(fit.hyper.theta_b >= 1e-4);
  CHECK(fit.hyper.theta_b <= 1.0 - 1e-4);
  CHECK(fit.hyper.gamma >= 0.5);
  CHECK(fit.hyper.gamma <= 2000.0);
  CHECK(fit.lambda > 0);
  CHECK_NOTHROW(fit.cfg.validate());

  const Bblr4Fit again = fit_bblr4(ds, tmpl, 3, 7);
  CHECK(fit.report.coefficients == again.report.coefficients);
  CHECK(fit.refined == again.refined);
}
