#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "bblr/objective.hpp"
#include "bblr/optimizer.hpp"

using namespace bblr;

namespace {

// Strictly concave bowl with its peak at c.
struct Bowl {
  Vec c;
  Index dim() const { return c.size(); }
  Scalar value(const Vec& v) const { return -0.5 * (v - c).squaredNorm(); }
  Vec gradient(const Vec& v) const { return c - v; }
};

struct NowhereFinite {
  Index dim() const { return 1; }
  Scalar value(const Vec&) const {
    return std::numeric_limits<Scalar>::quiet_NaN();
  }
  Vec gradient(const Vec&) const { return Vec::Zero(1); }
};

// Two Gaussian bumps: a shallow one at 0 and the global peak at 2.
// Plain ascent started at 0 sees a vanishing gradient and stays; only a
// grid probe reaches the better hump.
struct DoubleBump {
  Index dim() const { return 1; }
  Scalar value(const Vec& v) const {
    const Scalar x = v[0];
    return std::exp(-8.0 * (x - 2.0) * (x - 2.0)) +
           0.4 * std::exp(-8.0 * x * x);
  }
  Vec gradient(const Vec& v) const {
    const Scalar x = v[0];
    Vec g(1);
    g[0] = -16.0 * (x - 2.0) * std::exp(-8.0 * (x - 2.0) * (x - 2.0)) -
           0.4 * 16.0 * x * std::exp(-8.0 * x * x);
    return g;
  }
  void set_gamma(Scalar) {}
  int train01(const Vec&) const { return 0; }
};

Dataset separable_line(Index per_class) {
  // One feature; classes split at zero with a unit gap.
  Dataset ds;
  ds.x = Mat(2 * per_class, 1);
  ds.y = IntVec(2 * per_class);
  for (Index i = 0; i < per_class; ++i) {
    ds.x(i, 0) = 1.0 + 0.1 * static_cast<Scalar>(i);
    ds.y[i] = 1;
    ds.x(per_class + i, 0) = -1.0 - 0.1 * static_cast<Scalar>(i);
    ds.y[per_class + i] = 0;
  }
  return ds;
}

}  // namespace

TEST_CASE("probe ladder enumerates nearest steps first, signed pairs") {
  const auto a = probe_steps(8.0, 0.2);
  REQUIRE(a.size() == 80);  // 40 multiples, r itself included as one
  CHECK(a[0] == doctest::Approx(0.2));
  CHECK(a[1] == doctest::Approx(-0.2));
  CHECK(a[2] == doctest::Approx(0.4));
  CHECK(a[78] == doctest::Approx(8.0));
  CHECK(a[79] == doctest::Approx(-8.0));

  // r off the grid: the endpoint pair is appended after the multiples.
  const auto b = probe_steps(1.0, 0.3);
  REQUIRE(b.size() == 8);
  CHECK(b[4] == doctest::Approx(0.9));
  CHECK(b[6] == doctest::Approx(1.0));
  CHECK(b[7] == doctest::Approx(-1.0));

  CHECK_THROWS_AS(probe_steps(0.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(probe_steps(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("schedule validation rejects nonsense") {
  SlaConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.r_gamma = 1.0;  // schedule would never advance
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.gamma_min = 300;  // above gamma_max
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.r_r = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.r_g = 1.0;  // rate would never back off
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("backtracking ascent finds a concave peak") {
  Bowl bowl;
  bowl.c = Vec(3);
  bowl.c << 1.0, -2.0, 0.25;
  SlaConfig cfg;
  Vec v0 = Vec::Zero(3);
  const Vec v = vanilla_grad_desc(bowl, v0, cfg);
  CHECK((v - bowl.c).lpNorm<Eigen::Infinity>() < 1e-3);

  Vec bad(3);
  bad << 1.0, std::numeric_limits<Scalar>::infinity(), 0.0;
  CHECK_THROWS_AS(vanilla_grad_desc(bowl, bad, cfg), std::domain_error);
  CHECK_THROWS_AS(vanilla_grad_desc(NowhereFinite{}, Vec::Zero(1), cfg),
                  std::domain_error);
}

TEST_CASE("grid probes escape a shallow local optimum") {
  DoubleBump f;
  SlaConfig cfg;
  long accepts = 0;
  const Vec v =
      grad_desc_in_range(f, Vec::Zero(1), cfg.r0, cfg.eps_s0, cfg, &accepts);

  // Brute-force oracle over the probe-reachable interval.
  Scalar best_x = 0, best_f = -1;
  for (Scalar x = -8; x <= 8; x += 1e-3) {
    Vec p(1);
    p[0] = x;
    if (f.value(p) > best_f) {
      best_f = f.value(p);
      best_x = x;
    }
  }
  CHECK(best_x == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(v[0] == doctest::Approx(best_x).epsilon(1e-2));
  CHECK(f.value(v) >= best_f - 1e-4);
  CHECK(accepts >= 1);

  // Without probes the start is already a stationary point.
  const Vec stuck = vanilla_grad_desc(f, Vec::Zero(1), cfg);
  CHECK(std::abs(stuck[0]) < 0.1);
}

TEST_CASE("single-coordinate probe values match full evaluations") {
  std::mt19937_64 gen(19);
  std::normal_distribution<Scalar> d(0.0, 1.0);
  Mat design(12, 4);
  for (Index i = 0; i < 12; ++i)
    for (Index j = 0; j < 4; ++j) design(i, j) = d(gen);
  IntVec y(12);
  for (Index i = 0; i < 12; ++i) y[i] = i % 2;

  std::vector<Cluster> assign(4, Cluster::Gauss);
  for (const Prior& prior :
       {Prior(GaussianPrior{0.3}), Prior(MixturePrior{0.5, 0.5, 1.0, 0.2, assign})}) {
    TrainObjective obj(design, y, BBHyper::from_counts(1, 1, 100, 3.0), prior);
    Vec v(4);
    v << 0.2, -0.4, 0.6, 0.1;
    for (Index i = 0; i < 4; ++i) {
      for (const Scalar step : {0.5, -1.25, 2.0}) {
        Vec shifted = v;
        shifted[i] += step;
        CHECK(obj.value_shifted(v, i, step) ==
              doctest::Approx(obj.value(shifted)).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("sigmoid objective matches its direct formula") {
  Mat design(3, 2);
  design << 1.0, 1.0, -0.5, 1.0, 2.0, 1.0;
  IntVec y(3);
  y << 1, 0, 1;
  const Scalar gamma = 2.0, l2 = 0.1;
  SigmoidSlaObjective obj(design, y, gamma, l2);
  Vec v(2);
  v << 0.7, -0.2;

  Scalar want = -0.5 * l2 * v.squaredNorm();
  for (Index i = 0; i < 3; ++i) {
    const Scalar s = design.row(i).dot(v);
    const Scalar t = y[i] == 1 ? 1.0 : -1.0;
    want -= 1.0 / (1.0 + std::exp(gamma * t * s));
  }
  CHECK(obj.value(v) == doctest::Approx(want).epsilon(1e-12));

  // Gradient against central differences.
  const Vec g = obj.gradient(v);
  for (Index j = 0; j < 2; ++j) {
    Vec up = v, dn = v;
    up[j] += 1e-6;
    dn[j] -= 1e-6;
    const Scalar fd = (obj.value(up) - obj.value(dn)) / 2e-6;
    CHECK(g[j] == doctest::Approx(fd).epsilon(1e-5));
  }
}

TEST_CASE("annealed fit walks the gamma ladder and nails separable data") {
  const Dataset ds = separable_line(10);
  const SlaConfig cfg;
  const FitReport report =
      find_sla_solution(ds, zero_model(1), BBHyper::from_counts(1, 1, 100),
                        GaussianPrior{0.01}, cfg, 77);

  REQUIRE(report.stages.size() == 3);
  CHECK(report.stages[0].gamma == doctest::Approx(2.0));
  CHECK(report.stages[1].gamma == doctest::Approx(20.0));
  CHECK(report.stages[2].gamma == doctest::Approx(200.0));
  CHECK(report.stages.back().train01 == 0);
  CHECK(report.coefficients.size() == 2);
  CHECK(std::isfinite(report.coefficients[0]));
  CHECK(report.seed == 77);
  CHECK(report.wall_ms >= 0.0);

  // Objective values are recorded per stage and are finite.
  for (const auto& s : report.stages) CHECK(std::isfinite(s.objective));
}

TEST_CASE("sparse annealing keeps a mixture prior consistent") {
  const Dataset ds = separable_line(8);
  Mat design = design_matrix(ds);
  const BBHyper hyper = empirical_hyper(ds.y);

  TrainObjective obj(design, ds.y, hyper,
                     MixturePrior{0.5, 0.5, 1.0, 0.1,
                                  std::vector<Cluster>(2, Cluster::Gauss)});
  REQUIRE(obj.sparse_mode());
  SlaConfig cfg;
  const FitReport report = find_sla_solution(obj, Vec::Zero(2), cfg);
  CHECK(report.stages.back().train01 == 0);
  // Hard EM ran: the stored prior reflects the final coefficients.
  const auto& prior = std::get<MixturePrior>(obj.prior());
  CHECK(prior.assign.size() == 2);
  CHECK_NOTHROW(prior.validate());
}
