#include <doctest.h>

#include <cmath>
#include <vector>

#include "bblr/metrics.hpp"

using namespace bblr;

namespace {

// Exact one-sided tail P[Bin(m, 1/2) >= k] from a Pascal triangle of
// long doubles; independent of the library's integer-arithmetic path.
long double binom_tail(int m, int k) {
  std::vector<long double> row = {1.0L};
  for (int n = 1; n <= m; ++n) {
    std::vector<long double> next(static_cast<std::size_t>(n) + 1, 1.0L);
    for (int j = 1; j < n; ++j)
      next[static_cast<std::size_t>(j)] =
          row[static_cast<std::size_t>(j - 1)] + row[static_cast<std::size_t>(j)];
    row = std::move(next);
  }
  long double tail = 0.0L;
  for (int j = k; j <= m; ++j) tail += row[static_cast<std::size_t>(j)];
  return tail / std::pow(2.0L, m);
}

}  // namespace

TEST_CASE("zero-one counting and percentages") {
  IntVec pred(4), y(4);
  pred << 1, 0, 1, 1;
  y << 1, 1, 1, 0;
  CHECK(zero_one_total(pred, y) == 2);
  CHECK(error_percent(pred, y) == doctest::Approx(50.0));
}

TEST_CASE("contingency counts discordant predictions only") {
  IntVec a(5), b(5), y(5);
  a << 1, 0, 1, 0, 1;
  b << 1, 1, 0, 0, 0;
  y << 1, 1, 1, 0, 0;
  // Case 1: both right. Case 2: a wrong, b right. Case 3: a right, b
  // wrong. Case 4: both right. Case 5: a wrong, b right.
  const ContingencyPair c = contingency(a, b, y);
  CHECK(c.n01 == 2);
  CHECK(c.n10 == 1);
}

TEST_CASE("the corrected statistic matches the worked example") {
  const McNemarResult r = mcnemar_test({10, 2});
  CHECK(r.z == doctest::Approx(7.0 / std::sqrt(12.0)).epsilon(1e-12));
  CHECK(r.z == doctest::Approx(2.0207).epsilon(1e-4));
  CHECK(r.defined);
  // Exact tail for (10, 2): P[Bin(12, .5) >= 10] = 79/4096 > 1%.
  CHECK_FALSE(r.significant);
}

TEST_CASE("no disagreements leaves the statistic undefined") {
  const McNemarResult r = mcnemar_test({0, 0});
  CHECK_FALSE(r.defined);
  CHECK(r.z == 0.0);
  CHECK_FALSE(r.significant);
}

TEST_CASE("small-count significance is the exact binomial tail") {
  // These straddle the 1% boundary where the z rule disagrees.
  CHECK(mcnemar_test({7, 0}).significant);    // tail 1/128 = 0.78%
  CHECK(mcnemar_test({0, 7}).significant);    // symmetric
  CHECK(mcnemar_test({15, 4}).significant);   // tail ~0.96%
  CHECK_FALSE(mcnemar_test({6, 0}).significant);  // tail 1/64 = 1.56%
  CHECK_FALSE(mcnemar_test({15, 5}).significant); // tail ~2.07%

  // Full agreement with the floating-point oracle for every pair with
  // a modest disagreement total.
  for (int m = 1; m <= 20; ++m) {
    for (int n01 = 0; n01 <= m; ++n01) {
      const int n10 = m - n01;
      const bool want = binom_tail(m, std::max(n01, n10)) <= 0.01L;
      CHECK(mcnemar_test({n01, n10}).significant == want);
    }
  }
}

TEST_CASE("large counts fall back to the z threshold") {
  // m = 100 disagreements: z = (|n01 - n10| - 1) / 10.
  CHECK_FALSE(mcnemar_test({62, 38}).significant);  // z = 2.3
  CHECK(mcnemar_test({63, 37}).significant);        // z = 2.5
  CHECK_FALSE(z_flags_significant(2.31));
  CHECK(z_flags_significant(2.32));
  CHECK(z_flags_significant(5.0));
}

TEST_CASE("pooling sums counts before testing") {
  const std::vector<ContingencyPair> folds = {{4, 1}, {3, 0}, {3, 1}};
  const McNemarResult pooled = pooled_mcnemar(folds);
  // Summed: n01 = 10, n10 = 2; same as the worked example.
  CHECK(pooled.z == doctest::Approx(2.0207).epsilon(1e-4));

  const McNemarResult empty = pooled_mcnemar({});
  CHECK_FALSE(empty.defined);
}
