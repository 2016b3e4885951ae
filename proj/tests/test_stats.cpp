#include <cmath>

#include "doctest.h"
#include "retrobell/stats.hpp"
#include "support.hpp"

using namespace retrobell;

TEST_CASE("mean estimate") {
  const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  const auto e = mean_estimate(v);
  CHECK(e.value == 2.5);
  // sample sd = sqrt(5/3); se = sd / 2
  CHECK(e.std_error == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0));
  CHECK_THROWS_AS(mean_estimate(std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("two-sample KS statistic") {
  // ECDFs of {1,2,3} and {2.5,4}: largest gap is 2/3 at x = 2 (F_a = 2/3, F_b = 0).
  const std::vector<double> a{3.0, 1.0, 2.0};
  const std::vector<double> b{4.0, 2.5};
  CHECK(ks_statistic(a, b) == doctest::Approx(2.0 / 3.0));
  CHECK(ks_statistic(a, a) == 0.0);
  // Ties across samples are stepped together.
  CHECK(ks_statistic(std::vector<double>{1, 1, 2}, std::vector<double>{1, 2, 2}) ==
        doctest::Approx(1.0 / 3.0));
  CHECK_THROWS_AS(ks_statistic(std::vector<double>{}, b), std::invalid_argument);
}

TEST_CASE("one-sample KS statistic") {
  const std::vector<double> u{0.1, 0.4, 0.7};
  // Against U(0,1): D = max(1/3 - 0.1, 2/3 - 0.4, 1 - 0.7, 0.1, 0.4 - 1/3, 0.7 - 2/3) = 0.3
  CHECK(ks_statistic(u, [](double x) { return x; }) == doctest::Approx(0.3));
}

TEST_CASE("KS critical values") {
  CHECK(ks_coefficient(0.01) == doctest::Approx(1.6276).epsilon(1e-4));
  CHECK(ks_coefficient(0.05) == doctest::Approx(1.3581).epsilon(1e-4));
  CHECK(ks_critical(0.01, 10000) == doctest::Approx(0.016276).epsilon(1e-4));
  CHECK(ks_critical(0.01, 100, 100) == doctest::Approx(1.6276 * std::sqrt(0.02)).epsilon(1e-4));
}

TEST_CASE("KS accepts matching and rejects shifted normals") {
  Rng rng(12);
  std::normal_distribution<double> n;
  std::vector<double> a(20000), b(20000), c(20000);
  for (auto& x : a) x = n(rng);
  for (auto& x : b) x = n(rng);
  for (auto& x : c) x = n(rng) + 0.1;
  CHECK(ks_statistic(a, b) < ks_critical(0.01, a.size(), b.size()));
  CHECK(ks_statistic(a, c) > ks_critical(0.01, a.size(), c.size()));
  CHECK(ks_statistic(a, [](double x) { return testing::normal_cdf(x, 0, 1); }) <
        ks_critical(0.01, a.size()));
}

TEST_CASE("total variation") {
  const std::vector<double> p{0.0, 0.5, 0.5, 0.0}, q{0.25, 0.25, 0.25, 0.25};
  CHECK(total_variation(p, q) == doctest::Approx(0.5));
  CHECK(total_variation(p, p) == 0.0);
  CHECK(total_variation(q, p) == total_variation(p, q));
  CHECK_THROWS_AS(total_variation(p, std::vector<double>{1.0}), std::invalid_argument);

  HistogramGrid grid{0, 0.0, 1.0, 2};
  DensityHistogram a(grid), b(grid);
  a.add_coordinate(0.5, 3.0);
  a.add_coordinate(1.5, 1.0);
  b.add_coordinate(0.5, 1.0);
  b.add_coordinate(5.0, 1.0);  // overflow counts as its own cell
  CHECK(total_variation(a, b) == doctest::Approx(0.5 * (0.25 + 0.25 + 0.5)));
}

TEST_CASE("bootstrap of the TV distance") {
  Rng rng(3);
  SUBCASE("same distribution: divergence sits at the null level") {
    std::vector<double> a{2500, 2500, 2500, 2500}, b{2480, 2520, 2510, 2490};
    const auto boot = bootstrap_tv(a, b, 400, rng);
    const double tv = total_variation(std::vector<double>{.25, .25, .25, .25},
                                      std::vector<double>{.248, .252, .251, .249});
    CHECK(boot.null_sd > 0.0);
    CHECK(tv < boot.null_mean + 3.0 * boot.null_sd);
  }
  SUBCASE("different distributions: divergence far above the null") {
    std::vector<double> a{4000, 3000, 2000, 1000}, b{1000, 2000, 3000, 4000};
    const auto boot = bootstrap_tv(a, b, 400, rng);
    CHECK(0.4 > boot.null_mean + 10.0 * boot.null_sd);
    CHECK(boot.standard_error > 0.0);
    CHECK(boot.standard_error < 0.01);
  }
  CHECK_THROWS_AS(bootstrap_tv(std::vector<double>{1, 2}, std::vector<double>{1}, 10, rng),
                  std::invalid_argument);
  CHECK_THROWS_AS(bootstrap_tv(std::vector<double>{0, 0}, std::vector<double>{1, 1}, 10, rng),
                  std::invalid_argument);
}
