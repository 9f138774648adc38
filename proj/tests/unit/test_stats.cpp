#include <cmath>

#include "doctest.h"
#include "edgelab/error.hpp"
#include "edgelab/rng.hpp"
#include "edgelab/stats.hpp"

using namespace edgelab;

TEST_CASE("ecdf") {
  const std::vector<double> s{1.0, 2.0, 3.0};
  const stats::Ecdf f(s);
  CHECK(f(2.0) == doctest::Approx(2.0 / 3.0));
  CHECK(f(0.0) == 0.0);
  CHECK(f(3.0) == 1.0);
  const std::vector<double> d{1.0, 1.0, 2.0};
  CHECK(stats::ecdf(d)(1.0) == doctest::Approx(2.0 / 3.0));
  CHECK_THROWS_AS(stats::Ecdf(std::vector<double>{}), Error);
}

TEST_CASE("two-sample KS") {
  const std::vector<double> a{1.0, 2.0, 3.0, 4.0};
  const stats::KsResult same = stats::ks_two_sample(a, a);
  CHECK(same.statistic == 0.0);
  CHECK(same.p_value == 1.0);
  const std::vector<double> far{10.0, 11.0};
  CHECK(stats::ks_two_sample(a, far).statistic == 1.0);
  const std::vector<double> x{1.0, 2.0}, y{1.5, 2.5};
  CHECK(stats::ks_two_sample(x, y).statistic == doctest::Approx(0.5));
}

TEST_CASE("one-sample KS") {
  const auto expcdf = [](double x) { return x <= 0 ? 0.0 : -std::expm1(-2.0 * x); };
  std::vector<double> p_values;
  double worst = 0.0;
  for (int k = 1; k <= 10; ++k) {
    Rng rng(derive_seed(9, k));
    std::vector<double> s(10000);
    for (double& v : s) v = rng.exponential(2.0);
    p_values.push_back(stats::ks_one_sample(s, expcdf).p_value);
    worst = std::max(worst, stats::ks_one_sample(s, [&](double x) { return expcdf(x - 1.0); }).p_value);
  }
  CHECK(stats::seed_verdict(p_values).pass);
  CHECK(worst < 1e-6);

  const std::vector<double> single{0.0};
  CHECK(stats::ks_one_sample(single, [](double x) { return 0.5 * (1.0 + std::erf(x)); }).statistic ==
        doctest::Approx(0.5));
  const std::vector<double> two{0.0, 1.0};
  CHECK_THROWS_AS(stats::ks_one_sample(two, [](double x) { return x < 0.5 ? 0.9 : 0.1; }), Error);
}

TEST_CASE("kolmogorov survival") {
  CHECK(stats::kolmogorov_q(0.0) == 1.0);
  CHECK(stats::kolmogorov_q(1.36) == doctest::Approx(0.0494).epsilon(0.01));
  CHECK(stats::kolmogorov_q(3.0) < 1e-6);
}

TEST_CASE("seed verdict") {
  CHECK(stats::seed_verdict({0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.001}).pass);
  CHECK_FALSE(stats::seed_verdict({0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.001, 0.001}).pass);
}

TEST_CASE("monotone interpolant and moments") {
  const stats::MonotoneInterpolant f({0.0, 1.0, 2.0}, {0.0, 0.6, 0.5});
  CHECK(f(-1.0) == 0.0);
  CHECK(f(0.5) == doctest::Approx(0.3));
  CHECK(f(1.5) == doctest::Approx(0.6));
  CHECK(f(5.0) == doctest::Approx(0.6));
  const std::vector<double> a{1.0, 2.0, 3.0}, b{2.0, 4.0, 6.0}, c{3.0, 2.0, 1.0};
  CHECK(stats::mean(a) == 2.0);
  CHECK(stats::variance(a) == doctest::Approx(1.0));
  CHECK(stats::correlation(a, b) == doctest::Approx(1.0));
  CHECK(stats::correlation(a, c) == doctest::Approx(-1.0));
}
