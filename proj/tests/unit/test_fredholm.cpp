#include <cmath>

#include "doctest.h"
#include "edgelab/error.hpp"
#include "edgelab/fredholm.hpp"
#include "edgelab/rng.hpp"

using namespace edgelab;
using namespace edgelab::fredholm;

TEST_CASE("zero kernel") {
  const kernels::ZeroKernel zero;
  const GapResult g = gap_probability(zero, {});
  CHECK(g.value == 1.0);
  CHECK(g.tail == 0.0);
}

TEST_CASE("rank-one closure") {
  const ModelParams m = validate_params({1.3}, {0.4});
  const kernels::FiniteKernel k(m);
  FredholmProblem pr;
  pr.times = {1.0};
  pr.truncation = 20.0;
  for (double xi : {0.1, 0.5, 1.0, 2.0}) {
    pr.thresholds = {xi};
    CHECK(std::abs(gap_probability(k, pr).value - (1.0 - std::exp(-1.7 * xi))) <= 1e-8);
  }
  pr.truncation = 1.0;
  pr.thresholds = {0.1};
  CHECK_THROWS_AS(gap_probability(k, pr), Error);
}

TEST_CASE("Tracy-Widom from the Airy kernel") {
  const kernels::AiryKernel airy;
  FredholmProblem pr;
  pr.nodes_per_block = 40;
  const GapResult at0 = gap_probability(airy, pr);
  CHECK(at0.difference <= 1e-8);
  CHECK(at0.value == doctest::Approx(0.969372828355262).epsilon(1e-10));

  const std::vector<double> grid{-6.0, -3.0, -2.0, -1.0, 0.0, 2.0, 6.0};
  const std::vector<GapResult> curve = gap_curve(airy, pr, grid);
  for (std::size_t k = 1; k < curve.size(); ++k) CHECK(curve[k].value >= curve[k - 1].value);
  CHECK(curve.front().value <= 1e-3);
  CHECK(curve.back().value >= 1.0 - 1e-4);
  CHECK(curve[2].value == doctest::Approx(0.413224142505).epsilon(1e-8));

  FredholmProblem single = pr;
  single.thresholds = {-1.0};
  CHECK(gap_probability(airy, single).value == curve[3].value);
}

TEST_CASE("two-time determinant is below both marginals") {
  const kernels::AiryKernel airy;
  FredholmProblem pr;
  pr.times = {0.0, 0.5};
  pr.thresholds = {0.0, 0.0};
  pr.nodes_per_block = 30;
  const double joint = gap_probability(airy, pr).value;
  FredholmProblem a;
  a.nodes_per_block = 30;
  const double first = gap_probability(airy, a).value;
  a.times = {0.5};
  const double second = gap_probability(airy, a).value;
  CHECK(joint <= std::min(first, second));
  CHECK(joint >= first + second - 1.0);
}

TEST_CASE("problem validation") {
  const kernels::ZeroKernel zero;
  FredholmProblem pr;
  pr.times = {0.0, 1.0};
  CHECK_THROWS_AS(gap_probability(zero, pr), Error);
  pr = {};
  pr.truncation = 0.0;
  CHECK_THROWS_AS(gap_probability(zero, pr), Error);
  pr = {};
  pr.nodes_per_block = 4;
  CHECK_THROWS_AS(gap_probability(zero, pr), Error);
  pr = {};
  pr.nodes_per_block = 1200;
  CHECK_THROWS_AS(gap_probability(zero, pr), Error);
}

TEST_CASE("diagonal gauge invariance") {
  Rng rng(314);
  const int n = 20;
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = rng.uniform() - 0.5;
  a *= 0.4 / a.eigenvalues().cwiseAbs().maxCoeff();
  CHECK(diagonal_gauge_check(a, Eigen::VectorXd::Ones(n)) == 0.0);
  Eigen::VectorXd d(n);
  for (int i = 0; i < n; ++i) d(i) = std::exp(10.0 * (rng.uniform() - 0.5));
  CHECK(diagonal_gauge_check(a, d) <= 1e-10);
  for (int i = 0; i < n; ++i) d(i) = std::exp(i % 2 == 0 ? 200.0 : -200.0);
  CHECK(diagonal_gauge_check(a, d) <= 1e-8);
  d(0) = 0.0;
  CHECK_THROWS_AS(diagonal_gauge_check(a, d), Error);
}

TEST_CASE("scaled finite kernel determinant") {
  const kernels::ScaledFiniteKernel k(ScalingSpec(0.25), 100);
  FredholmProblem pr;
  pr.nodes_per_block = 30;
  const GapResult g = gap_probability(k, pr);
  CHECK(g.difference <= 1e-6);
  CHECK(std::abs(g.value - 0.969372828355262) < 0.05);
}
