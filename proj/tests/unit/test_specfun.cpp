#include <cmath>
#include <numbers>

#include "doctest.h"
#include "edgelab/error.hpp"
#include "edgelab/specfun.hpp"

using namespace edgelab;
using namespace edgelab::specfun;

namespace {

const cdouble kTwoPiI(0.0, 2.0 * std::numbers::pi);

// First zero of Ai by bisection on the series.
double first_zero() {
  double lo = -2.5, hi = -2.0;
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    (airy_ai_series(mid) > 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("Airy values") {
  const double ai0 = std::pow(3.0, -2.0 / 3.0) / std::tgamma(2.0 / 3.0);
  CHECK(std::abs(airy_ai(0.0) - ai0) < 1e-15);
  CHECK(std::abs(airy_ai(0.0) - 0.355028053887817) < 1e-14);
  CHECK(std::abs(airy_ai_prime(0.0) + std::pow(3.0, -1.0 / 3.0) / std::tgamma(1.0 / 3.0)) < 1e-15);
  double previous = airy_ai(0.0);
  for (int k = 1; k <= 200; ++k) {
    const double v = airy_ai(0.05 * k);
    CHECK(v > 0.0);
    CHECK(v < previous);
    previous = v;
  }
  const double z = first_zero();
  CHECK(z == doctest::Approx(-2.338107410459767).epsilon(1e-12));
  CHECK(std::abs(airy_ai(z)) <= 1e-9);
}

TEST_CASE("Airy branches agree where they overlap") {
  for (double x : {-7.0, -6.5, -6.0, -5.0, 5.0, 6.0, 6.5, 7.0}) {
    CHECK(std::abs(airy_ai_series(x) - airy_ai_contour(x)) < 1e-13);
    CHECK(std::abs(airy_ai_prime_series(x) - airy_ai_prime_contour(x)) < 1e-12);
  }
  CHECK(airy_ai(10.0) == doctest::Approx(1.104753462460453e-10).epsilon(1e-12));
  CHECK(airy_ai(-10.0) == doctest::Approx(0.040241238486441955).epsilon(1e-12));
  CHECK_THROWS_AS(airy_ai(31.0), Error);
}

TEST_CASE("Gauss-Legendre") {
  const RealRule& one = gauss_legendre_real(1);
  CHECK(one.nodes[0] == 0.0);
  CHECK(one.weights[0] == 2.0);
  const RealRule& three = gauss_legendre_real(3);
  double x4 = 0.0;
  for (int k = 0; k < 3; ++k) x4 += three.weights[k] * std::pow(three.nodes[k], 4);
  CHECK(std::abs(x4 - 0.4) <= 1e-14);
  for (int n : {1, 2, 5, 16, 64, 200, 512}) {
    const RealRule& r = gauss_legendre_real(n);
    double sum = 0.0;
    for (double w : r.weights) {
      CHECK(w > 0.0);
      sum += w;
    }
    CHECK(std::abs(sum - 2.0) < 1e-13);
    // degree 2n - 1 exactness on x^(2n-2)
    double moment = 0.0;
    for (int k = 0; k < n; ++k) moment += r.weights[k] * std::pow(r.nodes[k], 2 * n - 2);
    if (n <= 16) CHECK(std::abs(moment - 2.0 / (2 * n - 1)) < 1e-13);
  }
  const RealRule mapped = gauss_legendre_interval(8, 1.0, 4.0);
  double len = 0.0;
  for (double w : mapped.weights) len += w;
  CHECK(len == doctest::Approx(3.0));
  CHECK_THROWS_AS(gauss_legendre_real(0), Error);
}

TEST_CASE("circle rules") {
  const QuadratureRule c = circle_contour(cdouble(0.5, 0.0), 1.0, 64);
  const cdouble inside = c.integrate([](cdouble w) { return 1.0 / (w - cdouble(0.7, 0.2)); });
  const cdouble outside = c.integrate([](cdouble w) { return 1.0 / (w - cdouble(2.0, 0.0)); });
  CHECK(std::abs(inside - kTwoPiI) < 1e-10);
  CHECK(std::abs(outside) < 1e-10);

  const QuadratureRule z = circle_contour(0.0, 1.0, 32);
  const cdouble third = z.integrate([](cdouble w) { return std::exp(w) / (w * w * w); }) / kTwoPiI;
  CHECK(std::abs(third - 0.5) < 1e-12);

  auto err = [](int n) {
    const QuadratureRule r = circle_contour(0.0, 1.0, n);
    return std::abs(r.integrate([](cdouble w) { return std::exp(w) / (w - 2.0); }));
  };
  CHECK(err(32) / err(16) < 1e-2);
  CHECK_THROWS_AS(circle_contour(0.0, 1.0, 4), Error);
  CHECK_THROWS_AS(circle_contour(0.0, -1.0, 16), Error);
}

TEST_CASE("wedge rules") {
  const ContourSpec right = right_wedge_spec(0.5);
  CHECK(right.angle == doctest::Approx(std::numbers::pi / 3.0));
  CHECK(left_wedge_spec(-0.5).angle == doctest::Approx(2.0 * std::numbers::pi / 3.0));
  CHECK(right.truncation_radius > 0.0);

  // Down orientation gives -Ai; reversing gives Ai.
  const QuadratureRule down = wedge_contour(right);
  auto ai = [](const QuadratureRule& r, double x) {
    return r.integrate([x](cdouble s) { return std::exp(s * s * s / 3.0 - x * s); }) / kTwoPiI;
  };
  CHECK(std::abs(ai(down, 0.0) + airy_ai_series(0.0)) < 1e-10);
  CHECK(std::abs(ai(down.reversed(), 0.0) - airy_ai_series(0.0)) < 1e-10);
  CHECK(std::abs(ai(down.reversed(), 1.3) - airy_ai_series(1.3)) < 1e-10);

  ContourSpec longer = right;
  longer.truncation_radius *= 2.0;
  longer.panels *= 2;
  CHECK(std::abs(ai(wedge_contour(longer), 0.0) - ai(down, 0.0)) < 1e-12);

  // Left wedge, upward: (1/2 pi i) int e^{-t^3/3 + x t} dt = Ai(x).
  const QuadratureRule up = wedge_contour(left_wedge_spec(-0.5));
  const cdouble v = up.integrate([](cdouble t) { return std::exp(-t * t * t / 3.0 + 0.4 * t); }) / kTwoPiI;
  CHECK(std::abs(v - airy_ai_series(0.4)) < 1e-10);

  ContourSpec bad = right;
  bad.truncation_radius = -1.0;
  CHECK_THROWS_AS(wedge_contour(bad), Error);
  bad = right;
  bad.angle = 4.0;
  CHECK_THROWS_AS(wedge_contour(bad), Error);
}
