#include <cmath>

#include "doctest.h"
#include "edgelab/error.hpp"
#include "edgelab/kernels.hpp"
#include "edgelab/specfun.hpp"

using namespace edgelab;
using namespace edgelab::kernels;

namespace {

double airy_identity(double s) {
  const double a = specfun::airy_ai_series(s), ap = specfun::airy_ai_prime_series(s);
  return ap * ap - s * a * a;
}

const std::vector<double> kGrid{-2.0, -1.0, 0.0, 1.0, 2.0};

}  // namespace

TEST_CASE("static Airy diagonal identity") {
  CHECK(std::abs(extended_airy(0.0, 0.0, 0.0, 0.0) - airy_identity(0.0)) <= 1e-8);
  CHECK(std::abs(extended_airy(0.0, 0.0, 0.0, 0.0) - 0.0669874837796640) <= 1e-12);
  for (double s : {-3.0, -1.2, 0.7, 2.5}) CHECK(std::abs(extended_airy(0.3, s, 0.3, s) - airy_identity(s)) <= 1e-8);
}

TEST_CASE("extended Airy basic properties") {
  for (double x : kGrid)
    for (double y : kGrid) CHECK(extended_airy(0.2, x, 0.2, y) == doctest::Approx(extended_airy(0.2, y, 0.2, x)));
  CHECK(std::abs(extended_airy(1.0, 8.0, 0.0, 8.0)) <= 1e-6);
  CHECK(std::abs(extended_airy(0.5, 9.0, 0.0, 10.0)) <= 1e-6);
  CHECK_THROWS_AS(extended_airy(5.0, 0.0, 0.0, 0.0), Error);
  CHECK_THROWS_AS(extended_airy(0.0, 31.0, 0.0, 0.0), Error);
  CHECK_THROWS_AS(extended_airy(0.0, -11.0, 0.0, 0.0), Error);
}

TEST_CASE("t1 < t2 branch against the direct left half-line integral") {
  const double t1 = 0.0, t2 = 1.0, x = 0.3, y = -0.7;
  const specfun::RealRule rule = specfun::composite_gauss_legendre(120, 32, -29.0, 0.0);
  double direct = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const double l = rule.nodes[k];
    direct -= rule.weights[k] * std::exp(-l * (t1 - t2)) * specfun::airy_ai(x + l) * specfun::airy_ai(y + l);
  }
  CHECK(std::abs(extended_airy(t1, x, t2, y) - direct) < 1e-9);
}

TEST_CASE("contour form of the extended Airy kernel") {
  CHECK(std::abs(extended_airy_contour(0.0, 0.0, 0.0, 0.0) - extended_airy(0.0, 0.0, 0.0, 0.0)) <= 1e-6);
  for (double t1 : {0.0, 0.5, 1.0})
    for (double t2 : {0.0, -0.5})
      for (double x : kGrid)
        for (double y : kGrid) {
          const ContourValue v = extended_airy_contour_full(t1, x, t2, y);
          CHECK(std::abs(v.value - extended_airy(t1, x, t2, y)) <= 1e-6);
          CHECK(v.imag_residue <= 1e-9);
        }
  CHECK_THROWS_AS(extended_airy_contour(0.0, 0.0, 0.5, 0.0), Error);
  LimitContourOptions crossed;
  crossed.gamma_vertex = -0.2;
  crossed.Gamma_vertex = 0.3;
  CHECK_THROWS_AS(extended_airy_contour(0.0, 0.0, 0.0, 0.0, crossed), Error);
}

TEST_CASE("contour deformation drift") {
  const ScalingSpec spec(0.25, {2.0}, {-2.0});
  const LimitVertices v = limit_vertices(spec.x(), spec.y(), {});
  LimitContourOptions moved;
  moved.gamma_vertex = v.gamma + 0.25;
  moved.Gamma_vertex = v.Gamma;
  for (double x : {-1.0, 0.0, 1.5})
    for (double y : {-1.0, 0.5}) {
      CHECK(std::abs(extended_airy_contour(0.4, x, 0.0, y, moved) - extended_airy_contour(0.4, x, 0.0, y)) <= 1e-8);
      CHECK(std::abs(perturbation_term(0.4, x, 0.0, y, spec, moved) - perturbation_term(0.4, x, 0.0, y, spec)) <= 1e-8);
    }
}

TEST_CASE("limit vertices") {
  const LimitVertices empty = limit_vertices({}, {}, {});
  CHECK(empty.gamma == doctest::Approx(0.5));
  CHECK(empty.Gamma == doctest::Approx(-0.5));
  const LimitVertices tight = limit_vertices({0.2}, {-0.2}, {});
  CHECK(tight.Gamma > -0.2);
  CHECK(tight.gamma < 0.2);
  CHECK(tight.Gamma < tight.gamma);
}

TEST_CASE("perturbation term") {
  CHECK(perturbation_term(0.3, 0.1, 0.0, -0.4, ScalingSpec(0.25)) == 0.0);
  CHECK(extended_airy_two_params(0.3, 0.1, 0.0, -0.4, ScalingSpec(0.25)) == extended_airy(0.3, 0.1, 0.0, -0.4));

  // A far pole only contributes 1/(s - x1): the term is Ai(x) Ai(y) / x1 (1 + O(1/x1)).
  for (double x1 : {50.0, 100.0}) {
    const ScalingSpec far(0.25, {x1});
    for (double x : kGrid)
      for (double y : kGrid) {
        const double lead = specfun::airy_ai(x) * specfun::airy_ai(y) / x1;
        CHECK(std::abs(perturbation_term(0.0, x, 0.0, y, far) - lead) <= 4.0 / (x1 * x1));
      }
  }

  const ScalingSpec one(0.25, {1.0});
  const double kxy = extended_airy_two_params(0.0, 0.5, 0.0, -0.5, one);
  const double kyx = extended_airy_two_params(0.0, -0.5, 0.0, 0.5, one);
  MESSAGE("J1=1 static kernel: K(x,y)=" << kxy << " K(y,x)=" << kyx);
  CHECK(std::abs(kxy - kyx) > 1e-8);

  const ContourValue full = perturbation_term_full(0.5, 0.0, 0.0, 0.0, ScalingSpec(0.25, {2.0}, {-2.0}));
  CHECK(full.imag_residue <= 1e-9);
  CHECK(full.value == doctest::Approx(perturbation_term(0.5, 0.0, 0.0, 0.0, ScalingSpec(0.25, {2.0}, {-2.0}))));
}

TEST_CASE("subset expansion agrees with the perturbation term") {
  const std::vector<ScalingSpec> specs{ScalingSpec(0.25, {1.0}), ScalingSpec(0.25, {}, {-1.0}),
                                       ScalingSpec(0.25, {2.0}, {-2.0}), ScalingSpec(0.25, {2.0, 3.0}, {-1.0})};
  CHECK(finite_rank_expansion(0.5, 0.0, 0.0, 0.0, ScalingSpec(0.25)) == 0.0);
  for (const ScalingSpec& spec : specs)
    for (double x : kGrid)
      for (double y : kGrid)
        CHECK(std::abs(perturbation_term(0.5, x, 0.0, y, spec) - finite_rank_expansion(0.5, x, 0.0, y, spec)) <= 1e-6);
}

TEST_CASE("perturbation block matches pointwise evaluation") {
  const ScalingSpec spec(0.25, {2.0}, {-2.0});
  Eigen::MatrixXd imag;
  const Eigen::MatrixXd b = perturbation_block(0.5, kGrid, 0.0, {0.0, 1.0}, spec, {}, &imag);
  CHECK(b(3, 1) == doctest::Approx(perturbation_term(0.5, 1.0, 0.0, 1.0, spec)).epsilon(1e-12));
  CHECK(imag.cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("psi") {
  const ModelParams m = validate_params({1.0, 1.0, 1.0, 1.0}, {0.7, 0.0, 0.0, 0.3});
  CHECK(psi_rs(m, 2, 0.0, 2, 1.0) == 0.0);
  CHECK(psi_rs(m, 3, 0.0, 2, 1.0) == 0.0);
  CHECK(psi_rs(m, 1, 1.0, 2, 0.5) == 0.0);
  // Levels are 1-based: (r, s] = {4} has pihat_4 = 0.3.
  CHECK(psi_rs(m, 3, 0.2, 4, 1.7) == doctest::Approx(std::exp(-0.3 * 1.5)).epsilon(1e-12));
  CHECK(psi_rs(m, 1, 0.2, 3, 1.7) == doctest::Approx(1.5).epsilon(1e-12));
  // Mixed poles via the contour: 1/(w+0)(w+0.3) residues.
  const double mixed = psi_rs(m, 2, 0.0, 4, 2.0);
  CHECK(mixed == doctest::Approx((1.0 - std::exp(-0.6)) / 0.3).epsilon(1e-10));
  const LogValue lv = log_psi_rs(m, 3, 0.2, 4, 1.7);
  CHECK(lv.sign == 1.0);
  CHECK(lv.log_abs == doctest::Approx(-0.45));
  CHECK_THROWS_AS(psi_rs(m, 0, 0.0, 2, 1.0), Error);
}

TEST_CASE("finite kernel at p=1") {
  const ModelParams m = validate_params({1.3}, {0.4});
  for (double u : {0.0, 0.5, 2.0})
    for (double v : {0.1, 1.0}) {
      const double exact = 1.7 * std::exp(-1.3 * u - 0.4 * v);
      CHECK(finite_kernel(m, 1, u, 1, v) == doctest::Approx(exact).epsilon(1e-12));
    }
  const specfun::RealRule rule = specfun::composite_gauss_legendre(20, 16, 0.0, 40.0);
  const FiniteKernel k(m);
  const Eigen::MatrixXd diag = k.block(1.0, rule.nodes, 1.0, rule.nodes);
  double total = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) total += rule.weights[i] * diag(i, i);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("finite kernel circle-node doubling") {
  const ModelParams m = validate_params({0.8, 1.4}, {0.2, 0.5});
  FiniteContourOptions coarse, fine;
  coarse.circle_nodes = 128;
  fine.circle_nodes = 256;
  for (double u : {0.3, 1.0, 2.5})
    for (double v : {0.2, 1.5}) {
      const double a = finite_kernel(m, 2, u, 2, v, coarse), b = finite_kernel(m, 2, u, 2, v, fine);
      CHECK(std::abs(a - b) <= 1e-8);
    }
  CHECK_THROWS_AS(finite_kernel(m, 3, 0.0, 1, 0.0), Error);
}

TEST_CASE("finite contours are validated") {
  const ModelParams m = validate_params({0.8, 1.4}, {0.2, 0.5});
  const FiniteContours good = auto_circles(m, 64);
  CHECK_NOTHROW(validate_contours(m, good));
  FiniteContours bad = good;
  bad.z = specfun::circle_contour(0.8, 0.1, 64);
  CHECK_THROWS_AS(validate_contours(m, bad), Error);
  bad = good;
  std::swap(bad.z, bad.w);
  CHECK_THROWS_AS(validate_contours(m, bad), Error);
}

TEST_CASE("edge-scaled finite kernel") {
  const ScalingSpec empty(0.25);
  const double k100 = scaled_finite_kernel(empty, 100, 0.0, 0.0, 0.0, 0.0);
  CHECK(std::abs(k100 - 0.0669874837796640) <= 0.05);

  FiniteContourOptions circles;
  const ScalingSpec spec(0.25, {1.0}, {-1.0});
  const KernelSlice wedge = scaled_finite_kernel_block(spec, 12, 0.0, {-1.0, 0.5}, 0.0, {0.0, 1.0});
  const KernelSlice circ = scaled_finite_kernel_block(spec, 12, 0.0, {-1.0, 0.5}, 0.0, {0.0, 1.0}, circles);
  CHECK((wedge.value - circ.value).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(wedge.max_imag_residue <= 1e-8 * (1.0 + wedge.value.cwiseAbs().maxCoeff()));

  Eigen::MatrixXd limit = extended_airy_block(0.0, kGrid, 0.0, kGrid);
  double previous = 1e300;
  for (int p : {50, 100, 200}) {
    const KernelSlice s = scaled_finite_kernel_block(empty, p, 0.0, kGrid, 0.0, kGrid);
    const double err = (s.value - limit).cwiseAbs().maxCoeff();
    CHECK(err < previous);
    CHECK(s.max_imag_residue <= 1e-8);
    previous = err;
  }
}
