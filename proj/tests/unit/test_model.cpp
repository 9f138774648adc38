#include <cmath>

#include "doctest.h"
#include "edgelab/error.hpp"
#include "edgelab/model.hpp"

using namespace edgelab;

namespace {

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::ConfigError;
}

}  // namespace

TEST_CASE("validate_params accepts positive pairwise sums") {
  const ModelParams m = validate_params({1.0}, {1.0});
  CHECK(m.pair_rate(0, 0) == 2.0);
  const ModelParams m2 = validate_params({1.0, 1.0 / 3.0}, {0.0, -0.2});
  CHECK(m2.pair_rate(1, 1) == doctest::Approx(0.1333333333333));
}

TEST_CASE("validate_params rejects a zero sum and ragged lengths") {
  CHECK(kind_of([] { validate_params({0.5}, {-0.5}); }) == ErrorKind::NonPositiveRate);
  try {
    validate_params({0.5}, {-0.5});
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("(1, 1)") != std::string::npos);
  }
  CHECK(kind_of([] { validate_params({1.0, 2.0}, {1.0}); }) == ErrorKind::LengthMismatch);
  CHECK(kind_of([] { validate_params({}, {}); }) == ErrorKind::LengthMismatch);
}

TEST_CASE("scaling spec constants") {
  const ScalingSpec s(0.25);
  CHECK(s.alpha() == doctest::Approx(std::pow(1.5, 4.0 / 3.0) / std::pow(0.25, 1.0 / 6.0)).epsilon(1e-15));
  CHECK(s.alpha() == doctest::Approx(2.1634).epsilon(1e-4));
  CHECK(s.z0() == doctest::Approx(1.0 / 3.0));
  CHECK(s.time_slope() == doctest::Approx(2.0 * std::pow(0.25 * 1.5, 2.0 / 3.0)).epsilon(1e-14));
  CHECK(kind_of([] { ScalingSpec(0.0); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { ScalingSpec(1.0); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { ScalingSpec(0.25, {1.0}, {1.0}); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("perturbed parameters") {
  const ModelParams flat = build_perturbed_params(ScalingSpec(0.4), 5);
  for (double v : flat.pi) CHECK(v == 1.0);
  for (double v : flat.pihat) CHECK(v == 0.0);

  const ScalingSpec s(0.25, {1.0});
  const ModelParams m = build_perturbed_params(s, 1000);
  CHECK(m.pi[0] == doctest::Approx(1.0 / 3.0 + 1.0 / (s.alpha() * 10.0)).epsilon(1e-14));
  CHECK(m.pi[1] == 1.0);

  const ScalingSpec s2(0.25, {1.0}, {-1.0});
  const ModelParams m2 = build_perturbed_params(s2, 8);
  CHECK(m2.pair_rate(0, 0) == doctest::Approx(2.0 / (s2.alpha() * 2.0)).epsilon(1e-14));
}

TEST_CASE("edge coordinates") {
  const ScalingSpec s(0.25);
  const EdgeCoordinates c = edge_coordinates(s, 100, 0.0, 0.0);
  CHECK(c.r == 25);
  CHECK(c.s1 == doctest::Approx(0.25));
  CHECK(c.u == doctest::Approx(2.25));
  CHECK(c.conjugation_exponent == doctest::Approx(100.0 * c.u / 3.0 - 25.0 * std::log(1.0 / 3.0)));

  const EdgeCoordinates cx = edge_coordinates(s, 100, 0.0, 1.5);
  CHECK(cx.u == doctest::Approx(2.25 + s.alpha() * 1.5 / std::pow(100.0, 2.0 / 3.0)).epsilon(1e-14));

  const EdgeCoordinates c1 = edge_coordinates(s, 1000, 1.0, 0.0);
  CHECK(c1.r == static_cast<int>(std::floor(250.0 + 100.0 * 2.0 * std::pow(0.25 * 1.5, 2.0 / 3.0))));

  CHECK(kind_of([&] { edge_coordinates(s, 100, 40.0, 0.0); }) == ErrorKind::LevelOutOfRange);
  CHECK(pairwise_conjugation_exponent(c, c) == 0.0);
}

TEST_CASE("edge rescaling") {
  const ScalingSpec s(0.25);
  const int p = 64;
  const EdgeCoordinates c = edge_coordinates(s, p, 0.0, 0.0);
  const double centre = p * (1.0 + std::sqrt(c.s1)) * (1.0 + std::sqrt(c.s1));
  CHECK(std::abs(edge_rescale(s, p, 0.0, centre).value) < 1e-12);
  const double xi = 0.7;
  CHECK(edge_rescale(s, p, 0.0, centre + s.alpha() * std::cbrt(64.0) * xi).value == doctest::Approx(xi));

  // Both printed forms at raw 150: the ratio is the constant (1 + sqrt t)^{8/3}.
  const EdgeRescaled e = edge_rescale(s, p, 0.0, 150.0);
  CHECK(e.level == 16);
  CHECK(e.literal / e.value == doctest::Approx(std::pow(1.5, 8.0 / 3.0)).epsilon(1e-12));
}
