#include <cmath>

#include "doctest.h"
#include "edgelab/ensemble.hpp"
#include "edgelab/error.hpp"
#include "edgelab/parallel.hpp"
#include "edgelab/percolation.hpp"
#include "edgelab/rng.hpp"
#include "edgelab/specfun.hpp"
#include "edgelab/stats.hpp"

using namespace edgelab;

TEST_CASE("entry variances") {
  const ModelParams m = validate_params({0.5, 2.0}, {0.5, 1.0});
  const int n = 100000;
  Eigen::MatrixXd second = Eigen::MatrixXd::Zero(2, 2), fourth = Eigen::MatrixXd::Zero(2, 2);
  for (int k = 1; k <= n; ++k) {
    const ComplexMatrix x = sample_gwishart(m, 2, 2, derive_seed(3, k));
    const Eigen::MatrixXd a = x.entries.cwiseAbs2();
    second += a;
    fourth += a.cwiseProduct(a);
  }
  second /= n;
  fourth /= n;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const double expected = 1.0 / m.pair_rate(i, j);
      const double sd = std::sqrt((fourth(i, j) - second(i, j) * second(i, j)) / n);
      CHECK(std::abs(second(i, j) - expected) < 3.0 * sd);
    }
}

TEST_CASE("sampling is reproducible and nests by columns") {
  const ModelParams m = validate_params({0.5, 1.0, 1.5}, {0.1, 0.2, 0.3});
  const ComplexMatrix a = sample_gwishart(m, 3, 3, 17), b = sample_gwishart(m, 3, 3, 17);
  CHECK(a.entries == b.entries);
  const ComplexMatrix c = sample_gwishart(m, 2, 3, 17);
  CHECK(c.entries == a.entries.leftCols(2));
}

TEST_CASE("hermitian spectrum") {
  ComplexMatrix id{Eigen::MatrixXcd::Identity(3, 3), 0};
  for (double v : hermitian_spectrum(id).eigenvalues) CHECK(v == doctest::Approx(1.0));

  ComplexMatrix col{Eigen::MatrixXcd(2, 1), 0};
  col.entries << std::complex<double>(1.0, 2.0), std::complex<double>(-0.5, 0.25);
  const Spectrum s = hermitian_spectrum(col);
  CHECK(s.eigenvalues[0] == doctest::Approx(5.0 + 0.3125));
  CHECK(std::abs(s.eigenvalues[1]) < 1e-14);

  const ModelParams m = validate_params({0.5, 1.0, 1.5, 2.0}, {0.1, 0.2, 0.3, 0.4});
  const ComplexMatrix x = sample_gwishart(m, 4, 4, 23);
  const Spectrum r = hermitian_spectrum(x);
  double sum = 0.0;
  for (std::size_t k = 0; k < r.eigenvalues.size(); ++k) {
    sum += r.eigenvalues[k];
    CHECK(r.eigenvalues[k] >= -1e-12);
    if (k > 0) CHECK(r.eigenvalues[k] <= r.eigenvalues[k - 1]);
  }
  CHECK(std::abs(sum - (x.entries * x.entries.adjoint()).trace().real()) < 1e-10);
  CHECK(r.max_residual <= 1e-10);
}

TEST_CASE("one-by-one matrix law is exponential") {
  const ModelParams m = validate_params({1.2}, {0.3});
  std::vector<double> p_values;
  for (int k = 1; k <= 10; ++k) {
    const SampleBatch b = sample_lambda_max_batch(m, 1, 1, 10000, derive_seed(5, k));
    p_values.push_back(stats::ks_one_sample(b.values, [](double x) { return x <= 0 ? 0.0 : -std::expm1(-1.5 * x); }).p_value);
  }
  CHECK(stats::seed_verdict(p_values).pass);
}

TEST_CASE("largest eigenvalue matches last passage at p=3, N=2") {
  const ModelParams m = validate_params({0.6, 0.95, 1.3}, {0.1, 0.3, 0.5});
  std::vector<double> p_values;
  for (int k = 1; k <= 10; ++k) {
    const std::uint64_t base = derive_seed(2024, k);
    const SampleBatch a = sample_lpp_batch(m, 2, 3, 10000, stream_seed(base, Stream::Percolation));
    const SampleBatch b = sample_lambda_max_batch(m, 2, 3, 10000, stream_seed(base, Stream::Wishart));
    p_values.push_back(stats::ks_two_sample(a.values, b.values).p_value);
  }
  CHECK(stats::seed_verdict(p_values).pass);
}

TEST_CASE("thread count does not change batches") {
  const ModelParams m = validate_params({0.6, 0.95, 1.3}, {0.1, 0.3, 0.5});
  set_thread_count(1);
  const SampleBatch a = sample_lambda_max_batch(m, 3, 3, 300, 8);
  set_thread_count(3);
  const SampleBatch b = sample_lambda_max_batch(m, 3, 3, 300, 8);
  set_thread_count(0);
  CHECK(a.values == b.values);
}

TEST_CASE("growth profiles") {
  const ModelParams m = validate_params({0.6, 0.95, 1.3, 1.65}, {0.1, 0.3, 0.5, 0.7});
  const std::vector<double> g = sample_growth_profile(m, 4, 31);
  for (std::size_t k = 1; k < g.size(); ++k) CHECK(g[k] >= g[k - 1] - 1e-12);
  CHECK(g.back() == doctest::Approx(hermitian_spectrum(sample_gwishart(m, 4, 4, 31)).eigenvalues[0]).epsilon(1e-12));

  const ModelParams one = validate_params({1.0}, {0.5});
  const std::vector<double> g1 = sample_growth_profile(one, 1, 4);
  REQUIRE(g1.size() == 1);
  CHECK(g1[0] == doctest::Approx(std::norm(sample_gwishart(one, 1, 1, 4).entries(0, 0))));
}

TEST_CASE("schur density") {
  const ModelParams one = validate_params({1.5}, {0.5});
  const double x[1] = {0.7};
  CHECK(schur_density(one, x) == doctest::Approx(2.0 * std::exp(-1.4)).epsilon(1e-14));

  const ModelParams two = validate_params({1.0, 2.0}, {0.0, 0.5});
  // Ordered region x1 >= x2 >= 0, truncated at 20.
  const specfun::RealRule outer = specfun::composite_gauss_legendre(20, 32, 0.0, 20.0);
  double total = 0.0;
  for (std::size_t a = 0; a < outer.nodes.size(); ++a) {
    const double x1 = outer.nodes[a];
    const specfun::RealRule inner = specfun::composite_gauss_legendre(8, 32, 0.0, x1);
    for (std::size_t b = 0; b < inner.nodes.size(); ++b) {
      const double pt[2] = {x1, inner.nodes[b]};
      total += outer.weights[a] * inner.weights[b] * schur_density(two, pt);
    }
  }
  CHECK(std::abs(total - 1.0) < 1e-6);

  Rng rng(77);
  for (int k = 0; k < 10000; ++k) {
    double a = 10.0 * rng.uniform(), b = 10.0 * rng.uniform();
    if (a < b) std::swap(a, b);
    const double pt[2] = {a, b};
    CHECK(schur_density(two, pt) >= 0.0);
  }
}
