#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "edgelab/model.hpp"
#include "edgelab/percolation.hpp"

namespace edgelab {

// p x N complex Gaussian matrix; entry (i, j) has E|X_ij|^2 = 1 / (pi[i] + pihat[j]).
// Entries are drawn column by column, so the first k columns of a p x N draw
// coincide with the p x k draw from the same seed.
struct ComplexMatrix {
  Eigen::MatrixXcd entries;
  std::uint64_t seed = 0;
};

struct Spectrum {
  std::vector<double> eigenvalues;  // descending
  double max_residual = 0.0;        // max_k ||M v_k - lambda_k v_k|| / ||M||
};

ComplexMatrix sample_gwishart(const ModelParams& params, int N, int p, std::uint64_t seed);

// Spectrum of X X^*. Throws ConvergenceFailure if an eigenpair misses the
// residual bound 1e-10 ||M||.
Spectrum hermitian_spectrum(const ComplexMatrix& x);

SampleBatch sample_lambda_max_batch(const ModelParams& params, int N, int p, std::size_t n_samples,
                                    std::uint64_t seed);

// {lambda_max(X_k X_k^*)}_{k=1..p} for one draw of the p x p matrix.
std::vector<double> sample_growth_profile(const ModelParams& params, int p, std::uint64_t seed);

std::vector<std::vector<double>> sample_growth_profiles(const ModelParams& params, int p, std::size_t n_samples,
                                                        std::uint64_t seed);

// Joint density of the ordered eigenvalues x_1 >= ... >= x_p of X_p X_p^*:
// det(e^{-pi_i x_j}) det(e^{-pihat_i x_j}) / Z with Z = det(1/(pi_i + pihat_j))
// from the Cauchy product in log space. Requires distinct pi and distinct pihat.
double schur_density(const ModelParams& params, std::span<const double> xs);

// log |Z| and sign(Z) of the Cauchy determinant.
struct CauchyDeterminant {
  double log_abs = 0.0;
  int sign = 1;
};
CauchyDeterminant cauchy_determinant(const ModelParams& params);

}  // namespace edgelab
