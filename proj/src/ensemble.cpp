#include "edgelab/ensemble.hpp"

#include <algorithm>
#include <cmath>

#include "edgelab/error.hpp"
#include "edgelab/parallel.hpp"
#include "edgelab/rng.hpp"

namespace edgelab {

ComplexMatrix sample_gwishart(const ModelParams& params, int N, int p, std::uint64_t seed) {
  if (N < 1 || N > p) throw Error(ErrorKind::InvalidArgument, "need 1 <= N <= p");
  if (params.pi.size() < static_cast<std::size_t>(p) || params.pihat.size() < static_cast<std::size_t>(N))
    throw Error(ErrorKind::LengthMismatch, "parameter vectors shorter than the requested matrix");
  ComplexMatrix x{Eigen::MatrixXcd(p, N), seed};
  Rng rng(seed);
  for (int j = 0; j < N; ++j) {
    for (int i = 0; i < p; ++i) {
      const double sd = std::sqrt(0.5 / params.pair_rate(static_cast<std::size_t>(i), static_cast<std::size_t>(j)));
      const double re = rng.normal() * sd;
      const double im = rng.normal() * sd;
      x.entries(i, j) = {re, im};
    }
  }
  return x;
}

Spectrum hermitian_spectrum(const ComplexMatrix& x) {
  const Eigen::MatrixXcd m = x.entries * x.entries.adjoint();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::ConvergenceFailure, "Hermitian eigensolver failed");
  const double norm = std::max(m.norm(), 1e-300);
  Spectrum s;
  const Eigen::Index n = m.rows();
  s.eigenvalues.resize(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) {
    const double lambda = solver.eigenvalues()(k);
    const double res = (m * solver.eigenvectors().col(k) - lambda * solver.eigenvectors().col(k)).norm() / norm;
    s.max_residual = std::max(s.max_residual, res);
    s.eigenvalues[static_cast<std::size_t>(n - 1 - k)] = lambda;
  }
  if (s.max_residual > 1e-10) throw Error(ErrorKind::ConvergenceFailure, "eigenpair residual above 1e-10 ||M||");
  return s;
}

SampleBatch sample_lambda_max_batch(const ModelParams& params, int N, int p, std::size_t n_samples,
                                    std::uint64_t seed) {
  if (n_samples < 1) throw Error(ErrorKind::InvalidArgument, "n_samples must be >= 1");
  SampleBatch batch{std::vector<double>(n_samples), seed, N, p, n_samples};
  parallel_for(n_samples, [&](std::size_t k) {
    batch.values[k] = hermitian_spectrum(sample_gwishart(params, N, p, derive_seed(seed, k + 1))).eigenvalues.front();
  });
  return batch;
}

std::vector<double> sample_growth_profile(const ModelParams& params, int p, std::uint64_t seed) {
  const ComplexMatrix full = sample_gwishart(params, p, p, seed);
  std::vector<double> profile(static_cast<std::size_t>(p));
  for (int k = 1; k <= p; ++k) {
    const ComplexMatrix head{full.entries.leftCols(k), seed};
    profile[static_cast<std::size_t>(k - 1)] = hermitian_spectrum(head).eigenvalues.front();
  }
  return profile;
}

std::vector<std::vector<double>> sample_growth_profiles(const ModelParams& params, int p, std::size_t n_samples,
                                                        std::uint64_t seed) {
  std::vector<std::vector<double>> out(n_samples);
  parallel_for(n_samples, [&](std::size_t k) { out[k] = sample_growth_profile(params, p, derive_seed(seed, k + 1)); });
  return out;
}

CauchyDeterminant cauchy_determinant(const ModelParams& params) {
  const std::size_t p = params.size();
  CauchyDeterminant z;
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = i + 1; j < p; ++j) {
      const double a = params.pi[i] - params.pi[j];
      const double b = params.pihat[i] - params.pihat[j];
      if (std::abs(a) < 1e-9 || std::abs(b) < 1e-9)
        throw Error(ErrorKind::DegenerateParameters, "coincident rates; the confluent density is not implemented");
      z.log_abs += std::log(std::abs(a)) + std::log(std::abs(b));
      if ((a < 0) != (b < 0)) z.sign = -z.sign;
    }
  }
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) z.log_abs -= std::log(params.pair_rate(i, j));
  return z;
}

double schur_density(const ModelParams& params, std::span<const double> xs) {
  const std::size_t p = params.size();
  if (xs.size() != p) throw Error(ErrorKind::LengthMismatch, "need one point per parameter");
  const CauchyDeterminant z = cauchy_determinant(params);
  Eigen::MatrixXd a(p, p), b(p, p);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      a(i, j) = std::exp(-params.pi[i] * xs[j]);
      b(i, j) = std::exp(-params.pihat[i] * xs[j]);
    }
  }
  const double product = a.partialPivLu().determinant() * b.partialPivLu().determinant();
  return z.sign * product * std::exp(-z.log_abs);
}

}  // namespace edgelab
