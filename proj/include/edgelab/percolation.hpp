#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "edgelab/model.hpp"

namespace edgelab {

// N x p array of independent exponential waiting times. Row i (0-based) is
// tied to pihat[i] and column j to pi[j]; cell (i, j) has rate pihat[i] + pi[j].
// This puts the short side of the grid on the pihat parameters, which is the
// side the matrix model's columns carry, so Y(N, p) and the largest eigenvalue
// of the p x N matrix model share one law.
class WaitingMatrix {
 public:
  WaitingMatrix(int rows, int cols, std::uint64_t seed);

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  std::uint64_t seed() const noexcept { return seed_; }

  double& operator()(int i, int j) { return entries_[static_cast<std::size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return entries_[static_cast<std::size_t>(i) * cols_ + j]; }

 private:
  int rows_, cols_;
  std::uint64_t seed_;
  std::vector<double> entries_;
};

struct SampleBatch {
  std::vector<double> values;
  std::uint64_t seed = 0;
  int rows = 0;  // N
  int cols = 0;  // p
  std::size_t n_samples = 0;
};

// Rate of cell (i, j) under the grid convention above.
inline double cell_rate(const ModelParams& params, int i, int j) {
  return params.pihat[static_cast<std::size_t>(i)] + params.pi[static_cast<std::size_t>(j)];
}

WaitingMatrix sample_waiting_matrix(const ModelParams& params, int N, int p, std::uint64_t seed);

// Longest up-right path weight from (0, 0) to (rows-1, cols-1).
double last_passage(const WaitingMatrix& w);

// {Y(k, p)}_{k=1..N}: last-passage values to the last column of every row.
std::vector<double> last_passage_profile(const WaitingMatrix& w);

// Sample k (1-based) uses derive_seed(seed, k).
SampleBatch sample_lpp_batch(const ModelParams& params, int N, int p, std::size_t n_samples, std::uint64_t seed);

// One profile {Y(k, p)}_{k=1..N} per sample; rows of the result are samples.
std::vector<std::vector<double>> sample_lpp_profiles(const ModelParams& params, int N, int p, std::size_t n_samples,
                                                     std::uint64_t seed);
// Square grid, N = p.
std::vector<std::vector<double>> sample_lpp_profiles(const ModelParams& params, int p, std::size_t n_samples,
                                                     std::uint64_t seed);

}  // namespace edgelab
