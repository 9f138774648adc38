#include "edgelab/percolation.hpp"

#include <algorithm>
#include <limits>

#include "edgelab/error.hpp"
#include "edgelab/parallel.hpp"
#include "edgelab/rng.hpp"

namespace edgelab {

WaitingMatrix::WaitingMatrix(int rows, int cols, std::uint64_t seed)
    : rows_(rows), cols_(cols), seed_(seed), entries_(static_cast<std::size_t>(rows) * cols, 0.0) {}

namespace {

void check_dims(const ModelParams& params, int N, int p) {
  if (N < 1 || N > p) throw Error(ErrorKind::InvalidArgument, "need 1 <= N <= p");
  if (params.pi.size() < static_cast<std::size_t>(p) || params.pihat.size() < static_cast<std::size_t>(N))
    throw Error(ErrorKind::LengthMismatch, "parameter vectors shorter than the requested grid");
}

}  // namespace

WaitingMatrix sample_waiting_matrix(const ModelParams& params, int N, int p, std::uint64_t seed) {
  check_dims(params, N, p);
  WaitingMatrix w(N, p, seed);
  Rng rng(seed);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < p; ++j) w(i, j) = rng.exponential(cell_rate(params, i, j));
  return w;
}

namespace {

// One sweep of the recurrence; calls on_row_end(i, Y(i, cols-1)) per row.
template <typename RowEnd>
void sweep(const WaitingMatrix& w, RowEnd&& on_row_end) {
  const int cols = w.cols();
  std::vector<double> row(static_cast<std::size_t>(cols), -std::numeric_limits<double>::infinity());
  for (int i = 0; i < w.rows(); ++i) {
    double left = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < cols; ++j) {
      const double best = (i == 0 && j == 0) ? 0.0 : std::max(row[j], left);
      row[j] = w(i, j) + best;
      left = row[j];
    }
    on_row_end(i, row[cols - 1]);
  }
}

}  // namespace

double last_passage(const WaitingMatrix& w) {
  if (w.rows() < 1 || w.cols() < 1) throw Error(ErrorKind::InvalidArgument, "empty waiting matrix");
  double last = 0.0;
  sweep(w, [&](int, double y) { last = y; });
  return last;
}

std::vector<double> last_passage_profile(const WaitingMatrix& w) {
  if (w.rows() < 1 || w.cols() < 1) throw Error(ErrorKind::InvalidArgument, "empty waiting matrix");
  std::vector<double> profile(static_cast<std::size_t>(w.rows()));
  sweep(w, [&](int i, double y) { profile[static_cast<std::size_t>(i)] = y; });
  return profile;
}

SampleBatch sample_lpp_batch(const ModelParams& params, int N, int p, std::size_t n_samples, std::uint64_t seed) {
  check_dims(params, N, p);
  if (n_samples < 1) throw Error(ErrorKind::InvalidArgument, "n_samples must be >= 1");
  SampleBatch batch{std::vector<double>(n_samples), seed, N, p, n_samples};
  parallel_for(n_samples, [&](std::size_t k) {
    batch.values[k] = last_passage(sample_waiting_matrix(params, N, p, derive_seed(seed, k + 1)));
  });
  return batch;
}

std::vector<std::vector<double>> sample_lpp_profiles(const ModelParams& params, int N, int p, std::size_t n_samples,
                                                     std::uint64_t seed) {
  check_dims(params, N, p);
  std::vector<std::vector<double>> out(n_samples);
  parallel_for(n_samples, [&](std::size_t k) {
    out[k] = last_passage_profile(sample_waiting_matrix(params, N, p, derive_seed(seed, k + 1)));
  });
  return out;
}

std::vector<std::vector<double>> sample_lpp_profiles(const ModelParams& params, int p, std::size_t n_samples,
                                                     std::uint64_t seed) {
  return sample_lpp_profiles(params, p, p, n_samples, seed);
}

}  // namespace edgelab
