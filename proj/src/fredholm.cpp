#include "edgelab/fredholm.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "edgelab/error.hpp"
#include "edgelab/parallel.hpp"

namespace edgelab::fredholm {

using Eigen::Index;

void validate_problem(const FredholmProblem& problem) {
  if (problem.times.empty() || problem.times.size() != problem.thresholds.size())
    throw Error(ErrorKind::LengthMismatch, "times and thresholds must be nonempty and of equal length");
  if (problem.nodes_per_block < 8) throw Error(ErrorKind::InvalidArgument, "nodes_per_block must be at least 8");
  if (!(problem.truncation > 0.0)) throw Error(ErrorKind::InvalidArgument, "truncation must be positive");
  if (problem.times.size() * 2 * static_cast<std::size_t>(problem.nodes_per_block) > kMaxMatrixSize)
    throw Error(ErrorKind::InvalidArgument, "doubled Nystrom matrix would exceed " + std::to_string(kMaxMatrixSize));
}

Eigen::MatrixXd nystrom_matrix(const kernels::KernelFunction& kernel, const FredholmProblem& problem, int nodes) {
  const std::size_t m = problem.times.size();
  std::vector<specfun::RealRule> rules;
  for (double xi : problem.thresholds)
    rules.push_back(specfun::gauss_legendre_interval(nodes, xi, xi + problem.truncation));
  Eigen::MatrixXd a(static_cast<Index>(m * nodes), static_cast<Index>(m * nodes));
  parallel_for(m * m, [&](std::size_t task) {
    const std::size_t i = task / m, j = task % m;
    const Eigen::MatrixXd block = kernel.block(problem.times[i], rules[i].nodes, problem.times[j], rules[j].nodes);
    for (int p = 0; p < nodes; ++p)
      for (int q = 0; q < nodes; ++q)
        a(static_cast<Index>(i * nodes + p), static_cast<Index>(j * nodes + q)) =
            std::sqrt(rules[i].weights[p] * rules[j].weights[q]) * block(p, q);
  });
  return a;
}

double det_identity_minus(const Eigen::MatrixXd& a) {
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(a.rows(), a.cols());
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(id - a);
  // Pivots are accumulated in log space; a diagonally conjugated matrix can
  // carry pivots whose running product overflows.
  const Eigen::MatrixXd& u = lu.matrixLU();
  double log_abs = 0.0, sign = lu.permutationP().determinant();
  for (Index i = 0; i < u.rows(); ++i) {
    const double v = u(i, i);
    if (v == 0.0) return 0.0;
    if (v < 0.0) sign = -sign;
    log_abs += std::log(std::abs(v));
  }
  return sign * std::exp(log_abs);
}

GapResult gap_probability(const kernels::KernelFunction& kernel, const FredholmProblem& problem) {
  validate_problem(problem);
  GapResult out;
  for (std::size_t i = 0; i < problem.times.size(); ++i) {
    const double edge = problem.thresholds[i] + problem.truncation;
    out.tail = std::max(out.tail, std::abs(kernel.block(problem.times[i], {edge}, problem.times[i], {edge})(0, 0)));
  }
  if (out.tail > kTailTolerance) {
    std::ostringstream msg;
    msg << "kernel magnitude " << out.tail << " at the truncation edge; increase T";
    throw Error(ErrorKind::TruncationInsufficient, msg.str());
  }
  const int n = problem.nodes_per_block;
  out.coarse = det_identity_minus(nystrom_matrix(kernel, problem, n));
  out.value = det_identity_minus(nystrom_matrix(kernel, problem, 2 * n));
  out.difference = std::abs(out.value - out.coarse);
  out.nodes_per_block = 2 * n;
  if (out.difference > kDoublingTolerance) {
    std::ostringstream msg;
    msg << "node doubling " << n << " -> " << 2 * n << " changed the determinant by " << out.difference;
    throw Error(ErrorKind::NonConvergent, msg.str());
  }
  out.in_unit_interval = out.value >= 0.0 && out.value <= 1.0;
  out.projected = std::clamp(out.value, 0.0, 1.0);
  return out;
}

std::vector<GapResult> gap_curve(const kernels::KernelFunction& kernel, const FredholmProblem& problem,
                                 const std::vector<double>& xi_grid) {
  std::vector<GapResult> out;
  out.reserve(xi_grid.size());
  for (double xi : xi_grid) {
    FredholmProblem p = problem;
    std::fill(p.thresholds.begin(), p.thresholds.end(), xi);
    out.push_back(gap_probability(kernel, p));
  }
  return out;
}

double diagonal_gauge_check(const Eigen::MatrixXd& a, const Eigen::VectorXd& d) {
  if (d.size() != a.rows() || a.rows() != a.cols()) throw Error(ErrorKind::LengthMismatch, "scale vector size");
  for (Index i = 0; i < d.size(); ++i)
    if (d(i) == 0.0 || std::abs(std::log(std::abs(d(i)))) > 200.0)
      throw Error(ErrorKind::InvalidArgument, "scale entries must be nonzero with |log d| <= 200");
  const Eigen::MatrixXd conj = d.asDiagonal() * a * d.cwiseInverse().asDiagonal();
  return std::abs(det_identity_minus(a) - det_identity_minus(conj));
}

}  // namespace edgelab::fredholm
