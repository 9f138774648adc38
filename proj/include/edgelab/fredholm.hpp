#pragma once

#include <Eigen/Dense>
#include <vector>

#include "edgelab/kernels.hpp"

namespace edgelab::fredholm {

inline constexpr int kMaxMatrixSize = 2000;
inline constexpr double kDoublingTolerance = 1e-6;
inline constexpr double kTailTolerance = 1e-8;

// Block i lives on [thresholds[i], thresholds[i] + truncation] at time
// times[i] (a level for the finite kernel).
struct FredholmProblem {
  std::vector<double> times{0.0};
  std::vector<double> thresholds{0.0};
  double truncation = 14.0;
  int nodes_per_block = 40;
};

void validate_problem(const FredholmProblem& problem);

struct GapResult {
  double value = 1.0;       // det(I - A) at 2n nodes per block, unclamped
  double coarse = 1.0;      // det(I - A) at n nodes per block
  double difference = 0.0;  // |value - coarse|
  double tail = 0.0;        // max_i |K(t_i, xi_i + T; t_i, xi_i + T)|
  bool in_unit_interval = true;
  double projected = 1.0;  // value clamped to [0, 1]
  int nodes_per_block = 0;
};

// A[(i,a),(j,b)] = sqrt(w_a w_b) K(t_i, x_a; t_j, x_b), Gauss-Legendre nodes per block.
Eigen::MatrixXd nystrom_matrix(const kernels::KernelFunction& kernel, const FredholmProblem& problem, int nodes);

// det(I - A) by partial-pivot LU.
double det_identity_minus(const Eigen::MatrixXd& a);

// Throws TruncationInsufficient, NonConvergent, InvalidArgument.
GapResult gap_probability(const kernels::KernelFunction& kernel, const FredholmProblem& problem);

// Every threshold of the template set to each grid value in turn.
std::vector<GapResult> gap_curve(const kernels::KernelFunction& kernel, const FredholmProblem& problem,
                                 const std::vector<double>& xi_grid);

// |det(I - A) - det(I - D A D^{-1})|, D = diag(d).
double diagonal_gauge_check(const Eigen::MatrixXd& a, const Eigen::VectorXd& d);

}  // namespace edgelab::fredholm
