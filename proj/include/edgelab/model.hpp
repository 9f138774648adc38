#pragma once

#include <cstddef>
#include <vector>

namespace edgelab {

// Rate vectors of the inhomogeneous model; every pairwise sum pi[i] + pihat[j]
// is strictly positive. Indices are 0-based in code.
struct ModelParams {
  std::vector<double> pi;
  std::vector<double> pihat;

  std::size_t size() const noexcept { return pi.size(); }
  double pair_rate(std::size_t i, std::size_t j) const { return pi[i] + pihat[j]; }
};

// Throws LengthMismatch or NonPositiveRate (message carries 1-based (i, j)).
ModelParams validate_params(std::vector<double> pi, std::vector<double> pihat);

// Perturbed-edge regime: 0 < t < 1 and x[i] > y[j] for all pairs.
class ScalingSpec {
 public:
  ScalingSpec(double t, std::vector<double> x = {}, std::vector<double> y = {});

  double t() const noexcept { return t_; }
  const std::vector<double>& x() const noexcept { return x_; }
  const std::vector<double>& y() const noexcept { return y_; }
  bool empty() const noexcept { return x_.empty() && y_.empty(); }

  // (1 + sqrt t)^{4/3} / t^{1/6}
  double alpha() const noexcept { return alpha_; }
  // sqrt t / (1 + sqrt t), the double critical point of the unperturbed phase.
  double z0() const noexcept { return z0_; }
  // Level shift per unit time in units of p^{2/3}: 2 sqrt t (1 + sqrt t)^2 / alpha.
  double time_slope() const noexcept { return time_slope_; }

 private:
  double t_;
  std::vector<double> x_, y_;
  double alpha_, z0_, time_slope_;
};

ModelParams build_perturbed_params(const ScalingSpec& spec, int p);

// Edge-scaled point (level r, unscaled-by-p position u) for a (time, position)
// pair. conjugation_exponent = p z0 u - r ln z0 is the per-point additive part
// of the real gauge exponent; pairwise exponents are differences of these.
struct EdgeCoordinates {
  int r = 1;
  double u = 0.0;
  double s1 = 0.0;
  double conjugation_exponent = 0.0;
};

EdgeCoordinates edge_coordinates(const ScalingSpec& spec, int p, double time, double position);

// p z0 (u - v) - (r - s) ln z0
double pairwise_conjugation_exponent(const EdgeCoordinates& a, const EdgeCoordinates& b) noexcept;

struct EdgeRescaled {
  double value = 0.0;    // (Y/p - (1 + sqrt(r/p))^2) p^{2/3} / alpha
  double literal = 0.0;  // p^{-1/3} t^{1/6} (1 + sqrt t)^{4/3} (Y - p (1 + sqrt(alpha_s))^2)
  int level = 1;
};

// Maps a raw last-passage value observed at level r(time) to the edge scale.
EdgeRescaled edge_rescale(const ScalingSpec& spec, int p, double time, double raw_value);

}  // namespace edgelab
