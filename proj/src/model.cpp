#include "edgelab/model.hpp"

#include <cmath>
#include <string>

#include "edgelab/error.hpp"

namespace edgelab {

ModelParams validate_params(std::vector<double> pi, std::vector<double> pihat) {
  if (pi.empty() || pi.size() != pihat.size())
    throw Error(ErrorKind::LengthMismatch,
                "pi has " + std::to_string(pi.size()) + " entries, pihat has " + std::to_string(pihat.size()));
  for (std::size_t i = 0; i < pi.size(); ++i) {
    for (std::size_t j = 0; j < pihat.size(); ++j) {
      if (!(pi[i] + pihat[j] > 0.0))
        throw Error(ErrorKind::NonPositiveRate,
                    "(" + std::to_string(i + 1) + ", " + std::to_string(j + 1) + ")");
    }
  }
  return ModelParams{std::move(pi), std::move(pihat)};
}

ScalingSpec::ScalingSpec(double t, std::vector<double> x, std::vector<double> y)
    : t_(t), x_(std::move(x)), y_(std::move(y)) {
  if (!(t > 0.0 && t < 1.0)) throw Error(ErrorKind::InvalidArgument, "t must lie in (0, 1)");
  for (double xi : x_)
    for (double yj : y_)
      if (!(xi > yj)) throw Error(ErrorKind::InvalidArgument, "every x_i must exceed every y_j");
  const double sq = std::sqrt(t);
  alpha_ = std::pow(1.0 + sq, 4.0 / 3.0) / std::pow(t, 1.0 / 6.0);
  z0_ = sq / (1.0 + sq);
  time_slope_ = 2.0 * sq * (1.0 + sq) * (1.0 + sq) / alpha_;
}

ModelParams build_perturbed_params(const ScalingSpec& spec, int p) {
  const std::size_t j1 = spec.x().size(), j2 = spec.y().size();
  if (p < 1 || static_cast<std::size_t>(p) < std::max(j1, j2) + 1)
    throw Error(ErrorKind::InvalidArgument, "p must exceed the number of perturbed parameters");
  const double shift = spec.alpha() * std::cbrt(static_cast<double>(p));
  std::vector<double> pi(p, 1.0), pihat(p, 0.0);
  for (std::size_t i = 0; i < j1; ++i) pi[i] = spec.z0() + spec.x()[i] / shift;
  for (std::size_t j = 0; j < j2; ++j) pihat[j] = -spec.z0() - spec.y()[j] / shift;
  return validate_params(std::move(pi), std::move(pihat));
}

EdgeCoordinates edge_coordinates(const ScalingSpec& spec, int p, double time, double position) {
  const double pd = static_cast<double>(p);
  const double p23 = std::pow(pd, 2.0 / 3.0);
  const double level = std::floor(spec.t() * pd + p23 * spec.time_slope() * time);
  if (level < 1.0 || level > pd)
    throw Error(ErrorKind::LevelOutOfRange, "time " + std::to_string(time) + " maps outside [1, p]");
  EdgeCoordinates c;
  c.r = static_cast<int>(level);
  c.s1 = level / pd;
  const double edge = 1.0 + std::sqrt(c.s1);
  c.u = edge * edge + spec.alpha() * position / p23;
  c.conjugation_exponent = pd * spec.z0() * c.u - level * std::log(spec.z0());
  return c;
}

double pairwise_conjugation_exponent(const EdgeCoordinates& a, const EdgeCoordinates& b) noexcept {
  return a.conjugation_exponent - b.conjugation_exponent;
}

EdgeRescaled edge_rescale(const ScalingSpec& spec, int p, double time, double raw_value) {
  const EdgeCoordinates c = edge_coordinates(spec, p, time, 0.0);
  const double pd = static_cast<double>(p);
  EdgeRescaled out;
  out.level = c.r;
  out.value = (raw_value / pd - c.u) * std::pow(pd, 2.0 / 3.0) / spec.alpha();
  const double t = spec.t(), sq = std::sqrt(t);
  const double alpha_s = t + 2.0 * std::pow(t * (1.0 + sq), 2.0 / 3.0) * time / std::cbrt(pd);
  const double center = pd * (1.0 + std::sqrt(alpha_s)) * (1.0 + std::sqrt(alpha_s));
  out.literal = std::pow(t, 1.0 / 6.0) * std::pow(1.0 + sq, 4.0 / 3.0) * (raw_value - center) / std::cbrt(pd);
  return out;
}

}  // namespace edgelab
