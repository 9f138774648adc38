#pragma once

#include <Eigen/Dense>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "edgelab/model.hpp"
#include "edgelab/specfun.hpp"

namespace edgelab::kernels {

using specfun::cdouble;

// Supported window for the limit kernels.
inline constexpr double kMaxTimeGap = 4.0;
inline constexpr double kMinPosition = -10.0;
inline constexpr double kMaxPosition = 30.0;

// ---------------------------------------------------------------------------
// Extended Airy kernel

// t1 >= t2: int_0^inf e^{-l (t1 - t2)} Ai(x + l) Ai(y + l) dl
// t1 <  t2: -int_{-inf}^0 of the same integrand, evaluated as the l >= 0
//           integral minus the closed-form full-line integral
//           (4 pi s)^{-1/2} exp(s^3/12 - s (x + y)/2 - (x - y)^2 / (4 s)), s = t2 - t1.
// Throws UnsupportedWindow outside |t1 - t2| <= 4, positions in [-10, 30].
double extended_airy(double t1, double x, double t2, double y);
Eigen::MatrixXd extended_airy_block(double t1, const std::vector<double>& xs, double t2,
                                    const std::vector<double>& ys);

// Contours for the double integrals of the limit kernels. Vertices are given
// in shifted coordinates s' = sigma + t1 (gamma) and t' = tau + t2 (Gamma), the
// coordinates in which the parameter poles sit at x_i and y_j.
struct LimitContourOptions {
  double truncation_radius = 12.0;
  int panels = 24;
  int nodes_per_panel = 16;
  double vertex_offset = 0.5;
  std::optional<double> gamma_vertex;
  std::optional<double> Gamma_vertex;
};

struct LimitVertices {
  double gamma = 0.5;
  double Gamma = -0.5;
};

// lo = max y, hi = min x, h = min(offset, (hi - lo)/4), m = clamp(0, lo + 2h, hi - 2h);
// gamma at m + h, Gamma at m - h. Overrides are taken verbatim.
LimitVertices limit_vertices(const std::vector<double>& x, const std::vector<double>& y,
                             const LimitContourOptions& options);

// (1/(2 pi i)^2) int_gamma ds int_Gamma dt e^{y t - t^3/3 - x s + s^3/3} / (t - s + t2 - t1).
// Requires t1 >= t2 (UnsupportedWindow) and the shifted Gamma vertex strictly
// left of the shifted gamma vertex (BadContours), so the denominator has
// negative real part on the whole product contour.
double extended_airy_contour(double t1, double x, double t2, double y, const LimitContourOptions& options = {});

struct ContourValue {
  double value = 0.0;
  double imag_residue = 0.0;
};
ContourValue extended_airy_contour_full(double t1, double x, double t2, double y,
                                        const LimitContourOptions& options = {});

// Second term of the two-parameter kernel; the bracket
// prod (t2 + t - x_i)/(t1 + s - x_i) prod (t1 + s - y_j)/(t2 + t - y_j) - 1
// divided by (t + t2 - s - t1), replaced by a divided difference in t when that
// denominator is below 1e-6. Exactly 0 without perturbation parameters.
// Throws ContourInfeasible if overridden vertices put a pole on the wrong side.
double perturbation_term(double t1, double x, double t2, double y, const ScalingSpec& spec,
                         const LimitContourOptions& options = {});
ContourValue perturbation_term_full(double t1, double x, double t2, double y, const ScalingSpec& spec,
                                    const LimitContourOptions& options = {});
Eigen::MatrixXd perturbation_block(double t1, const std::vector<double>& xs, double t2, const std::vector<double>& ys,
                                   const ScalingSpec& spec, const LimitContourOptions& options = {},
                                   Eigen::MatrixXd* imag_part = nullptr);

double extended_airy_two_params(double t1, double x, double t2, double y, const ScalingSpec& spec,
                                const LimitContourOptions& options = {});
Eigen::MatrixXd extended_airy_two_params_block(double t1, const std::vector<double>& xs, double t2,
                                               const std::vector<double>& ys, const ScalingSpec& spec,
                                               const LimitContourOptions& options = {});

// Subset expansion of the perturbation: for every nonempty pair of index sets,
// (-1)^{k2} D^{k1 + k2 - 1} / (prod (s + t1 - x_i) prod (t + t2 - y_j)), with the
// power of D expanded binomially so each term is a product of two single
// contour integrals.
double finite_rank_expansion(double t1, double x, double t2, double y, const ScalingSpec& spec,
                             const LimitContourOptions& options = {});

// e^{y t2 - x t1 + (t1^3 - t2^3)/3}
double limit_gauge_factor(double t1, double x, double t2, double y);

// ---------------------------------------------------------------------------
// Finite-p kernel

enum class ContourStrategy { Circles, Wedge };

// Closed wedge geometry: z-wedge opening right at +-pi/3 closed by an arc about
// z_center; w-wedge opening left at +-2pi/3 closed by an arc about w_center.
struct WedgeGeometry {
  double z_vertex = 0.0;
  double w_vertex = 0.0;
  double z_ray = 0.6;
  double w_ray = 0.5;
  double z_center = 1.0;
  double w_center = 0.0;
};

struct FiniteContourOptions {
  ContourStrategy strategy = ContourStrategy::Circles;
  int circle_nodes = 256;
  int ray_panels = 24;
  int arc_panels = 16;
  int nodes_per_panel = 16;
  double ray_grading = 1.12;
  std::optional<WedgeGeometry> wedge;  // required by Wedge unless built by the edge-scaled entry points
  int psi_nodes = 256;
};

inline FiniteContourOptions wedge_options() {
  FiniteContourOptions o;
  o.strategy = ContourStrategy::Wedge;
  return o;
}

struct FiniteContours {
  specfun::QuadratureRule z;
  specfun::QuadratureRule w;
};

// Disjoint circles: z around the pi cluster, w around the -pihat cluster,
// separated by a third of the gap min pi - max(-pihat). ContourInfeasible if
// that gap is not positive.
FiniteContours auto_circles(const ModelParams& params, int nodes);
FiniteContours wedge_contours(const WedgeGeometry& geometry, const FiniteContourOptions& options);
// Standard geometry for the edge-scaled model: vertices z0 + (m +- h)/(alpha p^{1/3})
// with m, h from limit_vertices, arcs about 1 and 0.
WedgeGeometry edge_wedges(const ScalingSpec& spec, int p, const LimitContourOptions& limit = {});

// Every pi_i winds once around z and never around w, every -pihat_j the
// reverse, and neither contour has nodes inside the other. ContourInfeasible
// otherwise.
void validate_contours(const ModelParams& params, const FiniteContours& contours);

// 1_{r<s} 1_{u<v} (1/2 pi i) oint e^{w (v - u)} prod_{k=r+1}^{s} 1/(w + pihat_k) dw.
// Levels are 1-based.
double psi_rs(const ModelParams& params, int r, double u, int s, double v, int nodes = 256);
// Natural log of psi_rs plus `log_offset`, or -inf when it vanishes.
// Sign is returned separately; the closed form is used when all pihat in (r, s] agree.
struct LogValue {
  double log_abs = -std::numeric_limits<double>::infinity();
  double sign = 0.0;
};
LogValue log_psi_rs(const ModelParams& params, int r, double u, int s, double v, int nodes = 256);

double finite_kernel(const ModelParams& params, int r, double u, int s, double v,
                     const FiniteContourOptions& options = {});

struct KernelSlice {
  Eigen::MatrixXd value;
  Eigen::MatrixXd imag;  // discarded imaginary parts
  double max_imag_residue = 0.0;
  double gauge_exponent_span = 0.0;  // max |exponent| folded into the integrand, 0 if none
  std::string contour;
};

// Core evaluator on a block at fixed levels. Positions are raw (unscaled);
// row_log_offset / col_log_offset are added to the z side and subtracted on the
// w side in log space before any exponentiation; `scale` multiplies the result.
KernelSlice finite_kernel_slice(const ModelParams& params, int r, const std::vector<double>& us, int s,
                                const std::vector<double>& vs, const FiniteContours& contours,
                                const std::vector<double>& row_log_offset, const std::vector<double>& col_log_offset,
                                double scale, int psi_nodes = 256);

// alpha p^{1/3} e^{Delta} K(r, p u; s, p v), Delta = p z0 (u - v) - (r - s) ln z0
// folded into every node of the integration.
double scaled_finite_kernel(const ScalingSpec& spec, int p, double time1, double pos1, double time2, double pos2,
                            const FiniteContourOptions& options = wedge_options());
KernelSlice scaled_finite_kernel_block(const ScalingSpec& spec, int p, double time1, const std::vector<double>& pos1,
                                       double time2, const std::vector<double>& pos2,
                                       const FiniteContourOptions& options = wedge_options());

// Throws ImaginaryResidue if max |Im| > 1e-8 (1 + max |Re|).
KernelSlice to_real_slice(const Eigen::MatrixXcd& values, std::string contour);

// ---------------------------------------------------------------------------
// Evaluators consumed by the Fredholm module.

class KernelFunction {
 public:
  virtual ~KernelFunction() = default;
  // Entry (a, b) is K(time_i, xs[a]; time_j, ys[b]).
  virtual Eigen::MatrixXd block(double time_i, const std::vector<double>& xs, double time_j,
                                const std::vector<double>& ys) const = 0;
  virtual std::string name() const = 0;
};

class ZeroKernel final : public KernelFunction {
 public:
  Eigen::MatrixXd block(double, const std::vector<double>& xs, double, const std::vector<double>& ys) const override {
    return Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(xs.size()), static_cast<Eigen::Index>(ys.size()));
  }
  std::string name() const override { return "zero"; }
};

class AiryKernel final : public KernelFunction {
 public:
  explicit AiryKernel(std::optional<ScalingSpec> spec = std::nullopt, LimitContourOptions options = {})
      : spec_(std::move(spec)), options_(options) {}
  Eigen::MatrixXd block(double time_i, const std::vector<double>& xs, double time_j,
                        const std::vector<double>& ys) const override;
  std::string name() const override;

 private:
  std::optional<ScalingSpec> spec_;
  LimitContourOptions options_;
};

// Times are levels (rounded to the nearest integer), positions raw.
class FiniteKernel final : public KernelFunction {
 public:
  FiniteKernel(ModelParams params, FiniteContourOptions options = {});
  Eigen::MatrixXd block(double time_i, const std::vector<double>& xs, double time_j,
                        const std::vector<double>& ys) const override;
  std::string name() const override { return "finite"; }

 private:
  ModelParams params_;
  FiniteContourOptions options_;
  FiniteContours contours_;
};

// Edge-scaled finite kernel in limit coordinates (time, position).
class ScaledFiniteKernel final : public KernelFunction {
 public:
  ScaledFiniteKernel(ScalingSpec spec, int p, FiniteContourOptions options = wedge_options());
  Eigen::MatrixXd block(double time_i, const std::vector<double>& xs, double time_j,
                        const std::vector<double>& ys) const override;
  std::string name() const override { return "scaled-finite p=" + std::to_string(p_); }

 private:
  ScalingSpec spec_;
  int p_;
  FiniteContourOptions options_;
};

}  // namespace edgelab::kernels
