#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>

#include "edgelab/error.hpp"
#include "edgelab/kernels.hpp"

namespace edgelab::kernels {

namespace {

using Eigen::Index;

void check_window(double t1, double t2, const std::vector<double>& xs, const std::vector<double>& ys) {
  if (!(std::abs(t1 - t2) <= kMaxTimeGap))
    throw Error(ErrorKind::UnsupportedWindow, "|t1 - t2| exceeds " + std::to_string(kMaxTimeGap));
  auto check = [](double v) {
    if (!(v >= kMinPosition && v <= kMaxPosition))
      throw Error(ErrorKind::UnsupportedWindow, "position " + std::to_string(v) + " outside [-10, 30]");
  };
  for (double v : xs) check(v);
  for (double v : ys) check(v);
}

double ai_clipped(double x) { return x > specfun::kAiryRange ? 0.0 : specfun::airy_ai(x); }

// Beyond this argument both Airy factors are below 1e-20.
constexpr double kAiryNegligible = 16.0;

Eigen::MatrixXd airy_on_grid(const std::vector<double>& xs, const std::vector<double>& lambdas) {
  Eigen::MatrixXd out(static_cast<Index>(xs.size()), static_cast<Index>(lambdas.size()));
  for (std::size_t a = 0; a < xs.size(); ++a)
    for (std::size_t k = 0; k < lambdas.size(); ++k) out(a, k) = ai_clipped(xs[a] + lambdas[k]);
  return out;
}

double heat_term(double s, double x, double y) {
  return std::exp(s * s * s / 12.0 - s * (x + y) / 2.0 - (x - y) * (x - y) / (4.0 * s)) /
         std::sqrt(4.0 * std::numbers::pi * s);
}

struct LimitRules {
  specfun::QuadratureRule gamma;  // sigma nodes (unshifted)
  specfun::QuadratureRule Gamma;  // tau nodes (unshifted)
};

LimitRules limit_rules(double t1, double t2, const LimitVertices& v, const LimitContourOptions& options) {
  specfun::ContourSpec g = specfun::right_wedge_spec(v.gamma - t1);
  specfun::ContourSpec G = specfun::left_wedge_spec(v.Gamma - t2);
  for (specfun::ContourSpec* c : {&g, &G}) {
    c->truncation_radius = options.truncation_radius;
    c->panels = options.panels;
    c->nodes_per_panel = options.nodes_per_panel;
  }
  return {specfun::wedge_contour(g), specfun::wedge_contour(G)};
}

// Rows: e^{sigma^3/3 - x sigma} w_sigma for each x.
Eigen::MatrixXcd sigma_factors(const specfun::QuadratureRule& rule, const std::vector<double>& xs) {
  Eigen::MatrixXcd out(static_cast<Index>(xs.size()), static_cast<Index>(rule.size()));
  for (std::size_t k = 0; k < rule.size(); ++k) {
    const cdouble s = rule.nodes[k];
    const cdouble cubic = s * s * s / 3.0;
    for (std::size_t a = 0; a < xs.size(); ++a) out(a, k) = std::exp(cubic - xs[a] * s) * rule.weights[k];
  }
  return out;
}

// Rows: e^{y tau - tau^3/3} w_tau for each y.
Eigen::MatrixXcd tau_factors(const specfun::QuadratureRule& rule, const std::vector<double>& ys) {
  Eigen::MatrixXcd out(static_cast<Index>(ys.size()), static_cast<Index>(rule.size()));
  for (std::size_t k = 0; k < rule.size(); ++k) {
    const cdouble t = rule.nodes[k];
    const cdouble cubic = t * t * t / 3.0;
    for (std::size_t b = 0; b < ys.size(); ++b) out(b, k) = std::exp(ys[b] * t - cubic) * rule.weights[k];
  }
  return out;
}

const cdouble kTwoPiI2 = std::pow(cdouble(0.0, 2.0 * std::numbers::pi), 2);

void check_pole_sides(const ScalingSpec& spec, const LimitVertices& v) {
  for (double xi : spec.x())
    if (!(v.gamma < xi)) {
      std::ostringstream msg;
      msg << "gamma vertex " << v.gamma << " must lie left of x = " << xi;
      throw Error(ErrorKind::ContourInfeasible, msg.str());
    }
  for (double yj : spec.y())
    if (!(v.Gamma > yj)) {
      std::ostringstream msg;
      msg << "Gamma vertex " << v.Gamma << " must lie right of y = " << yj;
      throw Error(ErrorKind::ContourInfeasible, msg.str());
    }
}

// In shifted variables a = sigma + t1, b = tau + t2.
cdouble bracket_product(const ScalingSpec& spec, cdouble a, cdouble b) {
  cdouble prod = 1.0;
  for (double xi : spec.x()) prod *= (b - xi) / (a - xi);
  for (double yj : spec.y()) prod *= (a - yj) / (b - yj);
  return prod;
}

cdouble bracket(const ScalingSpec& spec, cdouble a, cdouble b) {
  const cdouble d = b - a;
  if (std::abs(d) >= 1e-6) return (bracket_product(spec, a, b) - 1.0) / d;
  constexpr double h = 1e-4;
  return (bracket_product(spec, a, b + h) - bracket_product(spec, a, b - h)) / (2.0 * h);
}

}  // namespace

Eigen::MatrixXd extended_airy_block(double t1, const std::vector<double>& xs, double t2,
                                    const std::vector<double>& ys) {
  check_window(t1, t2, xs, ys);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Index>(xs.size()), static_cast<Index>(ys.size()));
  if (xs.empty() || ys.empty()) return out;
  const double lowest = std::min(*std::min_element(xs.begin(), xs.end()), *std::min_element(ys.begin(), ys.end()));
  const double span = kAiryNegligible - lowest;
  const double dt = t1 - t2;
  if (span > 0.0) {
    const int panels = std::max(2, static_cast<int>(std::ceil(span)));
    const specfun::RealRule rule = specfun::composite_gauss_legendre(panels, 16, 0.0, span);
    const Eigen::MatrixXd ax = airy_on_grid(xs, rule.nodes);
    const Eigen::MatrixXd ay = airy_on_grid(ys, rule.nodes);
    Eigen::VectorXd w(static_cast<Index>(rule.nodes.size()));
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) w(k) = rule.weights[k] * std::exp(-rule.nodes[k] * dt);
    out = ax * w.asDiagonal() * ay.transpose();
  }
  if (dt < 0.0) {
    for (std::size_t a = 0; a < xs.size(); ++a)
      for (std::size_t b = 0; b < ys.size(); ++b) out(a, b) -= heat_term(-dt, xs[a], ys[b]);
  }
  return out;
}

double extended_airy(double t1, double x, double t2, double y) {
  return extended_airy_block(t1, {x}, t2, {y})(0, 0);
}

LimitVertices limit_vertices(const std::vector<double>& x, const std::vector<double>& y,
                             const LimitContourOptions& options) {
  const double inf = std::numeric_limits<double>::infinity();
  const double lo = y.empty() ? -inf : *std::max_element(y.begin(), y.end());
  const double hi = x.empty() ? inf : *std::min_element(x.begin(), x.end());
  double h = options.vertex_offset;
  if (std::isfinite(lo) && std::isfinite(hi)) h = std::min(h, (hi - lo) / 4.0);
  const double m = std::clamp(0.0, lo + 2.0 * h, hi - 2.0 * h);
  LimitVertices v{m + h, m - h};
  if (options.gamma_vertex) v.gamma = *options.gamma_vertex;
  if (options.Gamma_vertex) v.Gamma = *options.Gamma_vertex;
  return v;
}

ContourValue extended_airy_contour_full(double t1, double x, double t2, double y, const LimitContourOptions& options) {
  check_window(t1, t2, {x}, {y});
  if (t1 < t2) throw Error(ErrorKind::UnsupportedWindow, "the double-contour form needs t1 >= t2");
  const LimitVertices v = limit_vertices({}, {}, options);
  if (!(v.Gamma < v.gamma)) throw Error(ErrorKind::BadContours, "Gamma vertex must lie left of the gamma vertex");
  const LimitRules rules = limit_rules(t1, t2, v, options);
  const Eigen::MatrixXcd es = sigma_factors(rules.gamma, {x});
  const Eigen::MatrixXcd et = tau_factors(rules.Gamma, {y});
  cdouble sum = 0.0;
  for (std::size_t k = 0; k < rules.gamma.size(); ++k) {
    const cdouble s = rules.gamma.nodes[k];
    cdouble inner = 0.0;
    for (std::size_t l = 0; l < rules.Gamma.size(); ++l)
      inner += et(0, l) / (rules.Gamma.nodes[l] - s + t2 - t1);
    sum += es(0, k) * inner;
  }
  sum /= kTwoPiI2;
  return {sum.real(), std::abs(sum.imag())};
}

double extended_airy_contour(double t1, double x, double t2, double y, const LimitContourOptions& options) {
  return extended_airy_contour_full(t1, x, t2, y, options).value;
}

Eigen::MatrixXd perturbation_block(double t1, const std::vector<double>& xs, double t2, const std::vector<double>& ys,
                                   const ScalingSpec& spec, const LimitContourOptions& options,
                                   Eigen::MatrixXd* imag_part) {
  check_window(t1, t2, xs, ys);
  const Index na = static_cast<Index>(xs.size()), nb = static_cast<Index>(ys.size());
  if (imag_part) *imag_part = Eigen::MatrixXd::Zero(na, nb);
  if (spec.empty()) return Eigen::MatrixXd::Zero(na, nb);
  const LimitVertices v = limit_vertices(spec.x(), spec.y(), options);
  check_pole_sides(spec, v);
  const LimitRules rules = limit_rules(t1, t2, v, options);
  const Index ns = static_cast<Index>(rules.gamma.size()), nt = static_cast<Index>(rules.Gamma.size());
  Eigen::MatrixXcd b(ns, nt);
  for (Index k = 0; k < ns; ++k)
    for (Index l = 0; l < nt; ++l) b(k, l) = bracket(spec, rules.gamma.nodes[k] + t1, rules.Gamma.nodes[l] + t2);
  const Eigen::MatrixXcd es = sigma_factors(rules.gamma, xs);
  const Eigen::MatrixXcd et = tau_factors(rules.Gamma, ys);
  const Eigen::MatrixXcd full = (es * b * et.transpose()) / kTwoPiI2;
  if (imag_part) *imag_part = full.imag();
  return full.real();
}

ContourValue perturbation_term_full(double t1, double x, double t2, double y, const ScalingSpec& spec,
                                    const LimitContourOptions& options) {
  Eigen::MatrixXd imag;
  const double value = perturbation_block(t1, {x}, t2, {y}, spec, options, &imag)(0, 0);
  return {value, std::abs(imag(0, 0))};
}

double perturbation_term(double t1, double x, double t2, double y, const ScalingSpec& spec,
                         const LimitContourOptions& options) {
  return perturbation_term_full(t1, x, t2, y, spec, options).value;
}

Eigen::MatrixXd extended_airy_two_params_block(double t1, const std::vector<double>& xs, double t2,
                                               const std::vector<double>& ys, const ScalingSpec& spec,
                                               const LimitContourOptions& options) {
  Eigen::MatrixXd out = extended_airy_block(t1, xs, t2, ys);
  if (!spec.empty()) out += perturbation_block(t1, xs, t2, ys, spec, options);
  return out;
}

double extended_airy_two_params(double t1, double x, double t2, double y, const ScalingSpec& spec,
                                const LimitContourOptions& options) {
  return extended_airy_two_params_block(t1, {x}, t2, {y}, spec, options)(0, 0);
}

double finite_rank_expansion(double t1, double x, double t2, double y, const ScalingSpec& spec,
                             const LimitContourOptions& options) {
  check_window(t1, t2, {x}, {y});
  const std::size_t j1 = spec.x().size(), j2 = spec.y().size();
  if (j1 + j2 == 0) return 0.0;
  if (j1 + j2 > 20) throw Error(ErrorKind::InvalidArgument, "too many parameters for the subset expansion");
  const LimitVertices v = limit_vertices(spec.x(), spec.y(), options);
  check_pole_sides(spec, v);
  const LimitRules rules = limit_rules(t1, t2, v, options);
  const Eigen::MatrixXcd es = sigma_factors(rules.gamma, {x});
  const Eigen::MatrixXcd et = tau_factors(rules.Gamma, {y});

  // sigma side: int e^{..} (-a)^q / prod_{i in I} (a - x_i), a = sigma + t1
  auto sigma_integral = [&](unsigned mask, int q) {
    cdouble sum = 0.0;
    for (std::size_t k = 0; k < rules.gamma.size(); ++k) {
      const cdouble a = rules.gamma.nodes[k] + t1;
      cdouble f = std::pow(-a, q);
      for (std::size_t i = 0; i < j1; ++i)
        if (mask >> i & 1u) f /= a - spec.x()[i];
      sum += es(0, k) * f;
    }
    return sum;
  };
  // tau side: int e^{..} b^q / prod_{j in J} (b - y_j), b = tau + t2
  auto tau_integral = [&](unsigned mask, int q) {
    cdouble sum = 0.0;
    for (std::size_t l = 0; l < rules.Gamma.size(); ++l) {
      const cdouble b = rules.Gamma.nodes[l] + t2;
      cdouble f = std::pow(b, q);
      for (std::size_t j = 0; j < j2; ++j)
        if (mask >> j & 1u) f /= b - spec.y()[j];
      sum += et(0, l) * f;
    }
    return sum;
  };

  cdouble total = 0.0;
  for (unsigned mi = 0; mi < (1u << j1); ++mi) {
    const int k1 = std::popcount(mi);
    for (unsigned mj = 0; mj < (1u << j2); ++mj) {
      const int k2 = std::popcount(mj);
      if (k1 + k2 == 0) continue;
      const int n = k1 + k2 - 1;
      cdouble term = 0.0;
      double binom = 1.0;
      for (int q = 0; q <= n; ++q) {
        // D^n = sum_q C(n, q) b^q (-a)^{n - q}
        term += binom * sigma_integral(mi, n - q) * tau_integral(mj, q);
        binom = binom * (n - q) / (q + 1);
      }
      total += (k2 % 2 == 0 ? 1.0 : -1.0) * term;
    }
  }
  return (total / kTwoPiI2).real();
}

double limit_gauge_factor(double t1, double x, double t2, double y) {
  return std::exp(y * t2 - x * t1 + (t1 * t1 * t1 - t2 * t2 * t2) / 3.0);
}

Eigen::MatrixXd AiryKernel::block(double time_i, const std::vector<double>& xs, double time_j,
                                  const std::vector<double>& ys) const {
  if (spec_) return extended_airy_two_params_block(time_i, xs, time_j, ys, *spec_, options_);
  return extended_airy_block(time_i, xs, time_j, ys);
}

std::string AiryKernel::name() const {
  if (!spec_ || spec_->empty()) return "extended-airy";
  return "extended-airy J1=" + std::to_string(spec_->x().size()) + " J2=" + std::to_string(spec_->y().size());
}

}  // namespace edgelab::kernels
