#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "edgelab/error.hpp"
#include "edgelab/kernels.hpp"

namespace edgelab::kernels {

namespace {

using Eigen::Index;

const cdouble kTwoPiI = cdouble(0.0, 2.0 * std::numbers::pi);
constexpr double kLogGuard = 600.0;

struct Multiset {
  std::vector<double> value;
  std::vector<double> count;
};

Multiset group(const std::vector<double>& v, std::size_t first, std::size_t last) {
  std::map<double, double> counts;
  for (std::size_t i = first; i < last; ++i) counts[v[i]] += 1.0;
  Multiset m;
  for (const auto& [value, count] : counts) {
    m.value.push_back(value);
    m.count.push_back(count);
  }
  return m;
}

// sum_k count_k log(z + shift * value_k)
cdouble log_sum(const Multiset& m, cdouble z, double shift) {
  cdouble s = 0.0;
  for (std::size_t k = 0; k < m.value.size(); ++k) s += m.count[k] * std::log(z + shift * m.value[k]);
  return s;
}

std::vector<double> graded_edges(double length, int panels, double ratio) {
  std::vector<double> edges(panels + 1, 0.0);
  double total = 0.0, width = 1.0;
  for (int k = 0; k < panels; ++k) {
    total += width;
    edges[k + 1] = total;
    width *= ratio;
  }
  for (double& e : edges) e *= length / total;
  return edges;
}

// Ray from `vertex` along `dir`, nodes ordered outward.
specfun::QuadratureRule ray_rule(cdouble vertex, cdouble dir, double length, const FiniteContourOptions& o) {
  const specfun::RealRule& base = specfun::gauss_legendre_real(o.nodes_per_panel);
  const std::vector<double> edges = graded_edges(length, o.ray_panels, o.ray_grading);
  specfun::QuadratureRule out;
  for (int p = 0; p < o.ray_panels; ++p) {
    const double half = 0.5 * (edges[p + 1] - edges[p]), mid = 0.5 * (edges[p + 1] + edges[p]);
    for (int k = 0; k < o.nodes_per_panel; ++k) {
      out.nodes.push_back(vertex + (mid + half * base.nodes[k]) * dir);
      out.weights.push_back(half * base.weights[k] * dir);
    }
  }
  return out;
}

specfun::QuadratureRule arc_rule(double center, double radius, double from, double to, const FiniteContourOptions& o) {
  const specfun::RealRule rule = specfun::composite_gauss_legendre(o.arc_panels, o.nodes_per_panel, from, to);
  specfun::QuadratureRule out;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const cdouble e = std::polar(1.0, rule.nodes[k]);
    out.nodes.push_back(center + radius * e);
    out.weights.push_back(cdouble(0.0, 1.0) * radius * e * rule.weights[k]);
  }
  return out;
}

double winding_number(const specfun::QuadratureRule& c, cdouble a) {
  double total = 0.0;
  const std::size_t n = c.size();
  for (std::size_t k = 0; k < n; ++k) total += std::arg((c.nodes[(k + 1) % n] - a) / (c.nodes[k] - a));
  return total / (2.0 * std::numbers::pi);
}

void check_levels(const ModelParams& params, int r, int s) {
  const int p = static_cast<int>(params.size());
  if (r < 1 || r > p || s < 1 || s > p)
    throw Error(ErrorKind::LevelOutOfRange, "levels must lie in [1, " + std::to_string(p) + "]");
}

FiniteContours contours_for(const ModelParams& params, const FiniteContourOptions& options);

}  // namespace

FiniteContours auto_circles(const ModelParams& params, int nodes) {
  const auto [pmin, pmax] = std::minmax_element(params.pi.begin(), params.pi.end());
  std::vector<double> neg(params.pihat.size());
  std::transform(params.pihat.begin(), params.pihat.end(), neg.begin(), [](double v) { return -v; });
  const auto [qmin, qmax] = std::minmax_element(neg.begin(), neg.end());
  const double gap = *pmin - *qmax;
  if (!(gap > 0.0)) throw Error(ErrorKind::ContourInfeasible, "pi and -pihat clusters cannot be split by circles");
  FiniteContours c;
  c.z = specfun::circle_contour(0.5 * (*pmin + *pmax), 0.5 * (*pmax - *pmin) + gap / 3.0, nodes);
  c.w = specfun::circle_contour(0.5 * (*qmin + *qmax), 0.5 * (*qmax - *qmin) + gap / 3.0, nodes);
  return c;
}

FiniteContours wedge_contours(const WedgeGeometry& g, const FiniteContourOptions& options) {
  if (!(g.z_ray > 0.0 && g.w_ray > 0.0)) throw Error(ErrorKind::BadGeometry, "wedge rays must have positive length");
  if (!(g.w_vertex < g.z_vertex)) throw Error(ErrorKind::ContourInfeasible, "w vertex must lie left of the z vertex");
  FiniteContours c;
  {
    const cdouble up = std::polar(1.0, std::numbers::pi / 3.0);
    const cdouble end = g.z_vertex + g.z_ray * up;
    const double radius = std::abs(end - g.z_center);
    const double theta = std::arg(end - g.z_center);
    specfun::QuadratureRule lower = ray_rule(g.z_vertex, std::conj(up), g.z_ray, options);
    specfun::QuadratureRule upper = ray_rule(g.z_vertex, up, g.z_ray, options).reversed();
    c.z = specfun::concatenate({lower, arc_rule(g.z_center, radius, -theta, theta, options), upper});
  }
  {
    const cdouble up = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
    const cdouble end = g.w_vertex + g.w_ray * up;
    const double radius = std::abs(end - g.w_center);
    const double theta = std::arg(end - g.w_center);
    specfun::QuadratureRule upper = ray_rule(g.w_vertex, up, g.w_ray, options);
    specfun::QuadratureRule lower = ray_rule(g.w_vertex, std::conj(up), g.w_ray, options).reversed();
    c.w = specfun::concatenate(
        {upper, arc_rule(g.w_center, radius, theta, 2.0 * std::numbers::pi - theta, options), lower});
  }
  std::ostringstream zd, wd;
  zd << "z wedge vertex=" << g.z_vertex << " ray=" << g.z_ray << " arc about " << g.z_center;
  wd << "w wedge vertex=" << g.w_vertex << " ray=" << g.w_ray << " arc about " << g.w_center;
  c.z.description = zd.str();
  c.w.description = wd.str();
  return c;
}

WedgeGeometry edge_wedges(const ScalingSpec& spec, int p, const LimitContourOptions& limit) {
  const LimitVertices v = limit_vertices(spec.x(), spec.y(), limit);
  const double scale = spec.alpha() * std::cbrt(static_cast<double>(p));
  WedgeGeometry g;
  g.z_vertex = spec.z0() + v.gamma / scale;
  g.w_vertex = spec.z0() + v.Gamma / scale;
  return g;
}

void validate_contours(const ModelParams& params, const FiniteContours& c) {
  auto expect = [](const specfun::QuadratureRule& rule, double point, int want, const char* what) {
    const double wind = winding_number(rule, point);
    if (std::abs(wind - want) > 0.5) {
      std::ostringstream msg;
      msg << what << " " << point << " has winding " << std::lround(wind) << ", expected " << want;
      throw Error(ErrorKind::ContourInfeasible, msg.str());
    }
  };
  const Multiset pis = group(params.pi, 0, params.pi.size());
  const Multiset hats = group(params.pihat, 0, params.pihat.size());
  for (double v : pis.value) {
    expect(c.z, v, 1, "z contour: pi");
    expect(c.w, v, 0, "w contour: pi");
  }
  for (double v : hats.value) {
    expect(c.w, -v, 1, "w contour: -pihat");
    expect(c.z, -v, 0, "z contour: -pihat");
  }
  for (const cdouble& node : c.w.nodes)
    if (std::abs(winding_number(c.z, node)) > 0.5)
      throw Error(ErrorKind::ContourInfeasible, "w contour enters the z contour");
  for (const cdouble& node : c.z.nodes)
    if (std::abs(winding_number(c.w, node)) > 0.5)
      throw Error(ErrorKind::ContourInfeasible, "z contour enters the w contour");
}

LogValue log_psi_rs(const ModelParams& params, int r, double u, int s, double v, int nodes) {
  check_levels(params, r, s);
  LogValue out;
  if (r >= s || !(u < v)) return out;
  const double gap = v - u;
  const int n = s - r;
  const Multiset poles = group(params.pihat, static_cast<std::size_t>(r), static_cast<std::size_t>(s));
  if (poles.value.size() == 1) {
    const double a = poles.value[0];
    out.log_abs = -a * gap + (n - 1) * std::log(gap) - std::lgamma(static_cast<double>(n));
    out.sign = 1.0;
    return out;
  }
  const double lo = -poles.value.back(), hi = -poles.value.front();
  const double center = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  const double radius = std::max(2.0 * half, half + n / gap);
  const specfun::QuadratureRule circle = specfun::circle_contour(center, radius, std::max(nodes, 8));
  std::vector<cdouble> logs(circle.size());
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < circle.size(); ++k) {
    const cdouble w = circle.nodes[k];
    logs[k] = w * gap - log_sum(poles, w, 1.0) + std::log(circle.weights[k]);
    top = std::max(top, logs[k].real());
  }
  cdouble sum = 0.0;
  for (const cdouble& l : logs) sum += std::exp(l - top);
  const double value = (sum / kTwoPiI).real();
  if (value == 0.0) return out;
  out.log_abs = std::log(std::abs(value)) + top;
  out.sign = value > 0.0 ? 1.0 : -1.0;
  return out;
}

double psi_rs(const ModelParams& params, int r, double u, int s, double v, int nodes) {
  const LogValue l = log_psi_rs(params, r, u, s, v, nodes);
  return l.sign == 0.0 ? 0.0 : l.sign * std::exp(l.log_abs);
}

KernelSlice to_real_slice(const Eigen::MatrixXcd& values, std::string contour) {
  KernelSlice out;
  out.value = values.real();
  out.imag = values.imag();
  out.max_imag_residue = values.size() ? values.imag().cwiseAbs().maxCoeff() : 0.0;
  out.contour = std::move(contour);
  const double scale = values.size() ? out.value.cwiseAbs().maxCoeff() : 0.0;
  if (out.max_imag_residue > 1e-8 * (1.0 + scale)) {
    std::ostringstream msg;
    msg << "imaginary residue " << out.max_imag_residue << " against magnitude " << scale;
    throw Error(ErrorKind::ImaginaryResidue, msg.str());
  }
  return out;
}

KernelSlice finite_kernel_slice(const ModelParams& params, int r, const std::vector<double>& us, int s,
                                const std::vector<double>& vs, const FiniteContours& contours,
                                const std::vector<double>& row_log_offset, const std::vector<double>& col_log_offset,
                                double scale, int psi_nodes) {
  check_levels(params, r, s);
  if (row_log_offset.size() != us.size() || col_log_offset.size() != vs.size())
    throw Error(ErrorKind::LengthMismatch, "log offsets must match the position grids");
  for (double u : us)
    if (!(u >= 0.0)) throw Error(ErrorKind::InvalidArgument, "finite kernel positions must be nonnegative");
  for (double v : vs)
    if (!(v >= 0.0)) throw Error(ErrorKind::InvalidArgument, "finite kernel positions must be nonnegative");

  const Multiset pis = group(params.pi, 0, params.pi.size());
  const Multiset hat_r = group(params.pihat, 0, static_cast<std::size_t>(r));
  const Multiset hat_s = group(params.pihat, 0, static_cast<std::size_t>(s));

  // Reference magnitude of prod (z - pi_i) near the gap, cancelled between sides.
  const double gap_mid = 0.5 * (*std::min_element(params.pi.begin(), params.pi.end()) -
                                *std::min_element(params.pihat.begin(), params.pihat.end()));
  double c_pi = 0.0;
  for (std::size_t k = 0; k < pis.value.size(); ++k)
    c_pi += pis.count[k] * std::log(std::max(std::abs(gap_mid - pis.value[k]), 1e-3));

  const std::size_t nz = contours.z.size(), nw = contours.w.size();
  std::vector<cdouble> base_z(nz), base_w(nw);
  for (std::size_t k = 0; k < nz; ++k) {
    const cdouble z = contours.z.nodes[k];
    base_z[k] = log_sum(hat_r, z, 1.0) - log_sum(pis, z, -1.0) + c_pi + std::log(contours.z.weights[k]);
  }
  for (std::size_t l = 0; l < nw; ++l) {
    const cdouble w = contours.w.nodes[l];
    base_w[l] = -log_sum(hat_s, w, 1.0) + log_sum(pis, w, -1.0) - c_pi + std::log(contours.w.weights[l]);
  }

  const Index na = static_cast<Index>(us.size()), nb = static_cast<Index>(vs.size());
  Eigen::MatrixXcd gz(na, static_cast<Index>(nz)), gw(nb, static_cast<Index>(nw));
  std::vector<double> top_z(na), top_w(nb);
  std::vector<cdouble> row(std::max(nz, nw));
  for (Index a = 0; a < na; ++a) {
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < nz; ++k) {
      row[k] = -contours.z.nodes[k] * us[a] + base_z[k] + row_log_offset[a];
      top = std::max(top, row[k].real());
    }
    for (std::size_t k = 0; k < nz; ++k) gz(a, static_cast<Index>(k)) = std::exp(row[k] - top);
    top_z[a] = top;
  }
  for (Index b = 0; b < nb; ++b) {
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < nw; ++l) {
      row[l] = contours.w.nodes[l] * vs[b] + base_w[l] - col_log_offset[b];
      top = std::max(top, row[l].real());
    }
    for (std::size_t l = 0; l < nw; ++l) gw(b, static_cast<Index>(l)) = std::exp(row[l] - top);
    top_w[b] = top;
  }

  Eigen::MatrixXcd cauchy(static_cast<Index>(nz), static_cast<Index>(nw));
  for (std::size_t k = 0; k < nz; ++k)
    for (std::size_t l = 0; l < nw; ++l)
      cauchy(static_cast<Index>(k), static_cast<Index>(l)) = 1.0 / (contours.w.nodes[l] - contours.z.nodes[k]);

  Eigen::MatrixXcd values = gz * cauchy * gw.transpose();
  const cdouble norm = scale / (kTwoPiI * kTwoPiI);
  for (Index a = 0; a < na; ++a) {
    for (Index b = 0; b < nb; ++b) {
      const double lg = top_z[a] + top_w[b];
      if (lg > kLogGuard) {
        std::ostringstream msg;
        msg << "integrand log-magnitude " << lg << " at (r=" << r << ", u=" << us[a] << "; s=" << s << ", v=" << vs[b]
            << ")";
        throw Error(ErrorKind::OverflowGuard, msg.str());
      }
      values(a, b) *= norm * std::exp(lg);
      if (r < s && us[a] < vs[b]) {
        const LogValue psi = log_psi_rs(params, r, us[a], s, vs[b], psi_nodes);
        if (psi.sign != 0.0) {
          const double lp = psi.log_abs + row_log_offset[a] - col_log_offset[b];
          if (lp > kLogGuard) throw Error(ErrorKind::OverflowGuard, "psi term log-magnitude exceeds the guard");
          values(a, b) -= scale * psi.sign * std::exp(lp);
        }
      }
    }
  }
  KernelSlice out = to_real_slice(values, contours.z.description + " | " + contours.w.description);
  double span = 0.0;
  for (double v : row_log_offset) span = std::max(span, std::abs(v));
  for (double v : col_log_offset) span = std::max(span, std::abs(v));
  out.gauge_exponent_span = span;
  return out;
}

namespace {

WedgeGeometry auto_wedges(const ModelParams& params) {
  const auto [pmin, pmax] = std::minmax_element(params.pi.begin(), params.pi.end());
  const auto [hmin, hmax] = std::minmax_element(params.pihat.begin(), params.pihat.end());
  const double b = *pmin, a = -*hmin, gap = b - a;
  if (!(gap > 0.0)) throw Error(ErrorKind::ContourInfeasible, "no gap between the pi and -pihat clusters");
  WedgeGeometry g;
  g.z_vertex = b - gap / 3.0;
  g.w_vertex = a + gap / 3.0;
  g.z_ray = 0.5 * (gap + (*pmax - *pmin));
  g.w_ray = 0.5 * (gap + (*hmax - *hmin));
  g.z_center = *pmax;
  g.w_center = -*hmax;
  return g;
}

FiniteContours contours_for(const ModelParams& params, const FiniteContourOptions& options) {
  FiniteContours c = options.strategy == ContourStrategy::Circles
                         ? auto_circles(params, options.circle_nodes)
                         : wedge_contours(options.wedge ? *options.wedge : auto_wedges(params), options);
  validate_contours(params, c);
  return c;
}

}  // namespace

double finite_kernel(const ModelParams& params, int r, double u, int s, double v, const FiniteContourOptions& options) {
  const FiniteContours c = contours_for(params, options);
  return finite_kernel_slice(params, r, {u}, s, {v}, c, {0.0}, {0.0}, 1.0, options.psi_nodes).value(0, 0);
}

KernelSlice scaled_finite_kernel_block(const ScalingSpec& spec, int p, double time1, const std::vector<double>& pos1,
                                       double time2, const std::vector<double>& pos2,
                                       const FiniteContourOptions& options) {
  const ModelParams params = build_perturbed_params(spec, p);
  const double pd = static_cast<double>(p);
  std::vector<double> us, vs, row_off, col_off;
  int r = 1, s = 1;
  for (double x : pos1) {
    const EdgeCoordinates c = edge_coordinates(spec, p, time1, x);
    r = c.r;
    us.push_back(pd * c.u);
    row_off.push_back(c.conjugation_exponent);
  }
  for (double y : pos2) {
    const EdgeCoordinates c = edge_coordinates(spec, p, time2, y);
    s = c.r;
    vs.push_back(pd * c.u);
    col_off.push_back(c.conjugation_exponent);
  }
  if (pos1.empty()) r = edge_coordinates(spec, p, time1, 0.0).r;
  if (pos2.empty()) s = edge_coordinates(spec, p, time2, 0.0).r;

  FiniteContours c;
  if (options.strategy == ContourStrategy::Circles) {
    c = auto_circles(params, options.circle_nodes);
  } else {
    c = wedge_contours(options.wedge ? *options.wedge : edge_wedges(spec, p), options);
  }
  validate_contours(params, c);
  return finite_kernel_slice(params, r, us, s, vs, c, row_off, col_off, spec.alpha() * std::cbrt(pd),
                             options.psi_nodes);
}

double scaled_finite_kernel(const ScalingSpec& spec, int p, double time1, double pos1, double time2, double pos2,
                            const FiniteContourOptions& options) {
  return scaled_finite_kernel_block(spec, p, time1, {pos1}, time2, {pos2}, options).value(0, 0);
}

FiniteKernel::FiniteKernel(ModelParams params, FiniteContourOptions options)
    : params_(std::move(params)), options_(options), contours_(contours_for(params_, options_)) {}

Eigen::MatrixXd FiniteKernel::block(double time_i, const std::vector<double>& xs, double time_j,
                                    const std::vector<double>& ys) const {
  const int r = static_cast<int>(std::lround(time_i)), s = static_cast<int>(std::lround(time_j));
  return finite_kernel_slice(params_, r, xs, s, ys, contours_, std::vector<double>(xs.size(), 0.0),
                             std::vector<double>(ys.size(), 0.0), 1.0, options_.psi_nodes)
      .value;
}

ScaledFiniteKernel::ScaledFiniteKernel(ScalingSpec spec, int p, FiniteContourOptions options)
    : spec_(std::move(spec)), p_(p), options_(options) {}

Eigen::MatrixXd ScaledFiniteKernel::block(double time_i, const std::vector<double>& xs, double time_j,
                                          const std::vector<double>& ys) const {
  return scaled_finite_kernel_block(spec_, p_, time_i, xs, time_j, ys, options_).value;
}

}  // namespace edgelab::kernels
