#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include "edgelab/error.hpp"
#include "edgelab/specfun.hpp"

namespace edgelab::specfun {

namespace {

RealRule compute_gauss_legendre(int n) {
  RealRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace

const RealRule& gauss_legendre_real(int n) {
  if (n < 1 || n > 512) throw Error(ErrorKind::InvalidArgument, "Gauss-Legendre order must be in [1, 512]");
  static std::mutex mutex;
  static std::map<int, RealRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
  return it->second;
}

RealRule gauss_legendre_interval(int n, double a, double b) {
  RealRule rule = gauss_legendre_real(n);
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  for (int k = 0; k < n; ++k) {
    rule.nodes[k] = mid + half * rule.nodes[k];
    rule.weights[k] *= half;
  }
  return rule;
}

RealRule composite_gauss_legendre(int panels, int n, double a, double b) {
  if (panels < 1) throw Error(ErrorKind::InvalidArgument, "panel count must be positive");
  const RealRule& base = gauss_legendre_real(n);
  RealRule out;
  out.nodes.reserve(static_cast<std::size_t>(panels) * n);
  out.weights.reserve(static_cast<std::size_t>(panels) * n);
  const double width = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width;
    for (int k = 0; k < n; ++k) {
      out.nodes.push_back(lo + 0.5 * width * (base.nodes[k] + 1.0));
      out.weights.push_back(0.5 * width * base.weights[k]);
    }
  }
  return out;
}

QuadratureRule QuadratureRule::reversed() const {
  QuadratureRule out;
  out.nodes.assign(nodes.rbegin(), nodes.rend());
  out.weights.reserve(weights.size());
  for (auto it = weights.rbegin(); it != weights.rend(); ++it) out.weights.push_back(-*it);
  out.description = description + " (reversed)";
  return out;
}

QuadratureRule gauss_legendre(int n) {
  const RealRule& r = gauss_legendre_real(n);
  QuadratureRule out;
  out.nodes.assign(r.nodes.begin(), r.nodes.end());
  out.weights.assign(r.weights.begin(), r.weights.end());
  out.description = "gauss-legendre n=" + std::to_string(n);
  return out;
}

ContourSpec right_wedge_spec(double vertex) {
  ContourSpec spec;
  spec.vertex = vertex;
  spec.angle = std::numbers::pi / 3.0;
  spec.orientation = Orientation::Down;
  return spec;
}

ContourSpec left_wedge_spec(double vertex) {
  ContourSpec spec;
  spec.vertex = vertex;
  spec.angle = 2.0 * std::numbers::pi / 3.0;
  spec.orientation = Orientation::Up;
  return spec;
}

QuadratureRule wedge_contour(const ContourSpec& spec) {
  if (!(spec.angle > 0.0 && spec.angle < std::numbers::pi))
    throw Error(ErrorKind::BadGeometry, "wedge angle must lie in (0, pi)");
  if (!(spec.truncation_radius > 0.0) || !std::isfinite(spec.truncation_radius))
    throw Error(ErrorKind::BadGeometry, "wedge truncation radius must be positive");
  if (spec.panels < 1 || spec.nodes_per_panel < 1)
    throw Error(ErrorKind::BadGeometry, "wedge needs at least one panel and node");
  if (spec.orientation == Orientation::CounterClockwise)
    throw Error(ErrorKind::BadGeometry, "wedge orientation must be Up or Down");

  const RealRule& base = gauss_legendre_real(spec.nodes_per_panel);
  // Outgoing ray parametrized by arclength on [0, R] with edges R (k/P)^2.
  std::vector<double> s, ws;
  for (int p = 0; p < spec.panels; ++p) {
    const double lo = spec.truncation_radius * std::pow(static_cast<double>(p) / spec.panels, 2);
    const double hi = spec.truncation_radius * std::pow(static_cast<double>(p + 1) / spec.panels, 2);
    for (int k = 0; k < spec.nodes_per_panel; ++k) {
      s.push_back(lo + 0.5 * (hi - lo) * (base.nodes[k] + 1.0));
      ws.push_back(0.5 * (hi - lo) * base.weights[k]);
    }
  }
  const double in_angle = spec.orientation == Orientation::Down ? spec.angle : -spec.angle;
  const cdouble d_in = std::polar(1.0, in_angle);
  const cdouble d_out = std::conj(d_in);

  QuadratureRule out;
  out.nodes.reserve(2 * s.size());
  out.weights.reserve(2 * s.size());
  for (std::size_t k = s.size(); k-- > 0;) {
    out.nodes.push_back(spec.vertex + s[k] * d_in);
    out.weights.push_back(-ws[k] * d_in);
  }
  for (std::size_t k = 0; k < s.size(); ++k) {
    out.nodes.push_back(spec.vertex + s[k] * d_out);
    out.weights.push_back(ws[k] * d_out);
  }
  std::ostringstream desc;
  desc << "wedge vertex=" << spec.vertex.real() << (spec.vertex.imag() < 0 ? "-" : "+") << std::abs(spec.vertex.imag())
       << "i angle=" << spec.angle << " R=" << spec.truncation_radius << " panels=" << spec.panels << "x"
       << spec.nodes_per_panel << (spec.orientation == Orientation::Up ? " up" : " down");
  out.description = desc.str();
  return out;
}

QuadratureRule circle_contour(cdouble center, double radius, int n) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw Error(ErrorKind::BadGeometry, "circle radius must be positive");
  if (n < 8) throw Error(ErrorKind::BadGeometry, "circle needs at least 8 nodes");
  QuadratureRule out;
  out.nodes.reserve(n);
  out.weights.reserve(n);
  for (int k = 0; k < n; ++k) {
    const cdouble e = std::polar(1.0, 2.0 * std::numbers::pi * k / n);
    out.nodes.push_back(center + radius * e);
    out.weights.push_back(cdouble(0.0, 1.0) * radius * e * (2.0 * std::numbers::pi / n));
  }
  std::ostringstream desc;
  desc << "circle center=" << center.real() << " radius=" << radius << " n=" << n;
  out.description = desc.str();
  return out;
}

QuadratureRule build_contour(const ContourSpec& spec) {
  switch (spec.kind) {
    case ContourKind::RayWedge:
      return wedge_contour(spec);
    case ContourKind::Circle:
      return circle_contour(spec.vertex, spec.radius, spec.panels * spec.nodes_per_panel);
    case ContourKind::Composite:
      break;
  }
  throw Error(ErrorKind::BadGeometry, "composite contours are assembled with concatenate()");
}

QuadratureRule concatenate(const std::vector<QuadratureRule>& parts) {
  QuadratureRule out;
  for (const auto& part : parts) {
    out.nodes.insert(out.nodes.end(), part.nodes.begin(), part.nodes.end());
    out.weights.insert(out.weights.end(), part.weights.begin(), part.weights.end());
    if (!out.description.empty()) out.description += " + ";
    out.description += part.description;
  }
  return out;
}

}  // namespace edgelab::specfun
