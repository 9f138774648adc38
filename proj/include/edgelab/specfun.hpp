#pragma once

#include <complex>
#include <string>
#include <vector>

namespace edgelab::specfun {

using cdouble = std::complex<double>;

// Ai on |x| <= 30. The Maclaurin series (evaluated in long double) is used for
// |x| <= kAirySwitch; beyond it a quadrature along a steepest-descent path of
// the defining contour integral takes over. Both branches are public so they
// can be checked against each other.
inline constexpr double kAiryRange = 30.0;
inline constexpr double kAirySwitch = 6.0;

double airy_ai(double x);
double airy_ai_prime(double x);

double airy_ai_series(double x);
double airy_ai_prime_series(double x);
double airy_ai_contour(double x);
double airy_ai_prime_contour(double x);

struct RealRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Nodes and weights on [-1, 1], 1 <= n <= 512.
const RealRule& gauss_legendre_real(int n);
// n-point rule mapped to [a, b].
RealRule gauss_legendre_interval(int n, double a, double b);
// Composite rule on [a, b]: `panels` equal panels of n nodes each.
RealRule composite_gauss_legendre(int panels, int n, double a, double b);

struct QuadratureRule {
  std::vector<cdouble> nodes;
  std::vector<cdouble> weights;
  std::string description;

  std::size_t size() const noexcept { return nodes.size(); }

  template <typename F>
  cdouble integrate(F&& f) const {
    cdouble sum = 0.0;
    for (std::size_t k = 0; k < nodes.size(); ++k) sum += weights[k] * static_cast<cdouble>(f(nodes[k]));
    return sum;
  }

  // Same path traversed backwards.
  QuadratureRule reversed() const;
};

QuadratureRule gauss_legendre(int n);

enum class ContourKind { RayWedge, Circle, Composite };

// Down: from vertex + e^{+i angle} inf through the vertex to vertex + e^{-i angle} inf.
// Up:   from vertex + e^{-i angle} inf through the vertex to vertex + e^{+i angle} inf.
enum class Orientation { Up, Down, CounterClockwise };

struct ContourSpec {
  ContourKind kind = ContourKind::RayWedge;
  cdouble vertex = 0.0;  // wedge vertex, or circle center
  double angle = 0.0;    // ray half-opening angle in (0, pi)
  double truncation_radius = 12.0;
  double radius = 1.0;  // circles only
  int panels = 24;
  int nodes_per_panel = 16;
  Orientation orientation = Orientation::Down;
};

// Rays at +-pi/3 opening to the right, traversed top to bottom.
ContourSpec right_wedge_spec(double vertex);
// Rays at +-2pi/3 opening to the left, traversed bottom to top.
ContourSpec left_wedge_spec(double vertex);

// Panels are graded quadratically in arclength, so the first panels near the
// vertex are the shortest. Throws BadGeometry.
QuadratureRule wedge_contour(const ContourSpec& spec);

// Counterclockwise trapezoidal rule; radius > 0, n >= 8.
QuadratureRule circle_contour(cdouble center, double radius, int n);

QuadratureRule build_contour(const ContourSpec& spec);

QuadratureRule concatenate(const std::vector<QuadratureRule>& parts);

}  // namespace edgelab::specfun
