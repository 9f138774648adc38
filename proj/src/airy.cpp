#include <cmath>
#include <numbers>

#include "edgelab/error.hpp"
#include "edgelab/specfun.hpp"

namespace edgelab::specfun {

namespace {

// Ai(0) and -Ai'(0)
constexpr long double kAi0 = 0.355028053887817239260063186004183176L;
constexpr long double kAip0 = 0.258819403792806798405183560189203963L;

void check_range(double x) {
  if (!(std::abs(x) <= kAiryRange)) throw Error(ErrorKind::OutOfRange, "Airy argument outside [-30, 30]");
}

struct SeriesPair {
  long double f, g;
};

// f = sum 3^k (1/3)_k x^{3k} / (3k)!,  g = sum 3^k (2/3)_k x^{3k+1} / (3k+1)!
SeriesPair airy_series(long double x) {
  const long double x3 = x * x * x;
  long double tf = 1.0L, tg = x, f = 1.0L, g = x;
  for (int k = 1; k < 400; ++k) {
    tf *= x3 / ((3.0L * k - 1.0L) * (3.0L * k));
    tg *= x3 / ((3.0L * k) * (3.0L * k + 1.0L));
    f += tf;
    g += tg;
    if (std::abs(tf) + std::abs(tg) < 1e-24L * (1.0L + std::abs(f) + std::abs(g))) break;
  }
  return {f, g};
}

// Derivatives f', g' term by term.
SeriesPair airy_series_prime(long double x) {
  const long double x3 = x * x * x;
  long double df = x * x / 2.0L, dg = 1.0L, f = df, g = dg;
  long double tg_next = 1.0L;
  for (int k = 2; k < 400; ++k) {
    df *= x3 / ((3.0L * k - 1.0L) * (3.0L * k - 3.0L));
    f += df;
    if (std::abs(df) < 1e-24L * (1.0L + std::abs(f))) break;
  }
  for (int k = 1; k < 400; ++k) {
    tg_next *= x3 / ((3.0L * k) * (3.0L * k - 2.0L));
    g += tg_next;
    if (std::abs(tg_next) < 1e-24L * (1.0L + std::abs(g))) break;
  }
  return {f, g};
}

struct AiryPair {
  double ai, aip;
};

// x > 0: vertical line through the saddle s = sqrt(x),
//   Ai(x)  = e^{-zeta}/pi int_0^inf e^{-sqrt(x) y^2} cos(y^3/3) dy
//   Ai'(x) = -e^{-zeta}/pi int_0^inf e^{-sqrt(x) y^2} (sqrt(x) cos(y^3/3) + y sin(y^3/3)) dy
AiryPair contour_positive(double x) {
  const double rx = std::sqrt(x);
  const double zeta = 2.0 / 3.0 * x * rx;
  const double upper = std::sqrt(45.0 / rx);
  static const RealRule unit = composite_gauss_legendre(3, 16, 0.0, 1.0);
  double ai = 0.0, aip = 0.0;
  for (std::size_t k = 0; k < unit.nodes.size(); ++k) {
    const double y = upper * unit.nodes[k];
    const double damp = std::exp(-rx * y * y) * upper * unit.weights[k];
    const double ph = y * y * y / 3.0;
    ai += damp * std::cos(ph);
    aip -= damp * (rx * std::cos(ph) + y * std::sin(ph));
  }
  const double scale = std::exp(-zeta) / std::numbers::pi;
  return {ai * scale, aip * scale};
}

// x < 0, a = -x: ray from e^{-i pi/3} inf into -i sqrt(a), the imaginary
// segment up to i sqrt(a), then the ray out to e^{i pi/3} inf. |e^{phase}| <= 1
// on the whole path. Conjugate symmetry folds the two rays into one.
AiryPair contour_negative(double x) {
  const double a = -x;
  const double ra = std::sqrt(a);
  double ai = 0.0, aip = 0.0;

  const double phase_span = 2.0 / 3.0 * a * ra;
  const int seg_panels = 2 + static_cast<int>(std::ceil(phase_span / 2.0));
  const RealRule seg = composite_gauss_legendre(seg_panels, 16, 0.0, ra);
  for (std::size_t k = 0; k < seg.nodes.size(); ++k) {
    const double y = seg.nodes[k];
    const double th = a * y - y * y * y / 3.0;
    ai += seg.weights[k] * std::cos(th);
    aip += seg.weights[k] * y * std::sin(th);
  }

  // Along the ray |integrand| = exp(-(sqrt3/2) sqrt(a) rho^2 - rho^3/3).
  double rho_max = 1.0;
  while ((std::sqrt(3.0) / 2.0) * ra * rho_max * rho_max + rho_max * rho_max * rho_max / 3.0 < 45.0) rho_max *= 1.25;
  const cdouble dir = std::polar(1.0, std::numbers::pi / 3.0);
  const cdouble s0(0.0, ra);
  const RealRule ray = composite_gauss_legendre(12 + static_cast<int>(std::ceil(ra * rho_max * rho_max / 4.0)), 16,
                                                0.0, rho_max);
  cdouble ray_ai = 0.0, ray_aip = 0.0;
  for (std::size_t k = 0; k < ray.nodes.size(); ++k) {
    const cdouble s = s0 + ray.nodes[k] * dir;
    const cdouble e = std::exp(s * s * s / 3.0 + a * s) * dir * ray.weights[k];
    ray_ai += e;
    ray_aip += -s * e;
  }
  ai += ray_ai.imag();
  aip += ray_aip.imag();
  return {ai / std::numbers::pi, aip / std::numbers::pi};
}

AiryPair contour_pair(double x) {
  if (x > 0.0) return contour_positive(x);
  return contour_negative(x);
}

}  // namespace

double airy_ai_series(double x) {
  const SeriesPair s = airy_series(static_cast<long double>(x));
  return static_cast<double>(kAi0 * s.f - kAip0 * s.g);
}

double airy_ai_prime_series(double x) {
  const SeriesPair s = airy_series_prime(static_cast<long double>(x));
  return static_cast<double>(kAi0 * s.f - kAip0 * s.g);
}

double airy_ai_contour(double x) { return contour_pair(x).ai; }
double airy_ai_prime_contour(double x) { return contour_pair(x).aip; }

double airy_ai(double x) {
  check_range(x);
  return std::abs(x) <= kAirySwitch ? airy_ai_series(x) : airy_ai_contour(x);
}

double airy_ai_prime(double x) {
  check_range(x);
  return std::abs(x) <= kAirySwitch ? airy_ai_prime_series(x) : airy_ai_prime_contour(x);
}

}  // namespace edgelab::specfun
