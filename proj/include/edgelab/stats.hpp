#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace edgelab::stats {

// Right-continuous empirical distribution function.
class Ecdf {
 public:
  explicit Ecdf(std::span<const double> sample);

  // #{values <= x} / n
  double operator()(double x) const;

  std::size_t size() const noexcept { return sorted_.size(); }
  const std::vector<double>& sorted() const noexcept { return sorted_; }

 private:
  std::vector<double> sorted_;
};

Ecdf ecdf(std::span<const double> sample);

struct KsResult {
  double statistic = 0.0;  // D in [0, 1]
  double p_value = 1.0;
  std::size_t n1 = 0;
  std::size_t n2 = 0;  // 0 for the one-sample test
};

// Asymptotic Kolmogorov survival function Q(lambda) = 2 sum (-1)^{k-1} e^{-2 k^2 lambda^2},
// truncated once terms fall below 1e-12.
double kolmogorov_q(double lambda);

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

// cdf must be nondecreasing; a decrease of more than 1e-9 between consecutive
// sorted sample points raises NonMonotoneCdf.
KsResult ks_one_sample(std::span<const double> a, const std::function<double(double)>& cdf);

// KS harness convention: a comparison passes when p > 0.01 in at least 9 of 10
// independent seeds.
inline constexpr double kPassPValue = 0.01;
inline constexpr int kSeedsPerCheck = 10;
inline constexpr int kSeedsRequired = 9;

struct SeedVerdict {
  std::vector<double> p_values;
  int passing = 0;
  bool pass = false;
};

SeedVerdict seed_verdict(std::vector<double> p_values);

// Monotone piecewise-linear interpolant of (grid, values); clamps outside the
// grid to the end values. Values are made nondecreasing by a running maximum.
class MonotoneInterpolant {
 public:
  MonotoneInterpolant(std::vector<double> grid, std::vector<double> values);
  double operator()(double x) const;

 private:
  std::vector<double> grid_;
  std::vector<double> values_;
};

double mean(std::span<const double> v);
double variance(std::span<const double> v);
double correlation(std::span<const double> a, std::span<const double> b);

}  // namespace edgelab::stats
