#include "edgelab/stats.hpp"

#include <algorithm>
#include <cmath>

#include "edgelab/error.hpp"

namespace edgelab::stats {

Ecdf::Ecdf(std::span<const double> sample) : sorted_(sample.begin(), sample.end()) {
  if (sorted_.empty()) throw Error(ErrorKind::EmptySample, "ecdf of an empty sample");
  std::sort(sorted_.begin(), sorted_.end());
}

double Ecdf::operator()(double x) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

Ecdf ecdf(std::span<const double> sample) { return Ecdf(sample); }

double kolmogorov_q(double lambda) {
  if (lambda <= 0.0) return 1.0;
  // Below ~0.2 the alternating series converges too slowly to be useful and Q is 1 to
  // double precision.
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k < 1000; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-12) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw Error(ErrorKind::EmptySample, "ks_two_sample needs two nonempty samples");
  std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const double n1 = static_cast<double>(sa.size());
  const double n2 = static_cast<double>(sb.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  // Walk the pooled points; ties are consumed from both samples before comparing.
  while (i < sa.size() || j < sb.size()) {
    double x;
    if (j >= sb.size() || (i < sa.size() && sa[i] <= sb[j]))
      x = sa[i];
    else
      x = sb[j];
    while (i < sa.size() && sa[i] <= x) ++i;
    while (j < sb.size() && sb[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n1 - static_cast<double>(j) / n2));
  }
  KsResult r;
  r.statistic = d;
  r.n1 = sa.size();
  r.n2 = sb.size();
  r.p_value = kolmogorov_q(d * std::sqrt(n1 * n2 / (n1 + n2)));
  return r;
}

KsResult ks_one_sample(std::span<const double> a, const std::function<double(double)>& cdf) {
  if (a.empty()) throw Error(ErrorKind::EmptySample, "ks_one_sample needs a nonempty sample");
  std::vector<double> s(a.begin(), a.end());
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  double previous = -1.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double f = cdf(s[i]);
    if (f < previous - 1e-9) throw Error(ErrorKind::NonMonotoneCdf, "supplied cdf decreases");
    previous = std::max(previous, f);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  KsResult r;
  r.statistic = std::clamp(d, 0.0, 1.0);
  r.n1 = s.size();
  r.p_value = kolmogorov_q(r.statistic * std::sqrt(n));
  return r;
}

SeedVerdict seed_verdict(std::vector<double> p_values) {
  SeedVerdict v;
  v.p_values = std::move(p_values);
  v.passing = static_cast<int>(std::count_if(v.p_values.begin(), v.p_values.end(),
                                             [](double p) { return p > kPassPValue; }));
  const double required = static_cast<double>(kSeedsRequired) / kSeedsPerCheck;
  v.pass = v.passing >= static_cast<int>(std::ceil(required * static_cast<double>(v.p_values.size()) - 1e-12));
  return v;
}

MonotoneInterpolant::MonotoneInterpolant(std::vector<double> grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (grid_.empty() || grid_.size() != values_.size())
    throw Error(ErrorKind::InvalidArgument, "interpolant needs matching nonempty grid and values");
  for (std::size_t i = 1; i < grid_.size(); ++i) {
    if (!(grid_[i] > grid_[i - 1])) throw Error(ErrorKind::InvalidArgument, "interpolant grid must increase");
    values_[i] = std::max(values_[i], values_[i - 1]);
  }
}

double MonotoneInterpolant::operator()(double x) const {
  if (x <= grid_.front()) return values_.front();
  if (x >= grid_.back()) return values_.back();
  const auto it = std::upper_bound(grid_.begin(), grid_.end(), x);
  const std::size_t k = static_cast<std::size_t>(it - grid_.begin());
  const double w = (x - grid_[k - 1]) / (grid_[k] - grid_[k - 1]);
  return values_[k - 1] + w * (values_[k] - values_[k - 1]);
}

double mean(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double variance(std::span<const double> v) {
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

double correlation(std::span<const double> a, std::span<const double> b) {
  const double ma = mean(a), mb = mean(b);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

}  // namespace edgelab::stats
