#include "plc/stats.hpp"

#include <algorithm>
#include <cmath>

#include "plc/errors.hpp"

namespace plc {

double mean(std::span<const double> x) {
  if (x.empty()) throw ArgumentError("mean: empty input");
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double sample_variance(std::span<const double> x) {
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size());
}

double percentile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw ArgumentError("percentile_sorted: empty input");
  if (p < 0.0 || p > 100.0) throw ArgumentError("percentile_sorted: p outside [0,100]");
  const std::size_t n = sorted.size();
  if (n == 1) return sorted[0];
  const double h = (static_cast<double>(n) - 1.0) * p / 100.0;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= n) return sorted[n - 1];
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

double ks_distance(std::vector<double> data, const std::function<double(double)>& cdf) {
  if (data.empty()) throw ArgumentError("ks_distance: empty input");
  std::sort(data.begin(), data.end());
  const double n = static_cast<double>(data.size());
  double d = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double f = cdf(data[i]);
    d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - f));
    d = std::max(d, std::fabs(static_cast<double>(i) / n - f));
  }
  return d;
}

double ks_distance_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw ArgumentError("ks_distance_two_sample: empty input");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_two_sample_pvalue(double d, std::size_t n1, std::size_t n2) {
  const double en = std::sqrt(static_cast<double>(n1) * static_cast<double>(n2) /
                              static_cast<double>(n1 + n2));
  const double lambda = (en + 0.12 + 0.11 / en) * d;
  // Kolmogorov tail series.
  double p = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    p += 2.0 * sign * term;
    if (term < 1e-12) break;
    sign = -sign;
  }
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace plc
