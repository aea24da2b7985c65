#pragma once

#include <functional>
#include <span>
#include <vector>

namespace plc {

double mean(std::span<const double> x);

double sample_variance(std::span<const double> x);  // 1/N convention

/// Linear interpolation between closest ranks ("type 7"); input must be sorted.
double percentile_sorted(std::span<const double> sorted, double p);

/// One-sample Kolmogorov-Smirnov distance sup|F_n - F|; data need not be sorted.
double ks_distance(std::vector<double> data, const std::function<double(double)>& cdf);

/// Two-sample KS distance.
double ks_distance_two_sample(std::vector<double> a, std::vector<double> b);

/// Asymptotic two-sample KS p-value (Stephens' small-sample adjustment).
double ks_two_sample_pvalue(double d, std::size_t n1, std::size_t n2);

}  // namespace plc
