#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

namespace banditlan {

/// Standard normal CDF via erfc; absolute error below 1e-15.
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

/// Linear-interpolation quantile (Hyndman-Fan type 7) of an unsorted sample.
/// Throws ConfigError on an empty sample or q outside [0, 1].
double quantile(std::vector<double> values, double q);

double median(std::vector<double> values);

struct KsResult {
  double distance = 0.0;
  std::int64_t used = 0;
  std::int64_t missing = 0;
};

using Cdf = std::function<double(double)>;

/// One-sample Kolmogorov-Smirnov distance sup_x |F_n(x) - F(x)|, evaluated
/// exactly at the order statistics. Missing entries are skipped and counted.
/// Throws ConfigError when no sample is present.
KsResult ks_distance(std::span<const std::optional<double>> samples, const Cdf& cdf = normal_cdf);
KsResult ks_distance(std::span<const double> samples, const Cdf& cdf = normal_cdf);

struct HistogramSpec {
  double lo = -6.0;
  double hi = 6.0;
  int bins = 121;

  double bin_width() const { return (hi - lo) / bins; }
};

/// Equal-width, left-closed bins. Index 0 counts x < lo, index bins+1 counts
/// x >= hi, interior bin i (1-based) covers [lo + (i-1)w, lo + i w).
std::vector<std::int64_t> histogram(std::span<const double> samples, const HistogramSpec& spec);
std::vector<std::int64_t> histogram(std::span<const std::optional<double>> samples,
                                    const HistogramSpec& spec);

}  // namespace banditlan
