#include "banditlan/stats.hpp"

#include <algorithm>
#include <cmath>

#include "banditlan/errors.hpp"

namespace banditlan {

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw ConfigError("quantile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw ConfigError("quantile level outside [0, 1]");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

double median(std::vector<double> values) { return quantile(std::move(values), 0.5); }

namespace {

double sorted_ks(std::vector<double>& xs, const Cdf& cdf) {
  std::sort(xs.begin(), xs.end());
  const auto n = static_cast<double>(xs.size());
  double sup = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    const double above = static_cast<double>(i + 1) / n - f;
    const double below = f - static_cast<double>(i) / n;
    sup = std::max({sup, above, below});
  }
  return sup;
}

}  // namespace

KsResult ks_distance(std::span<const std::optional<double>> samples, const Cdf& cdf) {
  std::vector<double> xs;
  xs.reserve(samples.size());
  KsResult result;
  for (const auto& s : samples) {
    if (s) {
      xs.push_back(*s);
    } else {
      ++result.missing;
    }
  }
  if (xs.empty()) throw ConfigError("KS distance of a sample with no present values");
  result.used = static_cast<std::int64_t>(xs.size());
  result.distance = sorted_ks(xs, cdf);
  return result;
}

KsResult ks_distance(std::span<const double> samples, const Cdf& cdf) {
  if (samples.empty()) throw ConfigError("KS distance of an empty sample");
  std::vector<double> xs(samples.begin(), samples.end());
  KsResult result;
  result.used = static_cast<std::int64_t>(xs.size());
  result.distance = sorted_ks(xs, cdf);
  return result;
}

namespace {

void check_spec(const HistogramSpec& spec) {
  if (!(spec.lo < spec.hi)) throw ConfigError("histogram needs lo < hi");
  if (spec.bins < 1) throw ConfigError("histogram needs at least one bin");
}

void add_to(std::vector<std::int64_t>& counts, const HistogramSpec& spec, double x) {
  const auto bins = static_cast<std::size_t>(spec.bins);
  if (x < spec.lo) {
    ++counts[0];
  } else if (x >= spec.hi || std::isnan(x)) {
    ++counts[bins + 1];
  } else {
    auto idx = static_cast<std::size_t>(std::floor((x - spec.lo) / spec.bin_width()));
    ++counts[1 + std::min(idx, bins - 1)];
  }
}

}  // namespace

std::vector<std::int64_t> histogram(std::span<const double> samples, const HistogramSpec& spec) {
  check_spec(spec);
  std::vector<std::int64_t> counts(static_cast<std::size_t>(spec.bins) + 2, 0);
  for (double x : samples) add_to(counts, spec, x);
  return counts;
}

std::vector<std::int64_t> histogram(std::span<const std::optional<double>> samples,
                                    const HistogramSpec& spec) {
  check_spec(spec);
  std::vector<std::int64_t> counts(static_cast<std::size_t>(spec.bins) + 2, 0);
  for (const auto& x : samples) {
    if (x) add_to(counts, spec, *x);
  }
  return counts;
}

}  // namespace banditlan
