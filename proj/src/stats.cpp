#include "slscover/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace slscover::stats {

double shifted_geomean(std::span<const double> values, double shift) {
  if (values.empty()) throw std::invalid_argument("shifted_geomean: no values");
  if (!(shift > 0.0)) throw std::invalid_argument("shifted_geomean: shift must be positive");
  double log_sum = 0.0;
  for (double v : values) {
    if (!(v >= 0.0)) throw std::invalid_argument("shifted_geomean: values must be >= 0");
    log_sum += std::log(v + shift);
  }
  return std::exp(log_sum / static_cast<double>(values.size())) - shift;
}

Ratio time_reduction_factor(double reduced_seconds, double original_seconds) {
  if (reduced_seconds < 0.0 || original_seconds < 0.0) {
    throw std::invalid_argument("time_reduction_factor: negative time");
  }
  if (original_seconds == 0.0) return {0.0, true};
  return {reduced_seconds / original_seconds, false};
}

int FactorHistogram::total() const { return std::accumulate(counts.begin(), counts.end(), 0); }

FactorHistogram factor_histogram(std::span<const double> factors) {
  FactorHistogram h;
  for (double f : factors) {
    if (f > 1.0) {
      ++h.counts[10];
      continue;
    }
    // Bin b holds (b / 10, (b + 1) / 10]; the small slack keeps 0.3 in bin 2.
    const int b = static_cast<int>(std::ceil(f * 10.0 - 1e-9)) - 1;
    ++h.counts[std::clamp(b, 0, 9)];
  }
  return h;
}

}  // namespace slscover::stats
