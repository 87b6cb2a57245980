#pragma once

// Aggregates used in benchmark reports.

#include <array>
#include <span>
#include <stdexcept>

namespace slscover::stats {

/// (prod (v_i + shift))^(1/n) - shift, computed through logarithms.
/// Throws std::invalid_argument on empty input, a negative value, or shift <= 0.
double shifted_geomean(std::span<const double> values, double shift);

struct Ratio {
  double value = 0.0;
  bool undefined = false;  // original time was zero; value is reported as 0
};

/// reduced / original.
Ratio time_reduction_factor(double reduced_seconds, double original_seconds);

/// Counts per bin (0, 0.1], (0.1, 0.2], ..., (0.9, 1.0], then one overflow
/// bin for factors above 1. A factor of exactly 0 goes to the first bin.
struct FactorHistogram {
  std::array<int, 11> counts{};
  int total() const;
};

FactorHistogram factor_histogram(std::span<const double> factors);

}  // namespace slscover::stats
