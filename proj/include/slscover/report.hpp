#pragma once

// Benchmark records: one CSV row per solved instance. Column names follow the
// reduction and location-model result tables; every *_time column is wall
// clock on the machine that produced it.

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "slscover/presolve.hpp"

namespace slscover::report {

class RecordError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BenchRecord {
  std::string instance;
  std::string mode;  // "scp" or "cp2"
  presolve::ReductionReport reduction;
  std::optional<double> original_time;  // solve without presolve
  double reduced_time = 0.0;            // solve after presolve
  double objective = 0.0;
  bool proved_optimal = false;

  // Location-model columns.
  std::optional<int> graph_vertices;
  std::optional<int> graph_edges;
  std::optional<double> opt_scp;
  std::optional<double> opt_cp2;
  std::optional<int> sum_z_scp;
  std::optional<int> sum_z_cp2;

  /// Throws RecordError on a negative time or a reduced size above the original.
  void validate() const;
};

std::vector<std::string> csv_columns();
std::string csv_header();
std::string csv_row(const BenchRecord& record);
/// Inverse of csv_row; throws RecordError naming the bad column.
BenchRecord parse_csv_row(std::string_view line);

/// Header line followed by rows; blank lines are skipped.
std::vector<BenchRecord> parse_csv(std::string_view text);

/// True for the columns holding wall-clock times.
bool is_time_column(std::string_view name);

}  // namespace slscover::report
