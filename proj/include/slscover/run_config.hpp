#pragma once

// Settings shared by the command-line flags and the optional JSON config
// file. Config keys are the long flag names with '-' replaced by '_'.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "slscover/presolve.hpp"
#include "slscover/scp.hpp"

namespace slscover::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Mode { Scp, Cp2 };

struct SeedRange {
  std::uint64_t first = 1;
  std::uint64_t last = 1;
};

/// "7" or "1-50".
SeedRange parse_seed_range(const std::string& text);

struct RunConfig {
  std::string command;
  std::vector<std::filesystem::path> instances;
  std::filesystem::path output_dir = ".";

  // generate
  std::string family = "scp";  // sets the default vertex count and box side
  int n = 0;
  std::optional<int> nu;
  double r_min = 0.11;
  double r_max = 0.19;
  std::optional<double> ell;
  SeedRange seeds;

  // solve
  Mode mode = Mode::Scp;
  scp::PresolveLevel presolve = scp::PresolveLevel::Strong;
  double sf_budget = 0.0;  // fraction of the columns; 0 solves one subproblem per column
  presolve::Strategy sf_strategy = presolve::Strategy::All;
  double time_limit = 0.0;  // seconds per solve; 0 means none
  bool compare = false;     // also solve without presolve to fill the original-time column
  int jobs = 1;

  /// Throws ConfigError describing the first invalid setting.
  void validate() const;

  /// Vertex count for generate: explicit nu, else 0.03 n (scp family) or
  /// n / 2 (cp2 family), at least 3.
  int resolved_nu() const;
  /// Box side: explicit ell, else 0 (scp family) or 0.05 (cp2 family).
  double resolved_ell() const;
};

/// Overwrites the fields named in the JSON object. Throws ConfigError naming
/// the offending key on unknown keys or wrong types.
void apply_config_json(RunConfig& config, const std::string& text);

std::optional<Mode> parse_mode(const std::string& text);
std::string to_string(Mode mode);

}  // namespace slscover::cli
