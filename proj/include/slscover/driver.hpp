#pragma once

// One instance through the configured pipeline, producing the artifacts the
// solve command writes.

#include <string>

#include "slscover/instance.hpp"
#include "slscover/report.hpp"
#include "slscover/run_config.hpp"

namespace slscover::cli {

enum ExitCode : int { kProved = 0, kLimitHit = 2, kInfeasible = 3, kInputError = 4 };

struct SolveOutcome {
  int exit_code = kProved;
  report::BenchRecord record;
  std::string solution_json;  // empty when no solution exists
  std::string ledger_json;
  std::string message;        // reason for a nonzero exit code
};

/// Set-covering mode: the reduction pipeline then branch-and-bound. In
/// location mode the covering optimum gives the upper bound and warm start.
SolveOutcome solve_instance(const Cp1Instance& inst, const std::string& id,
                            const RunConfig& config);

/// Worst of two exit codes (input error > infeasible > limit hit > proved).
int combine_exit_codes(int a, int b);

}  // namespace slscover::cli
