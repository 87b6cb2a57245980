#pragma once

// Best-first 0/1 branch-and-bound over LP relaxations. All nodes share one
// SimplexSolver; each node is re-solved from the basis left by the previous
// node after its bounds are installed.

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "slscover/lp.hpp"

namespace slscover::lp {

enum class Branching { MostFractional, FirstFractional };

struct BnbConfig {
  double integrality_tol = 1e-6;
  double gap_tol = 1e-7;
  long node_limit = 2'000'000;
  double time_limit = 0.0;  // seconds; 0 means none
  Branching branching = Branching::MostFractional;
  bool node_rc_fixing = false;
  int fractional_cut_rounds = 20;
  int integral_cut_rounds = 1000;
  SimplexOptions lp;
};

/// What a node callback wants done with the node's relaxation.
struct NodeAction {
  std::vector<Constraint> cuts;  // globally valid; the node is re-solved
  /// A feasible point offered as an incumbent candidate.
  std::optional<std::vector<double>> replacement;
  /// Discard an integral relaxation point instead of accepting it.
  bool reject = false;
};

/// Called after every optimal node relaxation. `integral` reports whether
/// all integer variables are within tolerance of 0/1.
using NodeCallback = std::function<NodeAction(const LpSolution& relaxation, bool integral)>;

enum class BnbStatus { Optimal, Infeasible, LimitReached, Failed };

struct BnbResult {
  BnbStatus status = BnbStatus::Failed;
  std::vector<double> incumbent;  // empty when none was found
  double objective = 0.0;
  double best_bound = 0.0;
  bool proved_optimal = false;
  long nodes = 0;
  long lp_solves = 0;
  long lp_iterations = 0;
  long cuts_added = 0;
  long node_fixings = 0;
  double root_bound = 0.0;
  double seconds = 0.0;

  bool has_incumbent() const { return !incumbent.empty(); }
};

/// Integer variables must have bounds within [0, 1].
BnbResult branch_and_bound(const LpModel& model, std::span<const int> integer_vars,
                           const BnbConfig& config = {},
                           const std::vector<double>* incumbent_hint = nullptr,
                           const NodeCallback& callback = {});

}  // namespace slscover::lp
