#include "slscover/bnb.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>

#include <spdlog/spdlog.h>

namespace slscover::lp {

namespace {

struct Node {
  double bound = -kInf;  // minimization sense
  long id = 0;
  std::vector<std::pair<int, std::uint8_t>> fixes;  // (position in integer set, value)
};

struct WorseFirst {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;
  }
};

bool is_feasible_point(const LpModel& model, const std::vector<double>& x,
                       std::span<const int> ints, double int_tol) {
  if (static_cast<int>(x.size()) != model.num_cols()) return false;
  for (int j = 0; j < model.num_cols(); ++j) {
    if (x[j] < model.lower(j) - kFeasTol || x[j] > model.upper(j) + kFeasTol) return false;
  }
  for (int j : ints) {
    if (std::abs(x[j] - std::round(x[j])) > int_tol) return false;
  }
  for (const Constraint& row : model.rows()) {
    double act = 0.0;
    for (const Term& t : row.terms) act += t.coef * x[t.col];
    const double tol = kFeasTol * (1.0 + std::abs(row.rhs));
    if (row.sense != RowSense::Leq && act < row.rhs - tol) return false;
    if (row.sense != RowSense::Geq && act > row.rhs + tol) return false;
  }
  return true;
}

}  // namespace

BnbResult branch_and_bound(const LpModel& model, std::span<const int> integer_vars,
                           const BnbConfig& config,
                           const std::vector<double>* incumbent_hint,
                           const NodeCallback& callback) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(Clock::now() - start).count();
  };

  std::vector<int> ints(integer_vars.begin(), integer_vars.end());
  std::sort(ints.begin(), ints.end());
  ints.erase(std::unique(ints.begin(), ints.end()), ints.end());
  std::vector<double> root_lb, root_ub;
  for (int j : ints) {
    if (j < 0 || j >= model.num_cols()) throw ModelError("integer variable out of range");
    if (model.lower(j) < 0.0 || model.upper(j) > 1.0) {
      throw ModelError("integer variable " + std::to_string(j) + " is not within [0, 1]");
    }
    root_lb.push_back(model.lower(j));
    root_ub.push_back(model.upper(j));
  }

  const double sense = model.sense() == ObjSense::Minimize ? 1.0 : -1.0;
  auto internal_value = [&](const std::vector<double>& x) {
    double v = 0.0;
    for (int j = 0; j < model.num_cols(); ++j) v += model.objective()[j] * x[j];
    return sense * v;
  };

  BnbResult res;
  double incumbent_value = kInf;
  auto prune_tol = [&] { return 1e-9 * (1.0 + std::abs(incumbent_value)); };

  auto offer = [&](std::vector<double> x, bool trusted) {
    for (int j : ints) x[j] = std::round(x[j]);
    if (!trusted && !is_feasible_point(model, x, ints, config.integrality_tol)) {
      spdlog::warn("branch_and_bound: ignoring infeasible incumbent candidate");
      return;
    }
    const double v = internal_value(x);
    if (v < incumbent_value - 1e-12 * (1.0 + std::abs(v))) {
      incumbent_value = v;
      res.incumbent = std::move(x);
    }
  };
  if (incumbent_hint != nullptr) offer(*incumbent_hint, false);

  SimplexSolver solver(model, config.lp);
  std::vector<double> cur_lb = root_lb;
  std::vector<double> cur_ub = root_ub;
  bool clean = true;

  std::priority_queue<Node, std::vector<Node>, WorseFirst> open;
  long next_id = 0;
  open.push(Node{-kInf, next_id++, {}});
  bool limit_hit = false;

  while (!open.empty()) {
    if ((config.node_limit > 0 && res.nodes >= config.node_limit) ||
        (config.time_limit > 0.0 && elapsed() > config.time_limit)) {
      limit_hit = true;
      break;
    }
    Node node = open.top();
    open.pop();
    if (res.has_incumbent() && node.bound >= incumbent_value - prune_tol()) continue;
    ++res.nodes;

    std::vector<double> lb = root_lb;
    std::vector<double> ub = root_ub;
    for (const auto& [k, v] : node.fixes) lb[k] = ub[k] = v;
    for (std::size_t k = 0; k < ints.size(); ++k) {
      if (lb[k] != cur_lb[k] || ub[k] != cur_ub[k]) {
        solver.set_bounds(ints[k], lb[k], ub[k]);
        cur_lb[k] = lb[k];
        cur_ub[k] = ub[k];
      }
    }

    int cut_rounds = 0;
    for (;;) {
      LpSolution sol = solver.solve();
      ++res.lp_solves;
      if (sol.status == LpStatus::NumericalFailure || sol.status == LpStatus::IterationLimit) {
        SimplexSolver fresh(solver.model(), config.lp);
        sol = fresh.solve();
        ++res.lp_solves;
        solver = std::move(fresh);
      }
      res.lp_iterations += sol.iterations;
      if (sol.status == LpStatus::Infeasible) break;
      if (sol.status != LpStatus::Optimal) {
        spdlog::warn("branch_and_bound: node {} relaxation ended with status {}", node.id,
                     to_string(sol.status));
        clean = false;
        break;
      }
      const double value = sense * sol.objective;
      if (res.nodes == 1 && cut_rounds == 0) res.root_bound = sense * value;
      if (res.has_incumbent() && value >= incumbent_value - prune_tol()) break;

      bool integral = true;
      for (int j : ints) {
        if (std::abs(sol.primal[j] - std::round(sol.primal[j])) > config.integrality_tol) {
          integral = false;
          break;
        }
      }

      if (callback) {
        NodeAction action = callback(sol, integral);
        if (action.replacement) offer(std::move(*action.replacement), false);
        const int cap = integral ? config.integral_cut_rounds : config.fractional_cut_rounds;
        if (!action.cuts.empty() && cut_rounds < cap) {
          res.cuts_added += static_cast<long>(action.cuts.size());
          solver.add_cuts(action.cuts);
          ++cut_rounds;
          continue;
        }
        if (integral && !action.cuts.empty()) {
          spdlog::warn("branch_and_bound: cut rounds exhausted at node {}", node.id);
          clean = false;
          break;
        }
        if (integral && action.reject) break;
      }
      if (integral) {
        offer(sol.primal, true);
        break;
      }

      std::vector<std::pair<int, std::uint8_t>> child_fixes = node.fixes;
      if (config.node_rc_fixing && res.has_incumbent()) {
        for (std::size_t k = 0; k < ints.size(); ++k) {
          if (lb[k] == ub[k]) continue;
          const int j = ints[k];
          const double d = sense * sol.reduced_costs[j];
          if (sol.primal[j] <= lb[k] + config.integrality_tol && d > 0.0 &&
              value + d > incumbent_value + prune_tol()) {
            child_fixes.emplace_back(static_cast<int>(k), 0);
            ++res.node_fixings;
          } else if (sol.primal[j] >= ub[k] - config.integrality_tol && d < 0.0 &&
                     value - d > incumbent_value + prune_tol()) {
            child_fixes.emplace_back(static_cast<int>(k), 1);
            ++res.node_fixings;
          }
        }
      }

      int branch = -1;
      double best_score = -1.0;
      for (std::size_t k = 0; k < ints.size(); ++k) {
        const double v = sol.primal[ints[k]];
        const double frac = v - std::floor(v);
        const double score = std::min(frac, 1.0 - frac);
        if (score <= config.integrality_tol) continue;
        if (config.branching == Branching::FirstFractional) {
          branch = static_cast<int>(k);
          break;
        }
        if (score > best_score) {
          best_score = score;
          branch = static_cast<int>(k);
        }
      }
      for (std::uint8_t v : {std::uint8_t{0}, std::uint8_t{1}}) {
        Node child{value, next_id++, child_fixes};
        child.fixes.emplace_back(branch, v);
        open.push(std::move(child));
      }
      break;
    }
  }

  res.seconds = elapsed();
  if (limit_hit) {
    double bound = open.empty() ? incumbent_value : open.top().bound;
    if (res.has_incumbent()) bound = std::min(bound, incumbent_value);
    res.best_bound = sense * bound;
    res.status = BnbStatus::LimitReached;
  } else if (!clean) {
    res.status = BnbStatus::Failed;
    res.best_bound = sense * (res.has_incumbent() ? incumbent_value : -kInf);
  } else if (res.has_incumbent()) {
    res.status = BnbStatus::Optimal;
    res.proved_optimal = true;
    res.best_bound = sense * incumbent_value;
  } else {
    res.status = BnbStatus::Infeasible;
    res.proved_optimal = true;
    res.best_bound = sense * kInf;
  }
  if (res.has_incumbent()) res.objective = sense * incumbent_value;
  return res;
}

}  // namespace slscover::lp
