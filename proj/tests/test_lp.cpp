#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "slscover/lp.hpp"

using namespace slscover::lp;

namespace {

// Primal feasibility, dual sign conditions, complementary bounds, and the
// duality gap, all recomputed from the model.
struct KktReport {
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double gap = 0.0;
};

KktReport check_kkt(const LpModel& model, const LpSolution& sol) {
  KktReport rep;
  const double sense = model.sense() == ObjSense::Minimize ? 1.0 : -1.0;
  const int n = model.num_cols();
  for (int j = 0; j < n; ++j) {
    rep.primal_residual = std::max(rep.primal_residual, model.lower(j) - sol.primal[j]);
    rep.primal_residual = std::max(rep.primal_residual, sol.primal[j] - model.upper(j));
  }
  std::vector<double> dual_slack(model.objective().begin(), model.objective().end());
  double dual_obj = 0.0;
  for (int i = 0; i < model.num_rows(); ++i) {
    const Constraint& row = model.row(i);
    double act = 0.0;
    for (const Term& t : row.terms) {
      act += t.coef * sol.primal[t.col];
      dual_slack[t.col] -= sol.duals[i] * t.coef;
    }
    const double yi = sense * sol.duals[i];
    if (row.sense != RowSense::Leq) rep.primal_residual = std::max(rep.primal_residual, row.rhs - act);
    if (row.sense != RowSense::Geq) rep.primal_residual = std::max(rep.primal_residual, act - row.rhs);
    if (row.sense == RowSense::Geq) rep.dual_residual = std::max(rep.dual_residual, -yi);
    if (row.sense == RowSense::Leq) rep.dual_residual = std::max(rep.dual_residual, yi);
    dual_obj += sol.duals[i] * row.rhs;
  }
  for (int j = 0; j < n; ++j) {
    EXPECT_NEAR(dual_slack[j], sol.reduced_costs[j], 1e-7);
    const double dj = sense * dual_slack[j];
    if (dj > 0) {
      if (!std::isfinite(model.lower(j))) rep.dual_residual = std::max(rep.dual_residual, dj);
      else dual_obj += dual_slack[j] * model.lower(j);
    } else if (dj < 0) {
      if (!std::isfinite(model.upper(j))) rep.dual_residual = std::max(rep.dual_residual, -dj);
      else dual_obj += dual_slack[j] * model.upper(j);
    }
  }
  rep.gap = std::abs(dual_obj - sol.objective);
  return rep;
}

LpModel covering_lp(const std::vector<std::vector<int>>& rows, int n) {
  LpModel model;
  for (int j = 0; j < n; ++j) model.add_variable(0.0, kInf, 1.0);
  for (const auto& r : rows) {
    std::vector<Term> terms;
    for (int j : r) terms.push_back({j, 1.0});
    model.add_constraint(terms, RowSense::Geq, 1.0);
  }
  return model;
}

LpModel random_lp(std::mt19937_64& rng, int m, int n) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::uniform_real_distribution<double> pos(0.1, 2.0);
  std::uniform_int_distribution<int> pick(0, 5);
  LpModel model(pick(rng) % 2 ? ObjSense::Maximize : ObjSense::Minimize);
  std::vector<double> anchor(n);
  for (int j = 0; j < n; ++j) {
    const int kind = pick(rng);
    double lb = -pos(rng), ub = pos(rng);
    if (kind == 0) lb = -kInf;
    if (kind == 1) ub = kInf;
    if (kind == 2) { lb = 0.0; ub = kInf; }
    model.add_variable(lb, ub, coef(rng));
    anchor[j] = std::isfinite(lb) ? (std::isfinite(ub) ? 0.5 * (lb + ub) : lb + 0.3)
                                  : (std::isfinite(ub) ? ub - 0.3 : 0.0);
  }
  // Rows are built around a known interior point so the LP is feasible.
  for (int i = 0; i < m; ++i) {
    std::vector<Term> terms;
    double act = 0.0;
    for (int j = 0; j < n; ++j) {
      if (pick(rng) < 3) {
        const double c = coef(rng);
        terms.push_back({j, c});
        act += c * anchor[j];
      }
    }
    const int s = pick(rng) % 3;
    const RowSense sense = s == 0 ? RowSense::Geq : (s == 1 ? RowSense::Leq : RowSense::Eq);
    const double rhs = sense == RowSense::Geq ? act - pos(rng)
                       : sense == RowSense::Leq ? act + pos(rng) : act;
    model.add_constraint(terms, sense, rhs);
  }
  // Box everything loosely so the optimum is finite.
  for (int j = 0; j < n; ++j) {
    model.set_bounds(j, std::max(model.lower(j), -50.0), std::min(model.upper(j), 50.0));
  }
  return model;
}

}  // namespace

TEST(Lp, SingleCoverRow) {
  const LpModel model = covering_lp({{0, 1}}, 2);
  const LpSolution sol = solve_lp(model);
  ASSERT_EQ(sol.status, LpStatus::Optimal);
  EXPECT_NEAR(sol.objective, 1.0, 1e-9);
  EXPECT_NEAR(sol.duals[0], 1.0, 1e-9);
}

TEST(Lp, C25CoveringRelaxationIsHalfIntegral) {
  std::vector<std::vector<int>> rows;
  for (int i = 0; i < 5; ++i) rows.push_back({i, (i + 1) % 5});
  const LpModel model = covering_lp(rows, 5);
  const LpSolution sol = solve_lp(model);
  ASSERT_EQ(sol.status, LpStatus::Optimal);
  EXPECT_NEAR(sol.objective, 2.5, 1e-7);
  for (double v : sol.primal) EXPECT_NEAR(v, 0.5, 1e-7);
  const auto kkt = check_kkt(model, sol);
  EXPECT_LE(kkt.primal_residual, kFeasTol);
  EXPECT_LE(kkt.dual_residual, kFeasTol);
  EXPECT_LE(kkt.gap, kGapTol * 3.5);
}

TEST(Lp, UnboundedAndInfeasible) {
  LpModel unb(ObjSense::Maximize);
  unb.add_variable(-kInf, kInf, 1.0);
  unb.add_constraint({{0, -1.0}}, RowSense::Leq, 1.0);
  EXPECT_EQ(solve_lp(unb).status, LpStatus::Unbounded);

  LpModel inf;
  inf.add_variable(-kInf, kInf, 1.0);
  inf.add_constraint({{0, 1.0}}, RowSense::Geq, 2.0);
  inf.add_constraint({{0, 1.0}}, RowSense::Leq, 1.0);
  EXPECT_EQ(solve_lp(inf).status, LpStatus::Infeasible);

  LpModel bounds_only;
  bounds_only.add_variable(0.0, 1.0, -1.0);
  bounds_only.add_variable(-2.0, 3.0, 1.0);
  const auto sol = solve_lp(bounds_only);
  ASSERT_EQ(sol.status, LpStatus::Optimal);
  EXPECT_NEAR(sol.objective, -3.0, 1e-12);
}

TEST(Lp, RejectsMalformedRows) {
  LpModel model;
  model.add_variable(0.0, 1.0, 1.0);
  EXPECT_THROW(model.add_constraint({{0, 1.0}, {3, 1.0}}, RowSense::Geq, 1.0), ModelError);
  EXPECT_THROW(model.add_constraint({{0, NAN}}, RowSense::Geq, 1.0), ModelError);
  EXPECT_THROW(model.add_variable(2.0, 1.0), ModelError);
  SimplexSolver solver(model);
  const Constraint bad{{{-1, 1.0}}, RowSense::Geq, 0.0};
  EXPECT_THROW(solver.add_cut(bad), ModelError);
}

TEST(Lp, RandomModelsSatisfyKkt) {
  std::mt19937_64 rng(7);
  int optimal = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int m = 1 + trial % 12;
    const int n = 1 + (trial * 7) % 15;
    const LpModel model = random_lp(rng, m, n);
    const LpSolution sol = solve_lp(model);
    ASSERT_EQ(sol.status, LpStatus::Optimal) << "trial " << trial;
    ++optimal;
    const auto kkt = check_kkt(model, sol);
    EXPECT_LE(kkt.primal_residual, kFeasTol) << "trial " << trial;
    EXPECT_LE(kkt.dual_residual, kFeasTol) << "trial " << trial;
    EXPECT_LE(kkt.gap, kGapTol * (1.0 + std::abs(sol.objective))) << "trial " << trial;
  }
  EXPECT_EQ(optimal, 300);
}

TEST(Lp, ResolveWithSameObjectiveTakesNoPivots) {
  std::vector<std::vector<int>> rows{{0, 1}, {1, 2}, {2, 3}, {0, 3}};
  SimplexSolver solver(covering_lp(rows, 4));
  const LpSolution first = solver.solve();
  ASSERT_TRUE(first.optimal());
  const std::vector<double> obj(4, 1.0);
  const LpSolution again = solver.resolve_with_objective(obj);
  ASSERT_TRUE(again.optimal());
  EXPECT_EQ(again.iterations, 0);
  EXPECT_EQ(again.primal, first.primal);
  EXPECT_EQ(again.duals, first.duals);
}

TEST(Lp, ObjectiveSwapsMatchFreshSolves) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    LpModel model = random_lp(rng, 8, 10);
    SimplexSolver solver(model);
    ASSERT_TRUE(solver.solve().optimal());
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    for (int k = 0; k < 5; ++k) {
      std::vector<double> obj(10);
      for (double& c : obj) c = coef(rng);
      const LpSolution warm = solver.resolve_with_objective(obj);
      model.set_objective(obj);
      const LpSolution cold = solve_lp(model);
      ASSERT_EQ(warm.status, cold.status);
      EXPECT_NEAR(warm.objective, cold.objective, 1e-7 * (1 + std::abs(cold.objective)));
    }
  }
}

TEST(Lp, CutsTightenAndRedundantCutsDoNot) {
  std::vector<std::vector<int>> rows;
  for (int i = 0; i < 5; ++i) rows.push_back({i, (i + 1) % 5});
  SimplexSolver solver(covering_lp(rows, 5));
  const double base = solver.solve().objective;
  solver.add_cut({{{0, 1.0}, {1, 1.0}}, RowSense::Geq, 0.5});
  const LpSolution same = solver.solve();
  EXPECT_NEAR(same.objective, base, 1e-9);
  // Odd-cycle inequality: sum z >= 3.
  std::vector<Term> all;
  for (int j = 0; j < 5; ++j) all.push_back({j, 1.0});
  solver.add_cut({all, RowSense::Geq, 3.0});
  const LpSolution tight = solver.solve();
  ASSERT_TRUE(tight.optimal());
  EXPECT_NEAR(tight.objective, 3.0, 1e-9);
  EXPECT_GT(tight.objective, base);
  const auto kkt = check_kkt(solver.model(), tight);
  EXPECT_LE(kkt.dual_residual, kFeasTol);
  EXPECT_LE(kkt.gap, 1e-7);
}

TEST(Lp, BoundChangesWarmStartMatchesColdSolve) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    LpModel model = random_lp(rng, 10, 12);
    SimplexSolver solver(model);
    solver.solve();
    std::uniform_int_distribution<int> col(0, 11);
    for (int k = 0; k < 4; ++k) {
      const int j = col(rng);
      const double lo = model.lower(j);
      const double hi = model.upper(j);
      const double mid = 0.5 * (lo + hi);
      const double new_lo = k % 2 ? mid : lo;
      const double new_hi = k % 2 ? hi : mid;
      solver.set_bounds(j, new_lo, new_hi);
      model.set_bounds(j, new_lo, new_hi);
      const LpSolution warm = solver.solve();
      const LpSolution cold = solve_lp(model);
      ASSERT_EQ(warm.status, cold.status) << trial;
      if (cold.optimal()) {
        EXPECT_NEAR(warm.objective, cold.objective, 1e-7 * (1 + std::abs(cold.objective)));
      }
    }
  }
}

TEST(Lp, SnapshotRestoreIsPathIndependent) {
  std::mt19937_64 rng(3);
  LpModel model = random_lp(rng, 9, 9);
  SimplexSolver solver(model);
  ASSERT_TRUE(solver.solve().optimal());
  const auto root = solver.snapshot();
  std::vector<double> obj_a(9, 1.0), obj_b(9, -1.0);
  solver.resolve_with_objective(obj_b);
  solver.restore(*root);
  const LpSolution after = solver.resolve_with_objective(obj_a);
  SimplexSolver fresh(model);
  fresh.solve();
  const LpSolution direct = fresh.resolve_with_objective(obj_a);
  EXPECT_EQ(after.primal, direct.primal);
  EXPECT_EQ(after.iterations, direct.iterations);
}

TEST(Lp, Deterministic) {
  std::mt19937_64 rng(21);
  const LpModel model = random_lp(rng, 12, 14);
  const LpSolution a = solve_lp(model);
  const LpSolution b = solve_lp(model);
  EXPECT_EQ(a.primal, b.primal);
  EXPECT_EQ(a.duals, b.duals);
  EXPECT_EQ(a.iterations, b.iterations);
}

TEST(Lp, TextDump) {
  LpModel model;
  model.add_variable(0.0, kInf, 2.0);
  model.add_constraint({{0, 1.0}}, RowSense::Geq, 1.0);
  const std::string text = to_lp_text(model);
  EXPECT_NE(text.find("minimize"), std::string::npos);
  EXPECT_NE(text.find("r0: 1 x0 >= 1"), std::string::npos);
  EXPECT_NE(text.find("x0 in [0, inf]"), std::string::npos);
}
