#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "slscover/bnb.hpp"

using namespace slscover::lp;
using slscover::CoverMatrix;

namespace {

LpModel covering_ip(const CoverMatrix& a, const std::vector<double>& w) {
  LpModel model;
  for (double wj : w) model.add_variable(0.0, 1.0, wj);
  for (const auto& row : a.rows) {
    std::vector<Term> terms;
    for (int j : row) terms.push_back({j, 1.0});
    model.add_constraint(terms, RowSense::Geq, 1.0);
  }
  return model;
}

std::vector<int> iota_vec(int n) {
  std::vector<int> v(n);
  for (int j = 0; j < n; ++j) v[j] = j;
  return v;
}

CoverMatrix random_cover(std::mt19937_64& rng, int m, int n) {
  std::uniform_int_distribution<int> col(0, n - 1);
  std::bernoulli_distribution coin(0.3);
  CoverMatrix a;
  a.num_cols = n;
  for (int i = 0; i < m; ++i) {
    std::vector<int> row;
    for (int j = 0; j < n; ++j) {
      if (coin(rng)) row.push_back(j);
    }
    if (row.empty()) row.push_back(col(rng));
    a.rows.push_back(row);
  }
  return a;
}

}  // namespace

TEST(Bnb, C25CoveringOptimumIsThree) {
  CoverMatrix a;
  a.num_cols = 5;
  for (int i = 0; i < 5; ++i) a.rows.push_back({i, (i + 1) % 5});
  const std::vector<double> w(5, 1.0);
  const auto res = branch_and_bound(covering_ip(a, w), iota_vec(5));
  ASSERT_TRUE(res.proved_optimal);
  EXPECT_NEAR(res.objective, 3.0, 1e-9);
  EXPECT_NEAR(res.root_bound, 2.5, 1e-9);
  EXPECT_DOUBLE_EQ(oracle::enumerate_scp(a, w).optimum, 3.0);
}

TEST(Bnb, ConsecutiveOnesSolvesAtRoot) {
  CoverMatrix a;
  a.num_cols = 4;
  a.rows = {{0, 1}, {1, 2}, {2, 3}, {3}};
  const auto res = branch_and_bound(covering_ip(a, {1, 2, 1, 3}), iota_vec(4));
  EXPECT_TRUE(res.proved_optimal);
  EXPECT_EQ(res.nodes, 1);
  EXPECT_NEAR(res.objective, oracle::enumerate_scp(a, {1, 2, 1, 3}).optimum, 1e-9);
}

TEST(Bnb, BestKWithIdentity) {
  // max sum y  s.t.  x_j - y_j >= 0, sum x <= 2, binary.
  LpModel model(ObjSense::Maximize);
  for (int j = 0; j < 3; ++j) model.add_variable(0.0, 1.0, 0.0);
  for (int j = 0; j < 3; ++j) model.add_variable(0.0, 1.0, 1.0);
  for (int j = 0; j < 3; ++j) {
    model.add_constraint({{j, 1.0}, {3 + j, -1.0}}, RowSense::Geq, 0.0);
  }
  model.add_constraint({{0, 1.0}, {1, 1.0}, {2, 1.0}}, RowSense::Leq, 2.0);
  const auto res = branch_and_bound(model, iota_vec(6));
  ASSERT_TRUE(res.proved_optimal);
  EXPECT_NEAR(res.objective, 2.0, 1e-9);
}

TEST(Bnb, MatchesEnumerationOnRandomCovers) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> weight(0.5, 3.0);
  for (int trial = 0; trial < 120; ++trial) {
    const int n = 4 + trial % 17;  // up to 20 binaries
    const CoverMatrix a = random_cover(rng, 3 + trial % 25, n);
    std::vector<double> w(n);
    for (double& v : w) v = weight(rng);
    BnbConfig cfg;
    cfg.node_rc_fixing = trial % 2 == 1;
    const auto res = branch_and_bound(covering_ip(a, w), iota_vec(n), cfg);
    const auto truth = oracle::enumerate_scp(a, w);
    ASSERT_TRUE(res.proved_optimal) << trial;
    EXPECT_NEAR(res.objective, truth.optimum, 1e-7 * (1 + truth.optimum)) << trial;
    EXPECT_GE(res.best_bound, res.objective - 1e-7);
  }
}

TEST(Bnb, InfeasibleAndHint) {
  LpModel model;
  model.add_variable(0.0, 1.0, 1.0);
  model.add_variable(0.0, 1.0, 1.0);
  model.add_constraint({{0, 1.0}, {1, 1.0}}, RowSense::Geq, 1.5);
  model.add_constraint({{0, 1.0}, {1, 1.0}}, RowSense::Leq, 1.5);
  const auto res = branch_and_bound(model, iota_vec(2));
  EXPECT_EQ(res.status, BnbStatus::Infeasible);
  EXPECT_FALSE(res.has_incumbent());

  CoverMatrix a;
  a.num_cols = 3;
  a.rows = {{0, 1}, {1, 2}};
  const std::vector<double> hint{1.0, 0.0, 1.0};
  const auto hinted = branch_and_bound(covering_ip(a, {1, 1, 1}), iota_vec(3), {}, &hint);
  EXPECT_NEAR(hinted.objective, 1.0, 1e-9);
  const std::vector<double> bad{0.0, 0.0, 0.0};
  const auto ignored = branch_and_bound(covering_ip(a, {1, 1, 1}), iota_vec(3), {}, &bad);
  EXPECT_NEAR(ignored.objective, 1.0, 1e-9);
}

TEST(Bnb, NodeLimitReportsBound) {
  std::mt19937_64 rng(4);
  const CoverMatrix a = random_cover(rng, 40, 20);
  std::vector<double> w(20, 1.0);
  BnbConfig cfg;
  cfg.node_limit = 1;
  const auto res = branch_and_bound(covering_ip(a, w), iota_vec(20), cfg);
  if (!res.proved_optimal) {
    EXPECT_EQ(res.status, BnbStatus::LimitReached);
    EXPECT_LE(res.best_bound, oracle::enumerate_scp(a, w).optimum + 1e-9);
  }
}

TEST(Bnb, CallbackCutsAndReplacement) {
  // Minimize -x0 - x1 over binaries; the callback forbids x0 + x1 = 2 lazily.
  LpModel model;
  model.add_variable(0.0, 1.0, -1.0);
  model.add_variable(0.0, 1.0, -1.0);
  int calls = 0;
  NodeCallback cb = [&](const LpSolution& sol, bool integral) {
    ++calls;
    NodeAction act;
    if (integral && sol.primal[0] + sol.primal[1] > 1.5) {
      act.cuts.push_back({{{0, 1.0}, {1, 1.0}}, RowSense::Leq, 1.0});
    }
    return act;
  };
  const auto res = branch_and_bound(model, iota_vec(2), {}, nullptr, cb);
  ASSERT_TRUE(res.proved_optimal);
  EXPECT_NEAR(res.objective, -1.0, 1e-9);
  EXPECT_EQ(res.cuts_added, 1);
  EXPECT_GE(calls, 2);
}

TEST(Bnb, RejectsNonBinaryIntegerBounds) {
  LpModel model;
  model.add_variable(0.0, 2.0, 1.0);
  EXPECT_THROW(branch_and_bound(model, iota_vec(1)), ModelError);
}
