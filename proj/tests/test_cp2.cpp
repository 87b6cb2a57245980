#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "families.hpp"
#include "oracles.hpp"
#include "slscover/cp2.hpp"
#include "slscover/scp.hpp"

using namespace slscover;
using namespace slscover::cp2;

namespace {

Cp2Instance one_edge_instance(double weight) {
  Cp2Instance inst;
  inst.ell = 0.05;
  inst.edges.push_back({{0.4, 0.5}, {0.6, 0.5}, 0, 0});
  inst.boxes.push_back(geom::Box::centered({0.5, 0.5}, 0.05));
  inst.radii.push_back(0.15);
  inst.weights.push_back(weight);
  inst.site_points.push_back({0.5, 0.5});
  Cp2Pair pair{0, {}, {}};
  for (int k = 0; k < 2; ++k) {
    const Point2 a = k == 0 ? inst.edges[0].a1 : inst.edges[0].a2;
    pair.dist_max[k] = geom::box_vertex_max_distance(inst.boxes[0], a);
    pair.big_m[k] = std::max(pair.dist_max[k] - 0.15, 0.0);
  }
  inst.candidates.push_back({pair});
  return inst;
}

double scp_optimum(const Cp1Instance& base) {
  return scp::solve_scp(to_scp(base)).solution.objective;
}

bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * (1.0 + std::abs(b));
}

}  // namespace

TEST(Cp2Model, CountsVariablesAndClampsBigM) {
  for (const auto& t : families::tiny_cp2(10)) {
    const Cp2Model model = build_cp2_model(t.inst);
    int pairs = 0;
    for (const auto& c : t.inst.candidates) pairs += static_cast<int>(c.size());
    EXPECT_EQ(model.num_vars(), t.inst.num_sites() * 3 + pairs);
    EXPECT_EQ(model.lp.num_cols(), model.num_vars());
    EXPECT_EQ(model.lp.num_rows(), pairs + t.inst.num_edges());
    for (const PairVar& p : model.pairs) {
      EXPECT_GE(p.big_m[0], 0.0);
      EXPECT_GE(p.big_m[1], 0.0);
    }
  }
}

TEST(Cp2Model, EmptyCandidateListIsInfeasible) {
  Cp2Instance inst = one_edge_instance(1.0);
  inst.candidates[0].clear();
  EXPECT_THROW(build_cp2_model(inst), InfeasibleInstance);
}

TEST(Cp2Solve, SingleEdgeSingleSite) {
  const Cp2Model model = build_cp2_model(one_edge_instance(2.0));
  const Cp2Solution sol = solve_cp2(model);
  EXPECT_TRUE(sol.proved_optimal);
  EXPECT_DOUBLE_EQ(sol.objective, 2.0);
  ASSERT_EQ(sol.sites, std::vector<int>{0});
  EXPECT_LE(max_violation(model.inst, sol), kConicFeasTol);
}

TEST(Cp2Solve, TinyInstancesMatchEnumeration) {
  for (const auto& t : families::tiny_cp2(100)) {
    const Cp2Model model = build_cp2_model(t.inst);
    const Cp2Solution sol = solve_cp2(model);
    const auto brute = oracle::enumerate_cp2(t.inst);
    ASSERT_TRUE(brute.feasible) << "seed " << t.seed;
    EXPECT_TRUE(sol.proved_optimal) << "seed " << t.seed;
    EXPECT_TRUE(close_rel(sol.objective, brute.optimum, 1e-4))
        << "seed " << t.seed << ": " << sol.objective << " vs " << brute.optimum;
    EXPECT_LE(max_violation(t.inst, sol), kConicFeasTol) << "seed " << t.seed;
  }
}

TEST(Cp2Solve, ZeroSideBoxesReproduceSetCovering) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Cp1Instance base = generate_repaired(families::matched_params(8, 0.0), seed);
    const Cp2Model model = build_cp2_model(to_cp2(base, 0.0));
    const Cp2Solution sol = solve_cp2(model);
    const double ref = scp_optimum(base);
    EXPECT_TRUE(sol.proved_optimal);
    EXPECT_LE(std::abs(sol.objective - ref), 1e-6 * (1.0 + std::abs(ref))) << "seed " << seed;
  }
}

TEST(Cp2Solve, LargerBoxesNeverCostMore) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const slscover::GeneratorParams gp{3 + static_cast<int>(seed % 3), 3, 0.15, 0.199, 0.0};
    const Cp1Instance base = generate_repaired(gp, seed);
    double prev = scp_optimum(base);
    for (double ell : {0.02, 0.05}) {
      const Cp2Instance inst = to_cp2(base, ell);
      if (inst.num_edges() > 8) break;
      const double v = solve_cp2(build_cp2_model(inst)).objective;
      EXPECT_LE(v, prev + 1e-7 * (1.0 + prev)) << "seed " << seed << " ell " << ell;
      prev = v;
    }
  }
}

TEST(Cp2Solve, RespectsFixingsAndWarmStart) {
  const auto tiny = families::tiny_cp2(1);
  const Cp2Model model = build_cp2_model(tiny[0].inst);
  const auto cover = scp::solve_scp(to_scp(tiny[0].base)).solution;
  Cp2SolveConfig cfg;
  cfg.warm_start = initial_ub_from_scp(cover.columns, tiny[0].inst);
  const Cp2Solution sol = solve_cp2(model, cfg);
  EXPECT_LE(sol.objective, cfg.warm_start->objective + 1e-12);

  Cp2SolveConfig bad;
  bad.warm_start = cfg.warm_start;
  bad.warm_start->assignments.pop_back();
  EXPECT_THROW(solve_cp2(model, bad), std::invalid_argument);
}

TEST(Cp2InitialUb, EqualsCoverCostAndStaysFeasibleForLargerBoxes) {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const Cp1Instance base = generate_repaired(families::matched_params(10, 0.0), seed);
    const auto cover = scp::solve_scp(to_scp(base)).solution;
    for (double ell : {0.0, 0.05, 0.1}) {
      const Cp2Instance inst = to_cp2(base, ell);
      const Cp2Solution ub = initial_ub_from_scp(cover.columns, inst);
      EXPECT_NEAR(ub.objective, cover.objective, 1e-12);
      EXPECT_LE(max_violation(inst, ub), kConicFeasTol);
      for (int j = 0; j < inst.num_sites(); ++j) {
        EXPECT_NEAR(geom::distance(ub.centers[j], inst.site_points[j]), 0.0, 1e-12);
      }
    }
    const Cp2Instance flat = to_cp2(base, 0.0);
    const Cp2Solution ub = initial_ub_from_scp(cover.columns, flat);
    EXPECT_NEAR(solve_cp2(build_cp2_model(flat)).objective, ub.objective,
                1e-6 * (1.0 + ub.objective));
  }
}

TEST(Cp2Solution, ViolationDetectsBrokenSolutions) {
  const Cp2Instance inst = one_edge_instance(1.0);
  Cp2Solution sol;
  sol.sites = {0};
  sol.centers = {{0.5, 0.5}};
  sol.assignments = {{0, 0}};
  EXPECT_LT(max_violation(inst, sol), 0.0);
  Cp2Solution off = sol;
  off.centers[0] = {0.6, 0.5};
  EXPECT_EQ(max_violation(inst, off), lp::kInf);  // outside the box
  Cp2Solution unchosen = sol;
  unchosen.sites.clear();
  EXPECT_EQ(max_violation(inst, unchosen), lp::kInf);
  Cp2Solution unassigned = sol;
  unassigned.assignments.clear();
  EXPECT_EQ(max_violation(inst, unassigned), lp::kInf);
}

TEST(LocateCenter, FindsIntersectionOrReportsNone) {
  const geom::Box box = geom::Box::centered({0.5, 0.5}, 0.1);
  const std::vector<Point2> anchors{{0.3, 0.5}, {0.7, 0.5}};
  auto c = locate_center(box, anchors, 0.21, {0.45, 0.45});
  ASSERT_TRUE(c.has_value());
  EXPECT_TRUE(box.contains(*c, 1e-12));
  for (const Point2& a : anchors) EXPECT_LE(geom::distance(*c, a), 0.21 + 1e-10);
  EXPECT_FALSE(locate_center(box, anchors, 0.19, {0.5, 0.5}).has_value());
}

TEST(ConeApprox, PolygonsNestAroundTheDisk) {
  for (int k : {3, 4, 8, 16, 33}) {
    const ConeApprox inner{k, ApproxMode::Inner};
    const ConeApprox outer{k, ApproxMode::Outer};
    const auto normals = inner.normals();
    for (const Point2& v : inner.vertices()) {
      EXPECT_NEAR(geom::norm(v), 1.0, 1e-12);
      for (const Point2& g : normals) EXPECT_LE(geom::dot(g, v), inner.halfspace_rhs() + 1e-12);
    }
    for (const Point2& v : outer.vertices()) {
      EXPECT_GE(geom::norm(v), 1.0 - 1e-12);
      for (const Point2& g : normals) EXPECT_LE(geom::dot(g, v), 1.0 + 1e-12);
    }
  }
  EXPECT_THROW(ConeApprox{2}.normals(), std::invalid_argument);
}

TEST(ConeApprox, FourCornersGiveTheScaledSquare) {
  const ConeApprox sq{4, ApproxMode::Inner};
  EXPECT_NEAR(sq.halfspace_rhs(), 1.0 / std::sqrt(2.0), 1e-15);
  for (const Point2& v : sq.vertices()) {
    EXPECT_NEAR(std::abs(v.x), 1.0 / std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(std::abs(v.y), 1.0 / std::sqrt(2.0), 1e-12);
  }
  for (const auto& t : families::tiny_cp2(10)) {
    const Cp2Model model = build_cp2_model(t.inst);
    const RestrictedDual dual = build_dual_restricted(model, sq);
    const lp::LpSolution sol = lp::solve_lp(dual.lp);
    ASSERT_TRUE(sol.optimal());
    const DualPoint pt = extract_dual_point(model, dual, sol.primal);
    for (std::size_t e = 0; e < pt.nu.size(); ++e) {
      EXPECT_LE(std::abs(pt.gamma[e].x), pt.nu[e] / std::sqrt(2.0) + 1e-9);
      EXPECT_LE(std::abs(pt.gamma[e].y), pt.nu[e] / std::sqrt(2.0) + 1e-9);
      EXPECT_LE(geom::norm(pt.gamma[e]), pt.nu[e] + 1e-9);
    }
  }
}

TEST(OaCut, CutsAreValidForEveryConicPoint) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (const auto& t : families::tiny_cp2(15)) {
    const Cp2Model model = build_cp2_model(t.inst);
    for (int p = 0; p < model.num_pairs(); ++p) {
      const int j = model.pairs[p].site;
      const geom::Box& box = t.inst.boxes[j];
      for (int k = 0; k < 2; ++k) {
        const Point2 a = model.anchor(p, k);
        for (int trial = 0; trial < 20; ++trial) {
          const Point2 xhat{box.lo.x + unit(rng) * (box.hi.x - box.lo.x),
                            box.lo.y + unit(rng) * (box.hi.y - box.lo.y)};
          const Point2 d = xhat - a;
          const Point2 g = (1.0 / geom::norm(d)) * d;
          const lp::Constraint cut = model.oa_cut(p, k, g);
          for (int s = 0; s < 50; ++s) {
            std::vector<double> point(model.num_vars(), 0.0);
            const Point2 x{box.lo.x + unit(rng) * (box.hi.x - box.lo.x),
                           box.lo.y + unit(rng) * (box.hi.y - box.lo.y)};
            const double slack = geom::distance(x, a) - model.radius(p);
            const double m = model.pairs[p].big_m[k];
            // Largest y that keeps the conic row satisfied at x.
            double y = slack <= 0.0 ? 1.0 : (m > 0.0 ? 1.0 - slack / m : 0.0);
            y = std::clamp(y * unit(rng), 0.0, 1.0);
            point[model.x_var(j, 0)] = x.x;
            point[model.x_var(j, 1)] = x.y;
            point[model.y_var(p)] = y;
            if (model.conic_residual(point, p, k) > 0.0) continue;
            double act = 0.0;
            for (const lp::Term& term : cut.terms) act += term.coef * point[term.col];
            EXPECT_LE(act, cut.rhs + 1e-12);
            EXPECT_LE(geom::dot(g, x - a), geom::distance(x, a) + 1e-15);
          }
        }
      }
    }
  }
}

TEST(RestrictedDual, WeakDualityChain) {
  for (const auto& t : families::tiny_cp2(40)) {
    const Cp2Model model = build_cp2_model(t.inst);
    const RelaxationResult relax = solve_oa_relaxation(model);
    ASSERT_TRUE(relax.status == lp::LpStatus::Optimal) << "seed " << t.seed;
    const double opt = solve_cp2(model).objective;
    const double ub = scp_optimum(t.base);
    for (DualForm form : {DualForm::Plain, DualForm::Augmented}) {
      const RestrictedDual dual = build_dual_restricted(model, {}, form);
      const lp::LpSolution sol = lp::solve_lp(dual.lp);
      ASSERT_TRUE(sol.optimal());
      const LagrangianBound lb =
          lagrangian_bound(model, extract_dual_point(model, dual, sol.primal));
      EXPECT_LE(sol.objective, lb.value + 1e-9);
      EXPECT_LE(sol.objective, relax.value + 1e-7) << "seed " << t.seed;
      EXPECT_LE(lb.value, opt + 1e-9) << "seed " << t.seed;
    }
    EXPECT_LE(relax.value, opt + 1e-9);
    EXPECT_LE(opt, ub + 1e-9);
  }
}

TEST(RestrictedDual, LinearRowsHoldAtTheOptimum) {
  for (const auto& t : families::tiny_cp2(10)) {
    const Cp2Model model = build_cp2_model(t.inst);
    const RestrictedDual dual = build_dual_restricted(model);
    const lp::LpSolution sol = lp::solve_lp(dual.lp);
    ASSERT_TRUE(sol.optimal());
    const DualPoint pt = extract_dual_point(model, dual, sol.primal);
    for (int j = 0; j < model.num_sites(); ++j) {
      if (model.pairs_of_site[j].empty()) continue;
      double s = 0.0;
      Point2 g{0.0, 0.0};
      for (int p : model.pairs_of_site[j]) {
        s += pt.lambda[p];
        g = g + pt.gamma[2 * p] + pt.gamma[2 * p + 1];
      }
      EXPECT_NEAR(s, t.inst.weights[j], 1e-9);
      const auto& L = dual.layout;
      EXPECT_NEAR(sol.primal[L.theta_hi[j][0]] - sol.primal[L.theta_lo[j][0]], g.x, 1e-9);
      EXPECT_NEAR(sol.primal[L.theta_hi[j][1]] - sol.primal[L.theta_lo[j][1]], g.y, 1e-9);
    }
    for (int p = 0; p < model.num_pairs(); ++p) EXPECT_GE(pt.beta(model, p), -1e-9);
  }
}

TEST(RestrictedDual, ValueGrowsWithDirections) {
  for (const auto& t : families::tiny_cp2(15)) {
    const Cp2Model model = build_cp2_model(t.inst);
    double prev = -lp::kInf;
    for (int k : {4, 8, 16, 32, 64}) {
      const lp::LpSolution sol = lp::solve_lp(build_dual_restricted(model, {k}).lp);
      ASSERT_TRUE(sol.optimal());
      EXPECT_GE(sol.objective, prev - 1e-9) << "seed " << t.seed << " K " << k;
      prev = sol.objective;
      const lp::LpSolution outer =
          lp::solve_lp(build_dual_restricted(model, {k, ApproxMode::Outer}).lp);
      // The circumscribed polygon admits ||gamma|| > nu and may be unbounded.
      if (outer.optimal()) {
        EXPECT_GE(outer.objective, sol.objective - 1e-9);
      } else {
        EXPECT_EQ(outer.status, lp::LpStatus::Unbounded);
      }
    }
  }
}

TEST(Cp2Fixing, RuleArithmetic) {
  EXPECT_TRUE(dual_fixing_test(10.0, 12.0, 2.5));
  EXPECT_FALSE(dual_fixing_test(10.0, 12.0, 2.0));
  EXPECT_FALSE(dual_fixing_test(10.0, 12.0, 1.5));
}

TEST(Cp2Fixing, LagrangianBoundIsValidForAnyMultipliers) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (const auto& t : families::tiny_cp2(20)) {
    const Cp2Model model = build_cp2_model(t.inst);
    const double opt = solve_cp2(model).objective;
    for (int trial = 0; trial < 20; ++trial) {
      DualPoint pt;
      for (int p = 0; p < model.num_pairs(); ++p) pt.lambda.push_back(0.05 * unit(rng));
      for (int i = 0; i < model.num_edges(); ++i) pt.mu.push_back(0.05 * unit(rng));
      for (int e = 0; e < 2 * model.num_pairs(); ++e) {
        pt.nu.push_back(0.1 * unit(rng));
        pt.gamma.push_back({0.2 * unit(rng) - 0.1, 0.2 * unit(rng) - 0.1});
      }
      EXPECT_LE(lagrangian_bound(model, pt).value, opt + 1e-12);
    }
  }
}

TEST(Cp2Fixing, NeverChangesTheOptimum) {
  int with_fixes = 0;
  for (const auto& t : families::tiny_cp2(100)) {
    const Cp2Model model = build_cp2_model(t.inst);
    const double ub = scp_optimum(t.base);
    const Cp2FixResult fx = strong_fix_cp2(model, ub);
    const auto brute = oracle::enumerate_cp2(t.inst);
    for (int j = 0; j < model.num_sites(); ++j) {
      const auto v = fx.ledger.value(model.z_var(j));
      if (!v) continue;
      for (std::uint32_t s : brute.optimal_supports) {
        EXPECT_EQ(static_cast<int>(s >> j & 1u), *v) << "seed " << t.seed << " site " << j;
      }
    }
    const double plain = solve_cp2(model).objective;
    Cp2SolveConfig cfg;
    cfg.fixings = fx.ledger;
    const double fixed = solve_cp2(model, cfg).objective;
    EXPECT_EQ(fixed, plain) << "seed " << t.seed;
    with_fixes += !fx.ledger.empty();
  }
  EXPECT_GT(with_fixes, 50);
}

TEST(Cp2Fixing, PairSubproblemsAreSound) {
  for (const auto& t : families::tiny_cp2(40)) {
    const Cp2Model model = build_cp2_model(t.inst);
    const double ub = scp_optimum(t.base);
    Cp2FixConfig cfg;
    cfg.pair_subproblems = true;
    const Cp2FixResult fx = strong_fix_cp2(model, ub, cfg);
    Cp2SolveConfig solve_cfg;
    solve_cfg.fixings = fx.ledger;
    EXPECT_EQ(solve_cp2(model, solve_cfg).objective, solve_cp2(model).objective)
        << "seed " << t.seed;
  }
}

TEST(Cp2Fixing, StrongPassContainsBaseline) {
  for (const auto& t : families::tiny_cp2(30)) {
    const Cp2Model model = build_cp2_model(t.inst);
    const double ub = scp_optimum(t.base);
    Cp2FixConfig base_only;
    base_only.strong = false;
    const Cp2FixResult b = strong_fix_cp2(model, ub, base_only);
    const Cp2FixResult s = strong_fix_cp2(model, ub);
    EXPECT_EQ(b.baseline_fixed, s.baseline_fixed);
    for (const auto& e : b.ledger.entries()) {
      EXPECT_EQ(s.ledger.value(e.column), e.value);
    }
    // z_j = 0 implies every pair of j is fixed.
    for (int j : s.ledger.fixed_to(0)) {
      if (j >= model.num_sites()) continue;
      for (int p : model.pairs_of_site[j]) EXPECT_EQ(s.ledger.value(model.y_var(p)), 0);
    }
  }
}

TEST(Cp2Fixing, RejectsOuterApproximation) {
  const Cp2Model model = build_cp2_model(one_edge_instance(1.0));
  Cp2FixConfig cfg;
  cfg.approx.mode = ApproxMode::Outer;
  EXPECT_THROW(strong_fix_cp2(model, 1.0, cfg), std::invalid_argument);
}
