#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "slscover/cp2.hpp"

namespace slscover::cp2 {

using lp::RowSense;
using lp::Term;
using presolve::FixRule;

RestrictedDual build_dual_restricted(const Cp2Model& model, const ConeApprox& approx,
                                     DualForm form) {
  const int n = model.num_sites();
  const int np = model.num_pairs();
  const bool augmented = form == DualForm::Augmented;

  RestrictedDual out;
  out.form = form;
  DualLayout& L = out.layout;
  L.directions = approx.directions;
  L.corners = approx.vertices();
  lp::LpModel& m = out.lp;
  m.set_sense(lp::ObjSense::Maximize);

  for (int p = 0; p < np; ++p) L.lambda.push_back(m.add_variable(0.0, lp::kInf, 0.0));
  for (int i = 0; i < model.num_edges(); ++i) L.mu.push_back(m.add_variable(0.0, lp::kInf, 1.0));
  for (int p = 0; p < np; ++p) {
    for (int k = 0; k < 2; ++k) {
      const double cost = model.radius(p) + model.pairs[p].big_m[k];
      const Point2 a = model.anchor(p, k);
      L.slack.push_back(m.add_variable(0.0, lp::kInf, -cost));
      L.t_first.push_back(m.num_cols());
      for (const Point2& v : L.corners) m.add_variable(0.0, lp::kInf, geom::dot(v, a) - cost);
    }
  }
  L.theta_hi.assign(n, {-1, -1});
  L.theta_lo.assign(n, {-1, -1});
  L.phi.assign(n, -1);
  L.delta.assign(n, -1);
  for (int j = 0; j < n; ++j) {
    if (model.pairs_of_site[j].empty()) continue;
    const geom::Box& b = model.inst.boxes[j];
    L.theta_hi[j] = {m.add_variable(0.0, lp::kInf, -b.hi.x), m.add_variable(0.0, lp::kInf, -b.hi.y)};
    L.theta_lo[j] = {m.add_variable(0.0, lp::kInf, b.lo.x), m.add_variable(0.0, lp::kInf, b.lo.y)};
  }
  if (augmented) {
    for (int j = 0; j < n; ++j) {
      L.phi[j] = m.add_variable(0.0, lp::kInf, 0.0);
      L.delta[j] = m.add_variable(0.0, lp::kInf, -1.0);
    }
  }

  for (int j = 0; j < n; ++j) {
    if (!augmented && model.pairs_of_site[j].empty()) continue;
    std::vector<Term> terms;
    for (int p : model.pairs_of_site[j]) terms.push_back({L.lambda[p], 1.0});
    if (augmented) {
      terms.push_back({L.phi[j], 1.0});
      terms.push_back({L.delta[j], -1.0});
    }
    m.add_constraint(std::move(terms), RowSense::Eq, model.inst.weights[j]);
  }
  for (int p = 0; p < np; ++p) {
    std::vector<Term> terms{{L.lambda[p], 1.0}, {L.mu[model.pairs[p].edge], -1.0}};
    for (int k = 0; k < 2; ++k) {
      const double bm = model.pairs[p].big_m[k];
      if (bm <= 0.0) continue;
      const int e = 2 * p + k;
      terms.push_back({L.slack[e], bm});
      for (int l = 0; l < L.directions; ++l) terms.push_back({L.t_first[e] + l, bm});
    }
    L.pair_row.push_back(m.add_constraint(std::move(terms), RowSense::Geq, 0.0));
  }
  for (int j = 0; j < n; ++j) {
    if (model.pairs_of_site[j].empty()) continue;
    for (int d = 0; d < 2; ++d) {
      std::vector<Term> terms{{L.theta_hi[j][d], 1.0}, {L.theta_lo[j][d], -1.0}};
      for (int p : model.pairs_of_site[j]) {
        for (int k = 0; k < 2; ++k) {
          const int e = 2 * p + k;
          for (int l = 0; l < L.directions; ++l) {
            const double c = d == 0 ? L.corners[l].x : L.corners[l].y;
            if (std::abs(c) > 1e-15) terms.push_back({L.t_first[e] + l, -c});
          }
        }
      }
      m.add_constraint(std::move(terms), RowSense::Eq, 0.0);
    }
  }
  return out;
}

double DualPoint::beta(const Cp2Model& model, int p) const {
  double b = lambda[p] - mu[model.pairs[p].edge];
  for (int k = 0; k < 2; ++k) b += nu[2 * p + k] * model.pairs[p].big_m[k];
  return b;
}

DualPoint extract_dual_point(const Cp2Model& model, const RestrictedDual& dual,
                             std::span<const double> primal) {
  const DualLayout& L = dual.layout;
  DualPoint pt;
  for (int c : L.lambda) pt.lambda.push_back(primal[c]);
  for (int c : L.mu) pt.mu.push_back(primal[c]);
  for (int e = 0; e < 2 * model.num_pairs(); ++e) {
    double nu = primal[L.slack[e]];
    Point2 g{0.0, 0.0};
    for (int l = 0; l < L.directions; ++l) {
      const double t = primal[L.t_first[e] + l];
      nu += t;
      g = g + t * L.corners[l];
    }
    pt.nu.push_back(nu);
    pt.gamma.push_back(g);
  }
  pt.phi.assign(model.num_sites(), 0.0);
  pt.delta.assign(model.num_sites(), 0.0);
  for (int j = 0; j < model.num_sites(); ++j) {
    if (L.phi[j] >= 0) pt.phi[j] = primal[L.phi[j]];
    if (L.delta[j] >= 0) pt.delta[j] = primal[L.delta[j]];
  }
  return pt;
}

LagrangianBound lagrangian_bound(const Cp2Model& model, const DualPoint& point) {
  const int n = model.num_sites();
  const int np = model.num_pairs();
  std::vector<double> lambda(np), mu(model.num_edges()), nu(2 * np);
  for (int p = 0; p < np; ++p) lambda[p] = std::max(point.lambda[p], 0.0);
  for (int i = 0; i < model.num_edges(); ++i) mu[i] = std::max(point.mu[i], 0.0);
  for (int e = 0; e < 2 * np; ++e) {
    nu[e] = std::max({point.nu[e], 0.0, geom::norm(point.gamma[e])});
  }

  LagrangianBound out;
  out.site_cost.assign(model.inst.weights.begin(), model.inst.weights.end());
  out.pair_cost.assign(np, 0.0);
  std::vector<Point2> site_dir(n, Point2{0.0, 0.0});
  double value = 0.0;
  for (double v : mu) value += v;
  for (int p = 0; p < np; ++p) {
    const PairVar& pv = model.pairs[p];
    out.site_cost[pv.site] -= lambda[p];
    double c = lambda[p] - mu[pv.edge];
    for (int k = 0; k < 2; ++k) {
      const int e = 2 * p + k;
      c += nu[e] * pv.big_m[k];
      value += geom::dot(point.gamma[e], model.anchor(p, k)) -
               nu[e] * (model.radius(p) + pv.big_m[k]);
      site_dir[pv.site] = site_dir[pv.site] - point.gamma[e];
    }
    out.pair_cost[p] = c;
    value += std::min(c, 0.0);
  }
  for (int j = 0; j < n; ++j) {
    value += std::min(out.site_cost[j], 0.0);
    const geom::Box& b = model.inst.boxes[j];
    const Point2 c = site_dir[j];
    value += c.x * (c.x >= 0.0 ? b.lo.x : b.hi.x) + c.y * (c.y >= 0.0 ? b.lo.y : b.hi.y);
  }
  out.value = value;
  return out;
}

bool dual_fixing_test(double xi, double ub, double multiplier) {
  return multiplier > ub - xi + presolve::kFixEps;
}

int Cp2FixResult::fixed_sites(int value) const {
  int c = 0;
  for (const auto& e : ledger.entries()) c += e.column < num_sites && e.value == value;
  return c;
}

int Cp2FixResult::fixed_pairs() const {
  int c = 0;
  for (const auto& e : ledger.entries()) c += e.column >= 3 * num_sites;
  return c;
}

Cp2FixResult strong_fix_cp2(const Cp2Model& model, double ub, const Cp2FixConfig& config) {
  if (config.approx.mode != ApproxMode::Inner) {
    throw std::invalid_argument("strong_fix_cp2: fixing needs an inner approximation");
  }
  if (!std::isfinite(ub)) throw std::invalid_argument("strong_fix_cp2: ub must be finite");
  const auto t0 = std::chrono::steady_clock::now();
  const int n = model.num_sites();
  Cp2FixResult res;
  res.num_sites = n;

  auto record = [&](int var, int value, FixRule rule, double bound, int source) {
    if (!(bound > ub + presolve::kFixEps)) return false;
    return res.ledger.record({var, value, rule, bound, ub, source});
  };
  auto propagate = [&](int j, double bound, int source) {
    for (int p : model.pairs_of_site[j]) {
      record(model.y_var(p), 0, FixRule::Propagation, bound, source);
    }
  };
  auto fix_site = [&](int j, int value, double bound, int source) {
    if (record(model.z_var(j), value, value == 0 ? FixRule::SF0 : FixRule::SF1, bound, source) &&
        value == 0) {
      propagate(j, bound, source);
    }
  };
  auto harvest = [&](const LagrangianBound& lb, int source) {
    for (int p = 0; p < model.num_pairs(); ++p) {
      record(model.y_var(p), 0, FixRule::RC0, lb.if_pair_one(p), source);
    }
    for (int j = 0; j < n; ++j) {
      fix_site(j, 0, lb.if_site_one(j), source);
      fix_site(j, 1, lb.if_site_zero(j), source);
    }
  };

  if (config.baseline) {
    const RestrictedDual d2 = build_dual_restricted(model, config.approx, DualForm::Plain);
    const lp::LpSolution sol = lp::solve_lp(d2.lp);
    res.lp_iterations += sol.iterations;
    if (!sol.optimal()) {
      throw InternalError(std::string("strong_fix_cp2: restricted dual ended with status ") +
                          std::string(lp::to_string(sol.status)));
    }
    const DualPoint pt = extract_dual_point(model, d2, sol.primal);
    const LagrangianBound lb = lagrangian_bound(model, pt);
    res.baseline_value = sol.objective;
    res.baseline_bound = lb.value;
    // The classical test compares beta with ub - xi at the LP optimum xi; the
    // Lagrangian value only guards it against rounding.
    const double xi = std::min(sol.objective, lb.value);
    for (int p = 0; p < model.num_pairs(); ++p) {
      const double beta = std::max(pt.beta(model, p), 0.0);
      if (dual_fixing_test(xi, ub, beta)) {
        record(model.y_var(p), 0, FixRule::RC0, xi + beta, -1);
      }
    }
    res.baseline_fixed = static_cast<int>(res.ledger.size());
  }

  if (!config.strong && !config.pair_subproblems) {
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
  }

  const RestrictedDual d2p = build_dual_restricted(model, config.approx, DualForm::Augmented);
  const DualLayout& L = d2p.layout;
  lp::SimplexSolver solver(d2p.lp);
  const lp::LpSolution root = solver.solve();
  res.lp_iterations += root.iterations;
  if (!root.optimal()) {
    throw InternalError(std::string("strong_fix_cp2: augmented dual ended with status ") +
                        std::string(lp::to_string(root.status)));
  }
  const auto snap = solver.snapshot();
  const std::vector<double> base(d2p.lp.objective().begin(), d2p.lp.objective().end());

  auto run = [&](const std::vector<double>& obj) {
    solver.restore(*snap);
    lp::LpSolution sol = solver.resolve_with_objective(obj);
    ++res.subproblems;
    res.lp_iterations += sol.iterations;
    return sol;
  };

  if (config.strong) {
    for (int j = 0; j < n; ++j) {
      for (int target = 0; target < 2; ++target) {
        if (res.ledger.is_fixed(model.z_var(j))) break;
        std::vector<double> obj = base;
        obj[target == 0 ? L.phi[j] : L.delta[j]] += 1.0;
        const lp::LpSolution sol = run(obj);
        if (sol.status == lp::LpStatus::Unbounded) {
          ++res.unbounded;
          fix_site(j, target, lp::kInf, j);
          continue;
        }
        if (!sol.optimal()) {
          ++res.failures;
          continue;
        }
        const LagrangianBound lb =
            lagrangian_bound(model, extract_dual_point(model, d2p, sol.primal));
        fix_site(j, target, target == 0 ? lb.if_site_one(j) : lb.if_site_zero(j), j);
        if (config.opportunistic) harvest(lb, j);
      }
    }
  }

  if (config.pair_subproblems) {
    for (int p = 0; p < model.num_pairs(); ++p) {
      const int yv = model.y_var(p);
      if (res.ledger.is_fixed(yv)) continue;
      const PairVar& pv = model.pairs[p];
      std::vector<double> obj = base;
      obj[L.lambda[p]] += 1.0;
      obj[L.mu[pv.edge]] -= 1.0;
      for (int k = 0; k < 2; ++k) {
        const int e = 2 * p + k;
        obj[L.slack[e]] += pv.big_m[k];
        for (int l = 0; l < L.directions; ++l) obj[L.t_first[e] + l] += pv.big_m[k];
      }
      const lp::LpSolution sol = run(obj);
      double bound = lp::kInf;
      if (sol.status == lp::LpStatus::Unbounded) {
        ++res.unbounded;
      } else if (sol.optimal()) {
        bound = lagrangian_bound(model, extract_dual_point(model, d2p, sol.primal)).if_pair_one(p);
      } else {
        ++res.failures;
        continue;
      }
      if (record(yv, 0, FixRule::SF0, bound, n + p) && config.lift_pairs_to_sites) {
        fix_site(pv.site, 0, bound, n + p);
      }
    }
  }

  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

}  // namespace slscover::cp2
