#include "slscover/cp2.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <string>

#include <spdlog/spdlog.h>

namespace slscover::cp2 {

using lp::Constraint;
using lp::RowSense;
using lp::Term;

void ConeApprox::validate() const {
  if (directions < 3) throw std::invalid_argument("ConeApprox: need at least 3 directions");
}

std::vector<Point2> ConeApprox::normals() const {
  validate();
  std::vector<Point2> out;
  for (int l = 0; l < directions; ++l) {
    const double a = 2.0 * std::numbers::pi * l / directions;
    out.push_back({std::cos(a), std::sin(a)});
  }
  return out;
}

double ConeApprox::halfspace_rhs() const {
  validate();
  return mode == ApproxMode::Inner ? std::cos(std::numbers::pi / directions) : 1.0;
}

std::vector<Point2> ConeApprox::vertices() const {
  validate();
  const double scale = halfspace_rhs() / std::cos(std::numbers::pi / directions);
  std::vector<Point2> out;
  for (int l = 0; l < directions; ++l) {
    const double a = (2.0 * l + 1.0) * std::numbers::pi / directions;
    out.push_back({scale * std::cos(a), scale * std::sin(a)});
  }
  return out;
}

std::vector<int> Cp2Model::y_vars() const {
  std::vector<int> out(num_pairs());
  for (int p = 0; p < num_pairs(); ++p) out[p] = y_var(p);
  return out;
}

Point2 Cp2Model::anchor(int p, int end) const {
  const Cp2Edge& e = inst.edges[pairs[p].edge];
  return end == 0 ? e.a1 : e.a2;
}

bool Cp2Model::vacuous(int p, int end) const {
  return pairs[p].dist_max[end] <= radius(p);
}

double Cp2Model::conic_residual(std::span<const double> point, int p, int end) const {
  const int j = pairs[p].site;
  const Point2 x{point[x_var(j, 0)], point[x_var(j, 1)]};
  const double y = point[y_var(p)];
  return geom::distance(x, anchor(p, end)) - radius(p) - pairs[p].big_m[end] * (1.0 - y);
}

double Cp2Model::max_conic_residual(std::span<const double> point) const {
  double worst = -lp::kInf;
  for (int p = 0; p < num_pairs(); ++p) {
    for (int k = 0; k < 2; ++k) worst = std::max(worst, conic_residual(point, p, k));
  }
  return worst;
}

Constraint Cp2Model::oa_cut(int p, int end, Point2 g) const {
  const int j = pairs[p].site;
  const double m = pairs[p].big_m[end];
  const Point2 a = anchor(p, end);
  Constraint row;
  row.terms = {{x_var(j, 0), g.x}, {x_var(j, 1), g.y}};
  if (m > 0.0) row.terms.push_back({y_var(p), m});
  row.sense = RowSense::Leq;
  row.rhs = radius(p) + m + geom::dot(g, a);
  return row;
}

Cp2Model build_cp2_model(const Cp2Instance& inst) {
  const int n = inst.num_sites();
  if (static_cast<int>(inst.radii.size()) != n || static_cast<int>(inst.weights.size()) != n) {
    throw std::invalid_argument("build_cp2_model: site arrays differ in length");
  }
  if (static_cast<int>(inst.candidates.size()) != inst.num_edges()) {
    throw std::invalid_argument("build_cp2_model: one candidate list per edge required");
  }
  Cp2Model model;
  model.inst = inst;
  model.pairs_of_edge.resize(inst.num_edges());
  model.pairs_of_site.resize(n);
  for (int i = 0; i < inst.num_edges(); ++i) {
    if (inst.candidates[i].empty()) {
      throw InfeasibleInstance("edge " + std::to_string(i) + " has no candidate site");
    }
    for (const Cp2Pair& c : inst.candidates[i]) {
      if (c.site < 0 || c.site >= n) throw std::invalid_argument("candidate site out of range");
      PairVar pv{i, c.site, c.big_m, c.dist_max};
      for (double& m : pv.big_m) m = std::max(m, 0.0);
      const int p = model.num_pairs();
      model.pairs.push_back(pv);
      model.pairs_of_edge[i].push_back(p);
      model.pairs_of_site[c.site].push_back(p);
    }
  }

  lp::LpModel& m = model.lp;
  for (int j = 0; j < n; ++j) m.add_variable(0.0, 1.0, inst.weights[j]);
  for (int j = 0; j < n; ++j) {
    const geom::Box& b = inst.boxes[j];
    m.add_variable(b.lo.x, b.hi.x);
    m.add_variable(b.lo.y, b.hi.y);
  }
  for (int p = 0; p < model.num_pairs(); ++p) m.add_variable(0.0, 1.0);
  for (int p = 0; p < model.num_pairs(); ++p) {
    m.add_constraint({{model.z_var(model.pairs[p].site), 1.0}, {model.y_var(p), -1.0}},
                     RowSense::Geq, 0.0);
  }
  for (int i = 0; i < inst.num_edges(); ++i) {
    std::vector<Term> terms;
    for (int p : model.pairs_of_edge[i]) terms.push_back({model.y_var(p), 1.0});
    m.add_constraint(std::move(terms), RowSense::Geq, 1.0);
  }
  return model;
}

double max_violation(const Cp2Instance& inst, const Cp2Solution& sol) {
  if (static_cast<int>(sol.centers.size()) != inst.num_sites()) return lp::kInf;
  std::vector<bool> chosen(inst.num_sites(), false);
  for (int j : sol.sites) {
    if (j < 0 || j >= inst.num_sites()) return lp::kInf;
    chosen[j] = true;
  }
  std::vector<bool> covered(inst.num_edges(), false);
  double worst = -lp::kInf;
  for (const Assignment& a : sol.assignments) {
    if (a.edge < 0 || a.edge >= inst.num_edges() || a.site < 0 ||
        a.site >= inst.num_sites() || !chosen[a.site]) {
      return lp::kInf;
    }
    const Point2 c = sol.centers[a.site];
    if (!inst.boxes[a.site].contains(c, 1e-9)) return lp::kInf;
    const Cp2Edge& e = inst.edges[a.edge];
    const double r = inst.radii[a.site];
    worst = std::max({worst, geom::distance(c, e.a1) - r, geom::distance(c, e.a2) - r});
    covered[a.edge] = true;
  }
  if (std::find(covered.begin(), covered.end(), false) != covered.end()) return lp::kInf;
  return worst;
}

std::vector<double> to_point(const Cp2Model& model, const Cp2Solution& sol) {
  std::vector<double> x(model.num_vars(), 0.0);
  for (int j : sol.sites) x[model.z_var(j)] = 1.0;
  for (int j = 0; j < model.num_sites(); ++j) {
    x[model.x_var(j, 0)] = sol.centers.at(j).x;
    x[model.x_var(j, 1)] = sol.centers.at(j).y;
  }
  for (const Assignment& a : sol.assignments) {
    const auto& ps = model.pairs_of_edge.at(a.edge);
    auto it = std::find_if(ps.begin(), ps.end(),
                           [&](int p) { return model.pairs[p].site == a.site; });
    if (it == ps.end()) {
      throw InternalError("assignment of edge " + std::to_string(a.edge) + " to site " +
                          std::to_string(a.site) + " has no model variable");
    }
    x[model.y_var(*it)] = 1.0;
  }
  return x;
}

Cp2Solution from_point(const Cp2Model& model, std::span<const double> point) {
  Cp2Solution sol;
  std::vector<bool> chosen(model.num_sites(), false);
  for (int j = 0; j < model.num_sites(); ++j) {
    sol.centers.push_back({point[model.x_var(j, 0)], point[model.x_var(j, 1)]});
  }
  for (int i = 0; i < model.num_edges(); ++i) {
    for (int p : model.pairs_of_edge[i]) {
      if (point[model.y_var(p)] > 0.5) {
        sol.assignments.push_back({i, model.pairs[p].site});
        chosen[model.pairs[p].site] = true;
        break;
      }
    }
  }
  for (int j = 0; j < model.num_sites(); ++j) {
    if (chosen[j]) {
      sol.sites.push_back(j);
      sol.objective += model.inst.weights[j];
    }
  }
  return sol;
}

std::optional<Point2> locate_center(const geom::Box& box, std::span<const Point2> anchors,
                                    double radius, Point2 start, double tol) {
  Point2 x = box.project(start);
  auto excess = [&](Point2 c) {
    double worst = -lp::kInf;
    for (const Point2& a : anchors) worst = std::max(worst, geom::distance(c, a) - radius);
    return worst;
  };
  // Project onto slightly shrunken disks so the limit point lands inside.
  const double target = std::max(radius - 0.5 * tol, 0.0);
  for (int sweep = 0; sweep < 5000; ++sweep) {
    if (excess(x) <= tol) return x;
    for (const Point2& a : anchors) {
      const Point2 d = x - a;
      const double len = geom::norm(d);
      if (len > target) x = a + (target / len) * d;
    }
    x = box.project(x);
  }
  if (excess(x) <= tol) return x;
  return std::nullopt;
}

namespace {

struct ConicRow {
  int pair = 0;
  int end = 0;
};

std::vector<ConicRow> active_rows(const Cp2Model& model) {
  std::vector<ConicRow> rows;
  for (int p = 0; p < model.num_pairs(); ++p) {
    for (int k = 0; k < 2; ++k) {
      if (!model.vacuous(p, k)) rows.push_back({p, k});
    }
  }
  return rows;
}

std::vector<Constraint> separate(const Cp2Model& model, const std::vector<ConicRow>& rows,
                                 std::span<const double> point, double tol) {
  std::vector<Constraint> cuts;
  for (const ConicRow& r : rows) {
    if (model.conic_residual(point, r.pair, r.end) <= tol) continue;
    const int j = model.pairs[r.pair].site;
    const Point2 x{point[model.x_var(j, 0)], point[model.x_var(j, 1)]};
    const Point2 d = x - model.anchor(r.pair, r.end);
    const double len = geom::norm(d);
    // A violated row has ||x - a|| > r > 0, so the direction is defined.
    if (len <= 1e-12) continue;
    cuts.push_back(model.oa_cut(r.pair, r.end, (1.0 / len) * d));
  }
  return cuts;
}

/// Moves each used center into the intersection of its assigned balls.
std::optional<std::vector<double>> repair_centers(const Cp2Model& model,
                                                  std::span<const double> point) {
  std::vector<double> out(point.begin(), point.end());
  for (int p = 0; p < model.num_pairs(); ++p) {
    out[model.y_var(p)] = std::round(out[model.y_var(p)]);
  }
  for (int j = 0; j < model.num_sites(); ++j) {
    std::vector<Point2> anchors;
    bool used = false;
    for (int p : model.pairs_of_site[j]) {
      if (out[model.y_var(p)] < 0.5) continue;
      used = true;
      for (int k = 0; k < 2; ++k) anchors.push_back(model.anchor(p, k));
    }
    out[model.z_var(j)] = used ? 1.0 : std::round(out[model.z_var(j)]);
    if (anchors.empty()) continue;
    const Point2 start{out[model.x_var(j, 0)], out[model.x_var(j, 1)]};
    auto c = locate_center(model.inst.boxes[j], anchors, model.inst.radii[j], start);
    if (!c) return std::nullopt;
    out[model.x_var(j, 0)] = c->x;
    out[model.x_var(j, 1)] = c->y;
  }
  return out;
}

void apply_fixings(const Cp2Model& model, lp::LpModel& lpm,
                   const presolve::FixingLedger& fixings) {
  for (const presolve::FixEntry& e : fixings.entries()) {
    const int v = e.column;
    const bool is_z = v >= 0 && v < model.num_sites();
    const bool is_y = v >= model.y_var(0) && v < model.num_vars();
    if (!is_z && !is_y) {
      throw std::invalid_argument("fixing on a variable that is neither z nor y: " +
                                  std::to_string(v));
    }
    lpm.set_bounds(v, e.value, e.value);
  }
}

}  // namespace

Cp2Solution solve_cp2(const Cp2Model& model, const Cp2SolveConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  if (config.initial_directions != 0 && config.initial_directions < 3) {
    throw std::invalid_argument("solve_cp2: initial_directions must be 0 or >= 3");
  }
  lp::LpModel lpm = model.lp;
  apply_fixings(model, lpm, config.fixings);

  const std::vector<ConicRow> rows = active_rows(model);
  Cp2Stats stats;
  if (config.initial_directions > 0 &&
      static_cast<long>(rows.size()) * config.initial_directions <= config.eager_row_cap) {
    const auto dirs = ConeApprox{config.initial_directions, ApproxMode::Outer}.normals();
    for (const ConicRow& r : rows) {
      for (const Point2& g : dirs) lpm.add_constraint(model.oa_cut(r.pair, r.end, g));
    }
    stats.initial_cuts = static_cast<int>(rows.size() * dirs.size());
  }

  std::vector<double> hint;
  if (config.warm_start) {
    if (max_violation(model.inst, *config.warm_start) > config.conic_tol) {
      throw std::invalid_argument("solve_cp2: warm start is not feasible");
    }
    hint = to_point(model, *config.warm_start);
  }

  auto callback = [&](const lp::LpSolution& sol, bool integral) {
    lp::NodeAction action;
    const double tol = integral ? config.conic_tol : config.fractional_cut_tol;
    action.cuts = separate(model, rows, sol.primal, tol);
    if (integral && !action.cuts.empty()) {
      if (auto fixed = repair_centers(model, sol.primal)) action.replacement = std::move(*fixed);
    }
    return action;
  };

  const std::vector<int> ints = model.y_vars();
  const lp::BnbResult res =
      lp::branch_and_bound(lpm, ints, config.bnb, hint.empty() ? nullptr : &hint, callback);

  Cp2Solution out;
  if (res.has_incumbent()) {
    std::vector<double> point = res.incumbent;
    for (int j = 0; j < model.num_sites(); ++j) {
      if (model.inst.weights[j] > 0.0 &&
          std::abs(point[model.z_var(j)] - std::round(point[model.z_var(j)])) > 1e-6) {
        throw InternalError("solve_cp2: fractional site variable at the incumbent");
      }
    }
    if (auto polished = repair_centers(model, point)) point = std::move(*polished);
    out = from_point(model, point);
    const double viol = max_violation(model.inst, out);
    if (viol > config.conic_tol) {
      throw InternalError("solve_cp2: incumbent violates a ball by " + std::to_string(viol));
    }
  } else if (res.status == lp::BnbStatus::Infeasible) {
    throw InfeasibleInstance("solve_cp2: no feasible assignment");
  }
  out.proved_optimal = res.proved_optimal;
  out.best_bound = res.best_bound;
  stats.nodes = res.nodes;
  stats.lp_solves = res.lp_solves;
  stats.lp_iterations = res.lp_iterations;
  stats.cuts = res.cuts_added;
  stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out.stats = stats;
  return out;
}

Cp2Solution initial_ub_from_scp(std::span<const int> cover_columns, const Cp2Instance& inst) {
  std::vector<bool> chosen(inst.num_sites(), false);
  for (int j : cover_columns) {
    if (j < 0 || j >= inst.num_sites()) throw std::invalid_argument("cover column out of range");
    chosen[j] = true;
  }
  Cp2Solution sol;
  for (int j = 0; j < inst.num_sites(); ++j) sol.centers.push_back(inst.boxes[j].center());
  std::vector<bool> used(inst.num_sites(), false);
  for (int i = 0; i < inst.num_edges(); ++i) {
    int pick = -1;
    double best = lp::kInf;
    for (const Cp2Pair& c : inst.candidates[i]) {
      if (!chosen[c.site]) continue;
      const Point2 x = sol.centers[c.site];
      const double ex = std::max(geom::distance(x, inst.edges[i].a1),
                                 geom::distance(x, inst.edges[i].a2)) -
                        inst.radii[c.site];
      if (ex < best) {
        best = ex;
        pick = c.site;
      }
    }
    if (pick < 0) {
      throw InternalError("initial_ub_from_scp: edge " + std::to_string(i) +
                          " has no chosen candidate");
    }
    sol.assignments.push_back({i, pick});
    used[pick] = true;
  }
  for (int j = 0; j < inst.num_sites(); ++j) {
    if (chosen[j]) {
      sol.sites.push_back(j);
      sol.objective += inst.weights[j];
    }
  }
  const double viol = max_violation(inst, sol);
  if (viol > kConicFeasTol) {
    throw InternalError("initial_ub_from_scp: box centers violate a ball by " +
                        std::to_string(viol));
  }
  sol.best_bound = -lp::kInf;
  return sol;
}

RelaxationResult solve_oa_relaxation(const Cp2Model& model, double tol, int max_rounds) {
  const std::vector<ConicRow> rows = active_rows(model);
  lp::SimplexSolver solver(model.lp);
  RelaxationResult out;
  for (int round = 0; round < max_rounds; ++round) {
    lp::LpSolution sol = solver.solve();
    out.status = sol.status;
    out.rounds = round + 1;
    if (!sol.optimal()) return out;
    out.value = sol.objective;
    out.residual = model.max_conic_residual(sol.primal);
    out.point = std::move(sol.primal);
    const auto cuts = separate(model, rows, out.point, tol);
    if (cuts.empty()) return out;
    solver.add_cuts(cuts);
  }
  spdlog::warn("solve_oa_relaxation: residual {} after {} rounds", out.residual, max_rounds);
  out.status = lp::LpStatus::IterationLimit;
  return out;
}

}  // namespace slscover::cp2
