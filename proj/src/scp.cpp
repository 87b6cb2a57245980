#include "slscover/scp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numeric>

#include <spdlog/spdlog.h>

namespace slscover::scp {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void require_coverable(const CoverMatrix& a) {
  for (int i = 0; i < a.num_rows(); ++i) {
    if (a.rows[i].empty()) throw CoverError("row " + std::to_string(i) + " has no covering column");
  }
}

double total_weight(std::span<const int> cols, std::span<const double> w) {
  double s = 0.0;
  for (int j : cols) s += w[j];
  return s;
}

CoverMatrix circulant(int size, int ones) {
  CoverMatrix a;
  a.num_cols = size;
  for (int i = 0; i < size; ++i) {
    std::vector<int> row;
    for (int k = 0; k < ones; ++k) row.push_back((i + k) % size);
    std::sort(row.begin(), row.end());
    a.rows.push_back(std::move(row));
  }
  return a;
}

}  // namespace

CoverSolution greedy_cover(const CoverMatrix& a, std::span<const double> w) {
  require_coverable(a);
  const auto supports = a.column_supports();
  std::vector<int> uncovered_in(a.num_cols);
  for (int j = 0; j < a.num_cols; ++j) uncovered_in[j] = static_cast<int>(supports[j].size());
  std::vector<std::uint8_t> covered(a.num_rows(), 0);
  int remaining = a.num_rows();

  CoverSolution sol;
  while (remaining > 0) {
    int best = -1;
    double best_ratio = 0.0;
    for (int j = 0; j < a.num_cols; ++j) {
      if (uncovered_in[j] == 0) continue;
      const double ratio = w[j] / uncovered_in[j];
      if (best < 0 || ratio < best_ratio) {
        best = j;
        best_ratio = ratio;
      }
    }
    sol.columns.push_back(best);
    for (int i : supports[best]) {
      if (covered[i]) continue;
      covered[i] = 1;
      --remaining;
      for (int j : a.rows[i]) --uncovered_in[j];
    }
  }
  std::sort(sol.columns.begin(), sol.columns.end());
  sol.objective = total_weight(sol.columns, w);
  return sol;
}

std::string_view to_string(PresolveLevel level) {
  switch (level) {
    case PresolveLevel::None: return "none";
    case PresolveLevel::ReducedCost: return "rc";
    case PresolveLevel::Strong: return "strong";
  }
  return "unknown";
}

std::optional<PresolveLevel> parse_presolve_level(std::string_view text) {
  if (text == "none") return PresolveLevel::None;
  if (text == "rc") return PresolveLevel::ReducedCost;
  if (text == "strong") return PresolveLevel::Strong;
  return std::nullopt;
}

lp::LpModel covering_model(const CoverMatrix& a, std::span<const double> w) {
  lp::LpModel model;
  for (int j = 0; j < a.num_cols; ++j) model.add_variable(0.0, 1.0, w[j]);
  for (const auto& row : a.rows) {
    std::vector<lp::Term> terms;
    terms.reserve(row.size());
    for (int j : row) terms.push_back({j, 1.0});
    model.add_constraint(std::move(terms), lp::RowSense::Geq, 1.0);
  }
  return model;
}

PipelineResult solve_scp(const ScpInstance& inst, const PipelineConfig& config) {
  return solve_scp(inst.matrix, inst.weights, config);
}

PipelineResult solve_scp(const CoverMatrix& a, std::span<const double> w,
                         const PipelineConfig& config) {
  const auto t0 = Clock::now();
  require_coverable(a);
  PipelineResult res;
  const CoverSolution greedy = greedy_cover(a, w);
  res.greedy_objective = greedy.objective;
  const double ub = greedy.objective;
  auto& report = res.report;
  report.upper_bound = ub;
  report.original = {a.num_rows(), a.num_cols, 0.0};

  presolve::ReducedProblem current = presolve::ReducedProblem::identity(a, w);
  if (config.presolve == PresolveLevel::None) {
    report.rows_eliminated = report.rc_fixed = report.strong_fixed = report.original;
  } else {
    auto t = Clock::now();
    current = presolve::eliminate_rows(current);
    report.rows_eliminated = {current.matrix.num_rows(), current.matrix.num_cols,
                              seconds_since(t)};

    t = Clock::now();
    const auto relax = presolve::solve_dual_relaxation(current.matrix, current.weights);
    if (relax.status == lp::LpStatus::Optimal) {
      const auto rc =
          presolve::reduced_cost_fix(current.matrix, current.weights, relax.u, ub);
      res.ledger.merge(rc.remapped(current.col_map));
      report.n0_rc = rc.count(0);
      if (!rc.empty()) current = presolve::apply_fixings(current, rc);
    } else {
      spdlog::warn("solve_scp: dual relaxation ended with status {}", lp::to_string(relax.status));
    }
    report.rc_fixed = {current.matrix.num_rows(), current.matrix.num_cols, seconds_since(t)};

    t = Clock::now();
    if (config.presolve == PresolveLevel::Strong && current.matrix.num_rows() > 0) {
      const double local_ub = std::min(
          ub - current.offset, greedy_cover(current.matrix, current.weights).objective);
      presolve::StrongFixConfig sf_cfg = config.strong;
      if (!sf_cfg.site_points.empty()) {
        std::vector<geom::Point2> pts;
        for (int j : current.col_map) pts.push_back(sf_cfg.site_points[j]);
        sf_cfg.site_points = std::move(pts);
      }
      const auto sf = presolve::strong_fix(current.matrix, current.weights, local_ub, sf_cfg);
      res.ledger.merge(sf.ledger.remapped(current.col_map));
      report.n0_sf = sf.ledger.count(0);
      report.n1_sf = sf.ledger.count(1);
      if (!sf.ledger.empty()) current = presolve::apply_fixings(current, sf.ledger);
    }
    report.strong_fixed = {current.matrix.num_rows(), current.matrix.num_cols, seconds_since(t)};
  }
  report.offset = current.offset;
  res.solution.stats.presolve_seconds = seconds_since(t0);

  // (d) branch-and-bound on the residual problem.
  const auto tb = Clock::now();
  std::vector<int> chosen = current.forced_one;
  bool proved = true;
  if (current.matrix.num_rows() > 0) {
    const CoverSolution local_greedy = greedy_cover(current.matrix, current.weights);
    std::vector<double> hint(current.matrix.num_cols, 0.0);
    for (int j : local_greedy.columns) hint[j] = 1.0;
    std::vector<int> ints(current.matrix.num_cols);
    std::iota(ints.begin(), ints.end(), 0);
    lp::BnbConfig bcfg = config.bnb;
    if (bcfg.time_limit > 0.0) {
      bcfg.time_limit = std::max(1e-3, bcfg.time_limit - seconds_since(t0));
    }
    const auto bnb = lp::branch_and_bound(covering_model(current.matrix, current.weights), ints,
                                          bcfg, &hint);
    res.solution.stats.nodes = bnb.nodes;
    res.solution.stats.lp_solves = bnb.lp_solves;
    res.solution.stats.lp_iterations = bnb.lp_iterations;
    proved = bnb.proved_optimal;
    if (!bnb.has_incumbent()) {
      throw CoverError("branch-and-bound returned no cover for the reduced problem");
    }
    for (int j = 0; j < current.matrix.num_cols; ++j) {
      if (bnb.incumbent[j] > 0.5) chosen.push_back(current.col_map[j]);
    }
  }
  res.solution.stats.bnb_seconds = seconds_since(tb);

  std::sort(chosen.begin(), chosen.end());
  if (!a.covers_all(std::span<const int>(chosen))) {
    throw CoverError("reconstructed cover misses an original row");
  }
  double objective = total_weight(chosen, w);
  if (!proved && greedy.objective < objective) {
    chosen = greedy.columns;
    objective = greedy.objective;
  }
  res.solution.columns = std::move(chosen);
  res.solution.objective = objective;
  res.solution.proved_optimal = proved;
  res.solution.stats.total_seconds = seconds_since(t0);
  return res;
}

bool is_consecutive_ones(const CoverMatrix& a, std::span<const int> row_order) {
  const int m = a.num_rows();
  std::vector<int> position(m);
  if (row_order.empty()) {
    std::iota(position.begin(), position.end(), 0);
  } else {
    if (static_cast<int>(row_order.size()) != m) {
      throw std::invalid_argument("row order is not a permutation of the rows");
    }
    std::vector<std::uint8_t> seen(m, 0);
    for (int p = 0; p < m; ++p) {
      const int r = row_order[p];
      if (r < 0 || r >= m || seen[r]) {
        throw std::invalid_argument("row order is not a permutation of the rows");
      }
      seen[r] = 1;
      position[r] = p;
    }
  }
  for (const auto& support : a.column_supports()) {
    if (support.empty()) continue;
    int lo = m, hi = -1;
    for (int i : support) {
      lo = std::min(lo, position[i]);
      hi = std::max(hi, position[i]);
    }
    if (hi - lo + 1 != static_cast<int>(support.size())) return false;
  }
  return true;
}

std::optional<bool> is_balanced(const CoverMatrix& a, int size_cap) {
  const int m = a.num_rows();
  const int n = a.num_cols;
  if (std::min(m, n) > size_cap) return std::nullopt;

  // Bipartite incidence graph: rows are 0..m-1, columns m..m+n-1. A forbidden
  // submatrix exists iff there is a chordless cycle of length 2k, k odd >= 3.
  const int nv = m + n;
  std::vector<std::vector<int>> adj(nv);
  std::vector<std::vector<std::uint8_t>> is_adj(nv, std::vector<std::uint8_t>(nv, 0));
  for (int i = 0; i < m; ++i) {
    for (int j : a.rows[i]) {
      adj[i].push_back(m + j);
      adj[m + j].push_back(i);
      is_adj[i][m + j] = is_adj[m + j][i] = 1;
    }
  }
  const int max_len = 2 * std::min(m, n);
  std::vector<int> path;
  std::vector<int> touch(nv, 0);  // path vertices adjacent to each vertex
  std::vector<std::uint8_t> on_path(nv, 0);
  bool found = false;

  auto push = [&](int v) {
    path.push_back(v);
    on_path[v] = 1;
    for (int x : adj[v]) ++touch[x];
  };
  auto pop = [&] {
    const int v = path.back();
    path.pop_back();
    on_path[v] = 0;
    for (int x : adj[v]) --touch[x];
  };

  // Extends an induced path whose smallest vertex is path.front().
  std::function<void()> extend = [&] {
    const int start = path.front();
    const int last = path.back();
    for (int x : adj[last]) {
      if (found) return;
      if (x <= start || on_path[x]) continue;
      const bool closes = path.size() >= 2 && is_adj[x][start];
      if (closes) {
        const int len = static_cast<int>(path.size()) + 1;
        if (touch[x] == 2 && len >= 6 && (len / 2) % 2 == 1) found = true;
        continue;
      }
      if (touch[x] != 1) continue;
      if (static_cast<int>(path.size()) + 1 >= max_len) continue;
      push(x);
      extend();
      pop();
    }
  };
  for (int s = 0; s < m && !found; ++s) {
    push(s);
    extend();
    pop();
  }
  return !found;
}

std::optional<std::vector<double>> fractional_vertex_witness(const CoverMatrix& a) {
  lp::LpModel model;
  for (int j = 0; j < a.num_cols; ++j) model.add_variable(0.0, lp::kInf, 1.0);
  for (const auto& row : a.rows) {
    std::vector<lp::Term> terms;
    for (int j : row) terms.push_back({j, 1.0});
    model.add_constraint(std::move(terms), lp::RowSense::Geq, 1.0);
  }
  const auto sol = lp::solve_lp(model);
  if (!sol.optimal()) return std::nullopt;
  const bool fractional = std::any_of(sol.primal.begin(), sol.primal.end(), [](double v) {
    return std::abs(v - std::round(v)) > 1e-7;
  });
  if (!fractional) return std::nullopt;
  return sol.primal;
}

MatrixDiagnosis diagnose(const CoverMatrix& a, int size_cap) {
  MatrixDiagnosis d;
  d.balanced = is_balanced(a, size_cap);
  d.fractional_vertex = fractional_vertex_witness(a);
  d.consecutive_ones = is_consecutive_ones(a);
  return d;
}

CoverSolution solve_unit_grid_case(std::span<const geom::Point2> vertices,
                                   std::span<const std::pair<int, int>> edges,
                                   const std::vector<bool>& allowed,
                                   std::span<const double> radii, std::span<const double> w) {
  const auto t0 = Clock::now();
  const int nv = static_cast<int>(vertices.size());
  if (static_cast<int>(allowed.size()) != nv || static_cast<int>(radii.size()) != nv ||
      static_cast<int>(w.size()) != nv) {
    throw PreconditionError("per-vertex data must match the vertex count");
  }
  std::vector<std::pair<long, long>> grid(nv);
  for (int v = 0; v < nv; ++v) {
    const double gx = std::round(vertices[v].x);
    const double gy = std::round(vertices[v].y);
    if (std::abs(vertices[v].x - gx) > geom::kEpsGeom ||
        std::abs(vertices[v].y - gy) > geom::kEpsGeom) {
      throw PreconditionError("vertex " + std::to_string(v) + " is not on the integer grid");
    }
    grid[v] = {static_cast<long>(gx), static_cast<long>(gy)};
  }
  for (const auto& [u, v] : edges) {
    if (u < 0 || v < 0 || u >= nv || v >= nv) throw PreconditionError("edge endpoint out of range");
    const long dx = std::labs(grid[u].first - grid[v].first);
    const long dy = std::labs(grid[u].second - grid[v].second);
    if (dx + dy != 1) throw PreconditionError("edge is not a unit axis-aligned segment");
  }
  const double limit = std::sqrt(1.25);
  for (int v = 0; v < nv; ++v) {
    if (!allowed[v]) continue;
    if (!(radii[v] >= 1.0 && radii[v] < limit)) {
      throw PreconditionError("radius of vertex " + std::to_string(v) +
                              " is outside [1, sqrt(5/4))");
    }
  }

  // Vertex cover over allowed vertices; each edge is covered only by the
  // balls at its endpoints.
  lp::LpModel model;
  for (int v = 0; v < nv; ++v) model.add_variable(0.0, allowed[v] ? 1.0 : 0.0, w[v]);
  for (const auto& [u, v] : edges) {
    if (!allowed[u] && !allowed[v]) {
      throw CoverError("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                       ") has no allowed endpoint");
    }
    model.add_constraint({{u, 1.0}, {v, 1.0}}, lp::RowSense::Geq, 1.0);
  }
  const auto sol = lp::solve_lp(model);
  if (!sol.optimal()) throw CoverError("vertex cover LP failed");

  CoverSolution out;
  out.stats.lp_solves = 1;
  out.stats.lp_iterations = sol.iterations;
  std::vector<double> values = sol.primal;
  const bool integral = std::all_of(values.begin(), values.end(), [](double x) {
    return std::abs(x - std::round(x)) <= 1e-7;
  });
  if (!integral) {
    spdlog::warn("unit grid LP vertex is fractional; falling back to branch-and-bound");
    std::vector<int> ints(nv);
    std::iota(ints.begin(), ints.end(), 0);
    const auto bnb = lp::branch_and_bound(model, ints);
    values = bnb.incumbent;
    out.stats.nodes = bnb.nodes;
  }
  for (int v = 0; v < nv; ++v) {
    if (values[v] > 0.5) out.columns.push_back(v);
  }
  out.objective = total_weight(out.columns, w);
  out.proved_optimal = true;
  out.stats.total_seconds = seconds_since(t0);
  return out;
}

CoverMatrix c25_matrix() { return circulant(5, 2); }
CoverMatrix c38_matrix() { return circulant(8, 3); }

}  // namespace slscover::scp
