#include "slscover/lp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

namespace slscover::lp {

namespace {

void check_finite(double v, const std::string& what) {
  if (!std::isfinite(v)) throw ModelError(what + " must be finite");
}

std::string fmt_bound(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

}  // namespace

std::string_view to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::NumericalFailure: return "numerical_failure";
    case LpStatus::IterationLimit: return "iteration_limit";
  }
  return "unknown";
}

int LpModel::add_variable(double lb, double ub, double objective) {
  if (std::isnan(lb) || std::isnan(ub) || lb > ub || lb == kInf || ub == -kInf) {
    throw ModelError("variable " + std::to_string(num_cols()) + ": invalid bounds");
  }
  check_finite(objective, "objective coefficient");
  lb_.push_back(lb);
  ub_.push_back(ub);
  obj_.push_back(objective);
  return num_cols() - 1;
}

void LpModel::validate(const Constraint& row) const {
  check_finite(row.rhs, "row " + std::to_string(num_rows()) + " rhs");
  for (std::size_t k = 0; k < row.terms.size(); ++k) {
    const Term& t = row.terms[k];
    if (t.col < 0 || t.col >= num_cols()) {
      throw ModelError("row " + std::to_string(num_rows()) + " term " +
                       std::to_string(k) + ": column out of range");
    }
    if (!std::isfinite(t.coef)) {
      throw ModelError("row " + std::to_string(num_rows()) + " term " +
                       std::to_string(k) + ": coefficient must be finite");
    }
  }
}

int LpModel::add_constraint(Constraint row) {
  validate(row);
  std::sort(row.terms.begin(), row.terms.end(),
            [](const Term& a, const Term& b) { return a.col < b.col; });
  std::vector<Term> merged;
  for (const Term& t : row.terms) {
    if (!merged.empty() && merged.back().col == t.col) {
      merged.back().coef += t.coef;
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [](const Term& t) { return t.coef == 0.0; });
  row.terms = std::move(merged);
  rows_.push_back(std::move(row));
  return num_rows() - 1;
}

void LpModel::set_objective(std::span<const double> objective) {
  if (static_cast<int>(objective.size()) != num_cols()) {
    throw ModelError("objective length does not match column count");
  }
  for (double v : objective) check_finite(v, "objective coefficient");
  obj_.assign(objective.begin(), objective.end());
}

void LpModel::set_objective_coef(int col, double value) {
  check_finite(value, "objective coefficient");
  obj_.at(col) = value;
}

void LpModel::set_bounds(int col, double lb, double ub) {
  if (std::isnan(lb) || std::isnan(ub) || lb > ub || lb == kInf || ub == -kInf) {
    throw ModelError("variable " + std::to_string(col) + ": invalid bounds");
  }
  lb_.at(col) = lb;
  ub_.at(col) = ub;
}

// ---------------------------------------------------------------------------

namespace {

enum class VarState : std::uint8_t { Basic, AtLower, AtUpper, Free, Fixed };

// Internal outcome of one simplex run.
enum class Run { Optimal, Unbounded, Infeasible, Numerical, IterationLimit, LostDual };

}  // namespace

class SimplexSolver::Snapshot {
 public:
  int rows = 0;
  std::vector<double> lb, ub, cost;
  std::vector<VarState> state;
  std::vector<int> head, pos;
  std::vector<double> x;
  Eigen::MatrixXd binv;
  int updates = 0;
  bool has_basis = false;
  std::vector<double> model_obj, model_lb, model_ub;
};

struct SimplexSolver::Impl {
  LpModel model;
  SimplexOptions opt;
  int n = 0;  // structural columns
  int m = 0;  // rows; logical of row i is variable n + i
  std::vector<std::vector<std::pair<int, double>>> cols;
  std::vector<double> lb, ub, cost;  // internal: always minimize
  std::vector<VarState> state;
  std::vector<int> head;  // basic variable of each row
  std::vector<int> pos;   // row of a basic variable, -1 otherwise
  std::vector<double> x;
  Eigen::MatrixXd binv;
  int updates = 0;
  bool has_basis = false;
  long total_iters = 0;
  int refactors = 0;
  long degenerate_run = 0;
  bool bland = false;

  Eigen::VectorXd y;
  Eigen::VectorXd alpha;
  std::vector<double> d;

  Impl(LpModel mdl, SimplexOptions o) : model(std::move(mdl)), opt(o) {
    n = model.num_cols();
    cols.resize(n);
    for (int j = 0; j < n; ++j) {
      lb.push_back(model.lower(j));
      ub.push_back(model.upper(j));
      cost.push_back(internal_cost(model.objective()[j]));
    }
    for (int i = 0; i < model.num_rows(); ++i) append_row(model.row(i));
  }

  double internal_cost(double c) const {
    return model.sense() == ObjSense::Maximize ? -c : c;
  }

  int total() const { return n + m; }

  long iteration_limit() const {
    return opt.iteration_limit > 0 ? opt.iteration_limit
                                   : 100L * (n + m) + 10000;
  }

  template <class F>
  void for_column(int j, F&& f) const {
    if (j < n) {
      for (const auto& [row, coef] : cols[j]) f(row, coef);
    } else {
      f(j - n, -1.0);
    }
  }

  double dot_column(int j, const Eigen::VectorXd& v) const {
    double s = 0.0;
    for_column(j, [&](int row, double coef) { s += coef * v[row]; });
    return s;
  }

  void append_row(const Constraint& row) {
    const int i = m++;
    for (const Term& t : row.terms) cols[t.col].emplace_back(i, t.coef);
    double lo = -kInf;
    double hi = kInf;
    switch (row.sense) {
      case RowSense::Geq: lo = row.rhs; break;
      case RowSense::Leq: hi = row.rhs; break;
      case RowSense::Eq: lo = hi = row.rhs; break;
    }
    lb.push_back(lo);
    ub.push_back(hi);
    cost.push_back(0.0);
    if (has_basis) {
      double activity = 0.0;
      for (const Term& t : row.terms) activity += t.coef * x[t.col];
      state.push_back(VarState::Basic);
      head.push_back(n + i);
      pos.push_back(i);
      x.push_back(activity);
    }
  }

  void place_nonbasic(int j, bool prefer_upper) {
    const bool lo_fin = std::isfinite(lb[j]);
    const bool hi_fin = std::isfinite(ub[j]);
    if (lo_fin && hi_fin && lb[j] == ub[j]) {
      state[j] = VarState::Fixed;
      x[j] = lb[j];
    } else if (hi_fin && (prefer_upper || !lo_fin)) {
      state[j] = VarState::AtUpper;
      x[j] = ub[j];
    } else if (lo_fin) {
      state[j] = VarState::AtLower;
      x[j] = lb[j];
    } else {
      state[j] = VarState::Free;
      x[j] = 0.0;
    }
  }

  void slack_basis() {
    const int t = total();
    state.assign(t, VarState::AtLower);
    x.assign(t, 0.0);
    pos.assign(t, -1);
    head.resize(m);
    for (int j = 0; j < n; ++j) place_nonbasic(j, false);
    for (int i = 0; i < m; ++i) {
      head[i] = n + i;
      pos[n + i] = i;
      state[n + i] = VarState::Basic;
    }
    binv = -Eigen::MatrixXd::Identity(m, m);
    updates = 0;
    has_basis = true;
    bland = false;
    degenerate_run = 0;
  }

  // Rebuilds the inverse from scratch. On a singular basis, falls back to the
  // slack basis, keeping previously basic structurals at their nearest bound.
  bool refactor() {
    ++refactors;
    Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      for_column(head[i], [&](int row, double coef) { basis(row, i) = coef; });
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis);
    if (m > 0 && !(lu.rcond() > 1e-13)) {
      std::vector<double> old = x;
      std::vector<VarState> old_state = state;
      slack_basis();
      for (int j = 0; j < n; ++j) {
        if (old_state[j] == VarState::Basic) {
          const double mid_up = std::isfinite(ub[j]) && std::isfinite(lb[j])
                                    ? old[j] > 0.5 * (lb[j] + ub[j])
                                    : std::isfinite(ub[j]);
          place_nonbasic(j, mid_up);
        } else {
          place_nonbasic(j, old_state[j] == VarState::AtUpper);
        }
      }
      compute_primal();
      return false;
    }
    binv = m > 0 ? Eigen::MatrixXd(lu.inverse()) : Eigen::MatrixXd(0, 0);
    updates = 0;
    return true;
  }

  void compute_primal() {
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
    for (int j = 0; j < total(); ++j) {
      if (state[j] == VarState::Basic || x[j] == 0.0) continue;
      const double v = x[j];
      for_column(j, [&](int row, double coef) { rhs[row] -= coef * v; });
    }
    const Eigen::VectorXd xb = binv * rhs;
    for (int i = 0; i < m; ++i) x[head[i]] = xb[i];
  }

  void compute_duals(const Eigen::VectorXd& cb) { y = binv.transpose() * cb; }

  Eigen::VectorXd basic_costs() const {
    Eigen::VectorXd cb(m);
    for (int i = 0; i < m; ++i) cb[i] = cost[head[i]];
    return cb;
  }

  void ftran(int j) {
    alpha = Eigen::VectorXd::Zero(m);
    for_column(j, [&](int row, double coef) { alpha += coef * binv.col(row); });
  }

  void pivot(int r, int entering) {
    const double piv = alpha[r];
    const Eigen::RowVectorXd pivot_row = binv.row(r) / piv;
    binv.noalias() -= alpha * pivot_row;
    binv.row(r) = pivot_row;
    const int leaving = head[r];
    pos[leaving] = -1;
    head[r] = entering;
    pos[entering] = r;
    state[entering] = VarState::Basic;
    ++updates;
  }

  void settle_leaving(int k, double value) {
    x[k] = value;
    if (lb[k] == ub[k]) {
      state[k] = VarState::Fixed;
    } else if (value == ub[k]) {
      state[k] = VarState::AtUpper;
    } else {
      state[k] = VarState::AtLower;
    }
  }

  double infeasibility(int k) const {
    if (x[k] < lb[k]) return lb[k] - x[k];
    if (x[k] > ub[k]) return x[k] - ub[k];
    return 0.0;
  }

  double max_primal_infeasibility() const {
    double worst = 0.0;
    for (int i = 0; i < m; ++i) worst = std::max(worst, infeasibility(head[i]));
    return worst;
  }

  void note_step(double theta) {
    if (theta <= 1e-12) {
      if (++degenerate_run > 10L * (n + m)) bland = true;
    } else {
      degenerate_run = 0;
      bland = false;
    }
  }

  bool maybe_refactor() {
    if (updates < opt.refactor_interval) return true;
    const bool ok = refactor();
    compute_primal();
    return ok;
  }

  // Primal simplex; in phase one the objective is the sum of infeasibilities
  // and basic variables outside their bounds may only move back to them.
  Run primal(bool phase_one, long& iters) {
    const double ptol = opt.primal_tol;
    const double dtol = opt.dual_tol;
    Eigen::VectorXd cb(m);
    for (;;) {
      if (iters >= iteration_limit()) return Run::IterationLimit;
      maybe_refactor();

      bool any_infeasible = false;
      for (int i = 0; i < m; ++i) {
        const int k = head[i];
        if (phase_one) {
          cb[i] = x[k] < lb[k] - ptol ? -1.0 : (x[k] > ub[k] + ptol ? 1.0 : 0.0);
          any_infeasible |= cb[i] != 0.0;
        } else {
          cb[i] = cost[k];
        }
      }
      if (phase_one && !any_infeasible) return Run::Optimal;
      compute_duals(cb);

      int entering = -1;
      double entering_d = 0.0;
      double best = 0.0;
      for (int j = 0; j < total(); ++j) {
        const VarState s = state[j];
        if (s == VarState::Basic || s == VarState::Fixed) continue;
        const double dj = (phase_one ? 0.0 : cost[j]) - dot_column(j, y);
        const bool eligible = (s == VarState::AtLower && dj < -dtol) ||
                              (s == VarState::AtUpper && dj > dtol) ||
                              (s == VarState::Free && std::abs(dj) > dtol);
        if (!eligible) continue;
        if (bland) {
          entering = j;
          entering_d = dj;
          break;
        }
        if (std::abs(dj) > best) {
          best = std::abs(dj);
          entering = j;
          entering_d = dj;
        }
      }
      if (entering < 0) return phase_one ? Run::Infeasible : Run::Optimal;

      const double dir = entering_d < 0.0 ? 1.0 : -1.0;
      ftran(entering);

      auto limits = [&](int i, double& lo, double& hi) {
        const int k = head[i];
        lo = lb[k];
        hi = ub[k];
        if (phase_one) {
          if (x[k] < lb[k] - ptol) {
            lo = -kInf;
            hi = lb[k];
          } else if (x[k] > ub[k] + ptol) {
            lo = ub[k];
            hi = kInf;
          }
        }
      };

      double harris = kInf;
      for (int i = 0; i < m; ++i) {
        const double rate = -dir * alpha[i];
        if (std::abs(rate) < opt.pivot_tol) continue;
        double lo, hi;
        limits(i, lo, hi);
        const int k = head[i];
        if (rate < 0.0 && std::isfinite(lo)) {
          harris = std::min(harris, (x[k] - lo + ptol) / -rate);
        } else if (rate > 0.0 && std::isfinite(hi)) {
          harris = std::min(harris, (hi - x[k] + ptol) / rate);
        }
      }
      const double own = ub[entering] - lb[entering];

      int leave_row = -1;
      double theta = 0.0;
      double leave_value = 0.0;
      if (std::isfinite(own) && own <= harris) {
        theta = own;
      } else if (!std::isfinite(harris)) {
        return phase_one ? Run::Numerical : Run::Unbounded;
      } else {
        double best_rate = 0.0;
        double best_ratio = kInf;
        for (int i = 0; i < m; ++i) {
          const double rate = -dir * alpha[i];
          if (std::abs(rate) < opt.pivot_tol) continue;
          double lo, hi;
          limits(i, lo, hi);
          const int k = head[i];
          double ratio;
          double bound;
          if (rate < 0.0 && std::isfinite(lo)) {
            ratio = (x[k] - lo) / -rate;
            bound = lo;
          } else if (rate > 0.0 && std::isfinite(hi)) {
            ratio = (hi - x[k]) / rate;
            bound = hi;
          } else {
            continue;
          }
          bool take;
          if (bland) {
            take = leave_row < 0 || ratio < best_ratio - 1e-12 ||
                   (ratio <= best_ratio + 1e-12 && k < head[leave_row]);
          } else {
            take = ratio <= harris && std::abs(rate) > best_rate;
          }
          if (take) {
            leave_row = i;
            best_rate = std::abs(rate);
            best_ratio = ratio;
            leave_value = bound;
          }
        }
        if (leave_row < 0) return Run::Numerical;
        theta = std::max(best_ratio, 0.0);
      }

      ++iters;
      note_step(theta);
      x[entering] += dir * theta;
      for (int i = 0; i < m; ++i) x[head[i]] -= dir * theta * alpha[i];
      if (leave_row < 0) {
        state[entering] = dir > 0 ? VarState::AtUpper : VarState::AtLower;
        x[entering] = dir > 0 ? ub[entering] : lb[entering];
        continue;
      }
      const int leaving = head[leave_row];
      pivot(leave_row, entering);
      settle_leaving(leaving, leave_value);
    }
  }

  // Makes the basis dual feasible by flipping boxed nonbasics; false if some
  // variable with an infinite opposite bound has the wrong reduced cost.
  bool prepare_dual() {
    compute_duals(basic_costs());
    bool flipped = false;
    for (int j = 0; j < total(); ++j) {
      const VarState s = state[j];
      if (s == VarState::Basic || s == VarState::Fixed) continue;
      const double dj = cost[j] - dot_column(j, y);
      if (s == VarState::AtLower && dj < -opt.dual_tol) {
        if (!std::isfinite(ub[j])) return false;
        state[j] = VarState::AtUpper;
        x[j] = ub[j];
        flipped = true;
      } else if (s == VarState::AtUpper && dj > opt.dual_tol) {
        if (!std::isfinite(lb[j])) return false;
        state[j] = VarState::AtLower;
        x[j] = lb[j];
        flipped = true;
      } else if (s == VarState::Free && std::abs(dj) > opt.dual_tol) {
        return false;
      }
    }
    if (flipped) compute_primal();
    return true;
  }

  Run dual(long& iters) {
    const double ptol = opt.primal_tol;
    const double dtol = opt.dual_tol;
    const double lost_tol = 1e-7;
    d.assign(total(), 0.0);
    bool rechecked = false;
    for (;;) {
      if (iters >= iteration_limit()) return Run::IterationLimit;
      maybe_refactor();
      compute_duals(basic_costs());
      for (int j = 0; j < total(); ++j) {
        const VarState s = state[j];
        if (s == VarState::Basic || s == VarState::Fixed) continue;
        double dj = cost[j] - dot_column(j, y);
        if ((s == VarState::AtLower && dj < -lost_tol) ||
            (s == VarState::AtUpper && dj > lost_tol) ||
            (s == VarState::Free && std::abs(dj) > lost_tol)) {
          return Run::LostDual;
        }
        d[j] = dj;
      }

      int r = -1;
      double worst = ptol;
      for (int i = 0; i < m; ++i) {
        const double v = infeasibility(head[i]);
        if (v > worst) {
          worst = v;
          r = i;
        }
      }
      if (r < 0) return Run::Optimal;
      const int leaving = head[r];
      const bool to_lower = x[leaving] < lb[leaving];

      const Eigen::VectorXd rho = binv.row(r).transpose();
      auto candidate = [&](int j, double& arj, double& ratio) {
        const VarState s = state[j];
        if (s == VarState::Basic || s == VarState::Fixed) return false;
        arj = dot_column(j, rho);
        if (std::abs(arj) < opt.pivot_tol) return false;
        const bool can_inc = s == VarState::AtLower || s == VarState::Free;
        const bool can_dec = s == VarState::AtUpper || s == VarState::Free;
        const bool ok = to_lower ? (can_inc && arj < 0.0) || (can_dec && arj > 0.0)
                                 : (can_inc && arj > 0.0) || (can_dec && arj < 0.0);
        if (!ok) return false;
        double slack = d[j];
        if (s == VarState::AtUpper) slack = -slack;
        if (s == VarState::Free) slack = std::abs(slack);
        ratio = std::max(slack, 0.0) / std::abs(arj);
        return true;
      };

      double harris = kInf;
      for (int j = 0; j < total(); ++j) {
        double arj, ratio;
        if (!candidate(j, arj, ratio)) continue;
        harris = std::min(harris, ratio + dtol / std::abs(arj));
      }
      if (!std::isfinite(harris)) {
        if (rechecked) return Run::Infeasible;
        rechecked = true;
        refactor();
        compute_primal();
        continue;
      }
      rechecked = false;
      int entering = -1;
      double best_abs = 0.0;
      double entering_arj = 0.0;
      for (int j = 0; j < total(); ++j) {
        double arj, ratio;
        if (!candidate(j, arj, ratio) || ratio > harris) continue;
        if (std::abs(arj) > best_abs) {
          best_abs = std::abs(arj);
          entering = j;
          entering_arj = arj;
        }
      }
      if (entering < 0) return Run::Numerical;

      ftran(entering);
      if (std::abs(alpha[r] - entering_arj) > 1e-7 * (1.0 + std::abs(entering_arj))) {
        if (updates == 0) return Run::Numerical;
        refactor();
        compute_primal();
        continue;
      }
      const double target = to_lower ? lb[leaving] : ub[leaving];
      const double delta = (x[leaving] - target) / alpha[r];
      ++iters;
      note_step(std::abs(d[entering] / entering_arj));
      x[entering] += delta;
      for (int i = 0; i < m; ++i) x[head[i]] -= alpha[i] * delta;
      pivot(r, entering);
      settle_leaving(leaving, target);
    }
  }

  // Checks B x_B = rhs and B^T y = c_B under the current inverse, which is
  // much cheaper than refactoring just to confirm an optimum.
  bool residuals_small() {
    std::vector<double> act(m, 0.0);
    double scale = 1.0;
    for (int j = 0; j < total(); ++j) {
      if (x[j] == 0.0) continue;
      scale = std::max(scale, std::abs(x[j]));
      for_column(j, [&](int row, double coef) { act[row] += coef * x[j]; });
    }
    for (int i = 0; i < m; ++i) {
      if (std::abs(act[i]) > 1e-9 * scale) return false;
    }
    compute_duals(basic_costs());
    for (int i = 0; i < m; ++i) {
      const int j = head[i];
      if (std::abs(cost[j] - dot_column(j, y)) > 1e-9 * (1.0 + std::abs(cost[j]))) return false;
    }
    return true;
  }

  bool dual_feasible_now() {
    compute_duals(basic_costs());
    for (int j = 0; j < total(); ++j) {
      const VarState s = state[j];
      if (s == VarState::Basic || s == VarState::Fixed) continue;
      const double dj = cost[j] - dot_column(j, y);
      if ((s == VarState::AtLower && dj < -kFeasTol) ||
          (s == VarState::AtUpper && dj > kFeasTol) ||
          (s == VarState::Free && std::abs(dj) > kFeasTol)) {
        return false;
      }
    }
    return true;
  }

  Run run_once(long& iters) {
    if (max_primal_infeasibility() <= opt.primal_tol) return primal(false, iters);
    if (prepare_dual()) {
      const Run r = dual(iters);
      if (r == Run::Optimal || r == Run::Infeasible || r == Run::IterationLimit) {
        return r;
      }
    }
    const Run p1 = primal(true, iters);
    if (p1 != Run::Optimal) return p1;
    return primal(false, iters);
  }

  LpSolution solve() {
    if (!has_basis) slack_basis();
    long iters = 0;
    compute_primal();
    Run outcome = Run::Numerical;
    for (int attempt = 0; attempt < 4; ++attempt) {
      outcome = run_once(iters);
      if (outcome == Run::IterationLimit || outcome == Run::Unbounded) break;
      if (outcome == Run::Infeasible) break;
      if (outcome == Run::Optimal) {
        compute_primal();
        if (residuals_small() && max_primal_infeasibility() <= kFeasTol && dual_feasible_now()) {
          break;
        }
      }
      const bool clean = refactor();
      compute_primal();
      if (outcome != Run::Optimal || !clean) continue;
      if (max_primal_infeasibility() <= kFeasTol && dual_feasible_now()) break;
      outcome = Run::Numerical;
    }
    total_iters += iters;

    LpSolution sol;
    switch (outcome) {
      case Run::Optimal: sol.status = LpStatus::Optimal; break;
      case Run::Unbounded: sol.status = LpStatus::Unbounded; break;
      case Run::Infeasible: sol.status = LpStatus::Infeasible; break;
      case Run::IterationLimit: sol.status = LpStatus::IterationLimit; break;
      default: sol.status = LpStatus::NumericalFailure; break;
    }
    sol.iterations = iters;
    sol.primal.assign(x.begin(), x.begin() + n);
    sol.row_activity.assign(x.begin() + n, x.end());
    compute_duals(basic_costs());
    const double sign = model.sense() == ObjSense::Maximize ? -1.0 : 1.0;
    sol.duals.resize(m);
    for (int i = 0; i < m; ++i) sol.duals[i] = sign * y[i];
    sol.reduced_costs.resize(n);
    for (int j = 0; j < n; ++j) {
      sol.reduced_costs[j] = sign * (cost[j] - dot_column(j, y));
    }
    double obj = 0.0;
    for (int j = 0; j < n; ++j) obj += model.objective()[j] * x[j];
    sol.objective = obj;
    return sol;
  }
};

SimplexSolver::SimplexSolver(LpModel model, SimplexOptions options)
    : impl_(std::make_unique<Impl>(std::move(model), options)) {}
SimplexSolver::SimplexSolver(const SimplexSolver& other)
    : impl_(std::make_unique<Impl>(*other.impl_)) {}
SimplexSolver& SimplexSolver::operator=(const SimplexSolver& other) {
  if (this != &other) impl_ = std::make_unique<Impl>(*other.impl_);
  return *this;
}
SimplexSolver::SimplexSolver(SimplexSolver&&) noexcept = default;
SimplexSolver& SimplexSolver::operator=(SimplexSolver&&) noexcept = default;
SimplexSolver::~SimplexSolver() = default;

LpSolution SimplexSolver::solve() { return impl_->solve(); }

LpSolution SimplexSolver::resolve_with_objective(std::span<const double> objective) {
  impl_->model.set_objective(objective);
  for (int j = 0; j < impl_->n; ++j) {
    impl_->cost[j] = impl_->internal_cost(objective[j]);
  }
  return impl_->solve();
}

void SimplexSolver::add_cuts(std::span<const Constraint> rows) {
  for (const Constraint& row : rows) impl_->model.validate(row);
  Impl& s = *impl_;
  const int old_m = s.m;
  for (const Constraint& row : rows) {
    const int i = s.model.add_constraint(row);
    s.append_row(s.model.row(i));
  }
  if (!s.has_basis || rows.empty()) return;
  // [[B, 0], [r_B, -1]]^-1 = [[B^-1, 0], [r_B B^-1, -1]]
  Eigen::MatrixXd grown = Eigen::MatrixXd::Zero(s.m, s.m);
  grown.topLeftCorner(old_m, old_m) = s.binv;
  for (int i = old_m; i < s.m; ++i) {
    Eigen::RowVectorXd coef = Eigen::RowVectorXd::Zero(old_m);
    for (const Term& t : s.model.row(i).terms) {
      if (s.pos[t.col] >= 0 && s.pos[t.col] < old_m) coef[s.pos[t.col]] = t.coef;
    }
    grown.block(i, 0, 1, old_m) = coef * s.binv;
    grown(i, i) = -1.0;
  }
  s.binv = std::move(grown);
}

void SimplexSolver::set_bounds(int col, double lb, double ub) {
  Impl& s = *impl_;
  s.model.set_bounds(col, lb, ub);
  s.lb[col] = lb;
  s.ub[col] = ub;
  if (s.has_basis && s.state[col] != VarState::Basic) {
    s.place_nonbasic(col, s.state[col] == VarState::AtUpper);
  }
}

std::shared_ptr<const SimplexSolver::Snapshot> SimplexSolver::snapshot() const {
  const Impl& s = *impl_;
  auto snap = std::make_shared<Snapshot>();
  snap->rows = s.m;
  snap->lb = s.lb;
  snap->ub = s.ub;
  snap->cost = s.cost;
  snap->state = s.state;
  snap->head = s.head;
  snap->pos = s.pos;
  snap->x = s.x;
  snap->binv = s.binv;
  snap->updates = s.updates;
  snap->has_basis = s.has_basis;
  snap->model_obj.assign(s.model.objective().begin(), s.model.objective().end());
  snap->model_lb.assign(s.model.lowers().begin(), s.model.lowers().end());
  snap->model_ub.assign(s.model.uppers().begin(), s.model.uppers().end());
  return snap;
}

void SimplexSolver::restore(const Snapshot& snap) {
  Impl& s = *impl_;
  if (snap.rows != s.m) throw ModelError("snapshot row count does not match");
  s.lb = snap.lb;
  s.ub = snap.ub;
  s.cost = snap.cost;
  s.state = snap.state;
  s.head = snap.head;
  s.pos = snap.pos;
  s.x = snap.x;
  s.binv = snap.binv;
  s.updates = snap.updates;
  s.has_basis = snap.has_basis;
  s.model.set_objective(snap.model_obj);
  for (int j = 0; j < s.n; ++j) s.model.set_bounds(j, snap.model_lb[j], snap.model_ub[j]);
  s.bland = false;
  s.degenerate_run = 0;
}

const LpModel& SimplexSolver::model() const { return impl_->model; }
long SimplexSolver::total_iterations() const { return impl_->total_iters; }
int SimplexSolver::num_refactors() const { return impl_->refactors; }

LpSolution solve_lp(const LpModel& model, SimplexOptions options) {
  SimplexSolver solver(model, options);
  return solver.solve();
}

std::string to_lp_text(const LpModel& model) {
  std::ostringstream out;
  out.precision(17);
  out << (model.sense() == ObjSense::Minimize ? "minimize" : "maximize") << "\n";
  out << "obj:";
  for (int j = 0; j < model.num_cols(); ++j) {
    if (model.objective()[j] != 0.0) out << " " << model.objective()[j] << " x" << j;
  }
  out << "\n";
  for (int i = 0; i < model.num_rows(); ++i) {
    const Constraint& row = model.row(i);
    out << "r" << i << ":";
    for (const Term& t : row.terms) out << " " << t.coef << " x" << t.col;
    switch (row.sense) {
      case RowSense::Geq: out << " >= "; break;
      case RowSense::Leq: out << " <= "; break;
      case RowSense::Eq: out << " = "; break;
    }
    out << row.rhs << "\n";
  }
  out << "bounds:\n";
  for (int j = 0; j < model.num_cols(); ++j) {
    out << "x" << j << " in [" << fmt_bound(model.lower(j)) << ", "
        << fmt_bound(model.upper(j)) << "]\n";
  }
  return out.str();
}

}  // namespace slscover::lp
