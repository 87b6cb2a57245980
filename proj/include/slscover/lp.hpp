#pragma once

// Bounded-variable revised simplex with a dense explicit basis inverse.
//
// Sign convention for duals: for every column j,
//   objective_j = sum_i duals_i * a_ij + reduced_costs_j,
// so duals are the derivative of the optimal value with respect to the row
// right-hand sides. For a minimization, >= rows carry nonnegative duals; for a
// maximization, <= rows carry nonnegative duals.

#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace slscover::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kFeasTol = 1e-7;  // primal and dual residuals
inline constexpr double kGapTol = 1e-7;

enum class ObjSense { Minimize, Maximize };
enum class RowSense { Geq, Leq, Eq };

struct Term {
  int col = 0;
  double coef = 0.0;
};

struct Constraint {
  std::vector<Term> terms;
  RowSense sense = RowSense::Geq;
  double rhs = 0.0;
};

class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class LpModel {
 public:
  explicit LpModel(ObjSense sense = ObjSense::Minimize) : sense_(sense) {}

  int add_variable(double lb, double ub, double objective = 0.0);
  /// Throws ModelError (with the offending term index) on bad input.
  int add_constraint(Constraint row);
  int add_constraint(std::vector<Term> terms, RowSense sense, double rhs) {
    return add_constraint(Constraint{std::move(terms), sense, rhs});
  }

  void set_objective(std::span<const double> objective);
  void set_objective_coef(int col, double value);
  void set_bounds(int col, double lb, double ub);
  void set_sense(ObjSense sense) { sense_ = sense; }

  int num_cols() const { return static_cast<int>(obj_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  ObjSense sense() const { return sense_; }
  const Constraint& row(int i) const { return rows_.at(i); }
  const std::vector<Constraint>& rows() const { return rows_; }
  double lower(int j) const { return lb_.at(j); }
  double upper(int j) const { return ub_.at(j); }
  std::span<const double> objective() const { return obj_; }
  std::span<const double> lowers() const { return lb_; }
  std::span<const double> uppers() const { return ub_; }

  /// Validates a row against the current column count.
  void validate(const Constraint& row) const;

 private:
  ObjSense sense_;
  std::vector<double> obj_;
  std::vector<double> lb_;
  std::vector<double> ub_;
  std::vector<Constraint> rows_;
};

enum class LpStatus { Optimal, Unbounded, Infeasible, NumericalFailure, IterationLimit };
std::string_view to_string(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::NumericalFailure;
  double objective = 0.0;
  std::vector<double> primal;         // per column
  std::vector<double> duals;          // per row
  std::vector<double> reduced_costs;  // per column
  std::vector<double> row_activity;   // per row
  long iterations = 0;

  bool optimal() const { return status == LpStatus::Optimal; }
};

struct SimplexOptions {
  long iteration_limit = 0;      // 0: automatic, 100 * (rows + cols) + 10000
  int refactor_interval = 100;
  double pivot_tol = 1e-9;
  double primal_tol = 1e-9;
  double dual_tol = 1e-9;
};

/// A resumable solver owning one model. Not shareable across threads while
/// solving; copies are independent.
class SimplexSolver {
 public:
  explicit SimplexSolver(LpModel model, SimplexOptions options = {});
  SimplexSolver(const SimplexSolver&);
  SimplexSolver& operator=(const SimplexSolver&);
  SimplexSolver(SimplexSolver&&) noexcept;
  SimplexSolver& operator=(SimplexSolver&&) noexcept;
  ~SimplexSolver();

  /// Solves from the current basis (the slack basis on first use). Uses the
  /// dual simplex when the basis is dual feasible but primal infeasible.
  LpSolution solve();

  /// Replaces the objective and re-solves from the current basis.
  LpSolution resolve_with_objective(std::span<const double> objective);

  /// Appends rows; the new slacks enter the basis so the next solve starts
  /// dual feasible. Throws ModelError on malformed rows.
  void add_cuts(std::span<const Constraint> rows);
  void add_cut(const Constraint& row) { add_cuts(std::span(&row, 1)); }

  void set_bounds(int col, double lb, double ub);

  /// Full state (basis, values, and inverse) for cheap restarts.
  class Snapshot;
  std::shared_ptr<const Snapshot> snapshot() const;
  /// Throws ModelError if rows were added since the snapshot was taken.
  void restore(const Snapshot& snap);

  const LpModel& model() const;
  long total_iterations() const;
  int num_refactors() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

LpSolution solve_lp(const LpModel& model, SimplexOptions options = {});

/// Plain-text dump:
///   minimize|maximize
///   obj: <coef> x<j> ...
///   r<i>: <coef> x<j> ... (>=|<=|=) <rhs>
///   bounds: x<j> in [<lb>, <ub>]
std::string to_lp_text(const LpModel& model);

}  // namespace slscover::lp
