#pragma once

// Box-location covering model: each chosen site may move its center inside
// a box, and every edge of H must lie in the ball of one chosen site.
//
// Primal: min w^T z subject to z_j >= y_p, sum_{p in i} y_p >= 1 and
// ||x_j - a|| <= r_j + M_p (1 - y_p) for both endpoints a of the edge of p.
// Conic rows are handled by outer-approximation cuts in branch-and-bound.
// Fixing uses dual points taken from a polygonal restriction of the dual
// cone, then evaluated through an exact Lagrangian bound.

#include <array>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "slscover/bnb.hpp"
#include "slscover/geometry.hpp"
#include "slscover/instance.hpp"
#include "slscover/lp.hpp"
#include "slscover/presolve.hpp"

namespace slscover::cp2 {

using geom::Point2;

inline constexpr double kConicFeasTol = 1e-6;

class InfeasibleInstance : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class ApproxMode { Outer, Inner };

/// Regular K-gon approximation of the disk {g : ||g|| <= 1}. The outer polygon
/// has halfspaces g_l^T x <= 1, the inner one g_l^T x <= cos(pi / K), with
/// normals g_l at angles 2 pi l / K.
struct ConeApprox {
  int directions = 16;
  ApproxMode mode = ApproxMode::Inner;

  void validate() const;
  std::vector<Point2> normals() const;
  /// Polygon corners for unit radius; they sit at angles (2l + 1) pi / K.
  std::vector<Point2> vertices() const;
  double halfspace_rhs() const;  // 1 or cos(pi / K)
};

struct PairVar {
  int edge = 0;
  int site = 0;
  std::array<double, 2> big_m{};
  std::array<double, 2> dist_max{};
};

struct Cp2Model {
  Cp2Instance inst;
  std::vector<PairVar> pairs;                 // by edge, then site
  std::vector<std::vector<int>> pairs_of_edge;
  std::vector<std::vector<int>> pairs_of_site;
  /// Bounds, objective, linking rows and cover rows; no conic rows.
  lp::LpModel lp;

  int num_sites() const { return inst.num_sites(); }
  int num_edges() const { return inst.num_edges(); }
  int num_pairs() const { return static_cast<int>(pairs.size()); }
  int num_vars() const { return 3 * num_sites() + num_pairs(); }

  int z_var(int j) const { return j; }
  int x_var(int j, int d) const { return num_sites() + 2 * j + d; }
  int y_var(int p) const { return 3 * num_sites() + p; }
  std::vector<int> y_vars() const;

  Point2 anchor(int p, int end) const;
  double radius(int p) const { return inst.radii[pairs[p].site]; }
  /// True when every box point lies in the ball, so the row never binds.
  bool vacuous(int p, int end) const;

  /// ||x_j - a|| - r_j - M (1 - y_p) at a model point.
  double conic_residual(std::span<const double> point, int p, int end) const;
  double max_conic_residual(std::span<const double> point) const;

  /// g^T x_j + M y_p <= r_j + M + g^T a with ||g|| = 1.
  lp::Constraint oa_cut(int p, int end, Point2 g) const;
};

/// Throws InfeasibleInstance when some edge has no candidate site.
Cp2Model build_cp2_model(const Cp2Instance& inst);

struct Cp2Stats {
  long nodes = 0;
  long lp_solves = 0;
  long lp_iterations = 0;
  long cuts = 0;
  int initial_cuts = 0;
  double seconds = 0.0;
};

struct Assignment {
  int edge = 0;
  int site = 0;
};

struct Cp2Solution {
  std::vector<int> sites;         // chosen, sorted
  std::vector<Point2> centers;    // one per site of the instance
  std::vector<Assignment> assignments;  // one per edge, by edge
  double objective = 0.0;
  double best_bound = 0.0;
  bool proved_optimal = false;
  Cp2Stats stats;
};

/// Largest ||x_j - a|| - r_j over assigned edge endpoints, or +inf when an
/// edge is unassigned, assigned to an unchosen site, or a center leaves its box.
double max_violation(const Cp2Instance& inst, const Cp2Solution& sol);

/// Model point with z, y from the solution's sites and assignments.
std::vector<double> to_point(const Cp2Model& model, const Cp2Solution& sol);
Cp2Solution from_point(const Cp2Model& model, std::span<const double> point);

/// A point of the box within `radius` of every anchor, found by alternating
/// projections from `start`.
std::optional<Point2> locate_center(const geom::Box& box, std::span<const Point2> anchors,
                                    double radius, Point2 start, double tol = 1e-10);

struct Cp2SolveConfig {
  int initial_directions = 8;
  /// Initial direction rows are added up front only while their count stays
  /// below this; beyond it separation starts from an empty cut set.
  int eager_row_cap = 400;
  double conic_tol = kConicFeasTol;
  double fractional_cut_tol = 1e-4;
  lp::BnbConfig bnb;
  /// Fixings on model variables, applied as bounds.
  presolve::FixingLedger fixings;
  std::optional<Cp2Solution> warm_start;
};

Cp2Solution solve_cp2(const Cp2Model& model, const Cp2SolveConfig& config = {});

/// Centers at box centers, sites from the set-covering cover. H edges must be
/// the cells of the same instance, in the same order as the covering rows.
Cp2Solution initial_ub_from_scp(std::span<const int> cover_columns, const Cp2Instance& inst);

struct RelaxationResult {
  lp::LpStatus status = lp::LpStatus::NumericalFailure;
  double value = 0.0;
  std::vector<double> point;
  double residual = 0.0;
  int rounds = 0;
};

/// Continuous relaxation, refined with gradient cuts until every conic
/// residual is below `tol`.
RelaxationResult solve_oa_relaxation(const Cp2Model& model, double tol = 1e-8,
                                     int max_rounds = 5000);

// ---- dual side ----

enum class DualForm { Plain, Augmented };

/// Column and row indices of the restricted dual LP. Pair p has endpoints
/// 2p and 2p + 1; gamma_{pk} = sum_l t_{pkl} v_l and nu_{pk} = s_{pk} + sum_l t_{pkl}
/// with v_l the approximation's polygon corners.
struct DualLayout {
  int directions = 0;
  std::vector<Point2> corners;
  std::vector<int> lambda;  // per pair
  std::vector<int> mu;      // per edge
  std::vector<int> slack;   // per endpoint
  std::vector<int> t_first; // per endpoint, first of `directions` columns
  std::vector<std::array<int, 2>> theta_hi, theta_lo;  // per site; -1 when unused
  std::vector<int> phi, delta;                          // per site; -1 when unused
  std::vector<int> pair_row;                            // per pair
};

struct RestrictedDual {
  lp::LpModel lp;  // maximization
  DualLayout layout;
  DualForm form = DualForm::Plain;
};

/// Every feasible point of the LP maps to a dual point with ||gamma|| <= nu.
/// With an outer approximation the map is not dual feasible; the LP is then
/// a relaxation of the dual and can be unbounded.
RestrictedDual build_dual_restricted(const Cp2Model& model, const ConeApprox& approx = {},
                                     DualForm form = DualForm::Plain);

struct DualPoint {
  std::vector<double> lambda;  // per pair
  std::vector<double> mu;      // per edge
  std::vector<double> nu;      // per endpoint
  std::vector<Point2> gamma;   // per endpoint
  std::vector<double> phi;     // per site, zero in the plain form
  std::vector<double> delta;
  double beta(const Cp2Model& model, int p) const;
};

DualPoint extract_dual_point(const Cp2Model& model, const RestrictedDual& dual,
                             std::span<const double> primal);

/// Lagrangian bound over z, y in [0, 1] and x in the boxes for a clamped copy
/// of the point with nu raised to ||gamma||. Valid for any input.
struct LagrangianBound {
  double value = 0.0;
  std::vector<double> site_cost;  // w_j - sum lambda
  std::vector<double> pair_cost;  // lambda - mu + sum nu M

  double if_pair_one(int p) const { return value + std::max(0.0, pair_cost[p]); }
  double if_site_one(int j) const { return value + std::max(0.0, site_cost[j]); }
  double if_site_zero(int j) const { return value + std::max(0.0, -site_cost[j]); }
};

LagrangianBound lagrangian_bound(const Cp2Model& model, const DualPoint& point);

/// The threshold test: multiplier > ub - xi + eps.
bool dual_fixing_test(double xi, double ub, double multiplier);

struct Cp2FixConfig {
  ConeApprox approx{16, ApproxMode::Inner};
  bool baseline = true;
  bool strong = true;
  bool pair_subproblems = false;
  /// Also fixes z_j = 0 when a pair subproblem fixes y_p = 0 for a pair of j.
  /// Not valid in general; kept for experiments.
  bool lift_pairs_to_sites = false;
  bool opportunistic = true;
};

struct Cp2FixResult {
  presolve::FixingLedger ledger;  // model variable indices
  int num_sites = 0;
  int baseline_fixed = 0;
  double baseline_value = 0.0;   // restricted dual optimum
  double baseline_bound = 0.0;   // Lagrangian bound at that point
  int subproblems = 0;
  int unbounded = 0;
  int failures = 0;
  long lp_iterations = 0;
  double seconds = 0.0;

  int fixed_sites(int value) const;
  int fixed_pairs() const;
};

/// Baseline pass at the restricted dual optimum, then one pair of augmented
/// subproblems per site. Requires an inner approximation and a feasible ub.
Cp2FixResult strong_fix_cp2(const Cp2Model& model, double ub, const Cp2FixConfig& config = {});

}  // namespace slscover::cp2
