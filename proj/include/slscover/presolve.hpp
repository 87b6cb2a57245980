#pragma once

// Set-covering reductions: dominated-row elimination, reduced-cost fixing,
// fixing at one through the augmented dual, and strong fixing driven by one
// auxiliary LP per column.
//
// All functions work in the column/row indices of the matrix they receive;
// the pipeline in scp.hpp maps results back to the original instance.

#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "slscover/cover_matrix.hpp"
#include "slscover/geometry.hpp"
#include "slscover/lp.hpp"

namespace slscover::presolve {

inline constexpr double kFixEps = 1e-6;

enum class FixRule { RC0, DPlus1, SF0, SF1, Propagation };
std::string_view to_string(FixRule rule);

struct FixEntry {
  int column = 0;
  int value = 0;  // 0 or 1
  FixRule rule = FixRule::RC0;
  double bound = 0.0;  // certifying bound; always > ub
  double ub = 0.0;
  int source = -1;  // subproblem that produced the certificate, if any
};

class LedgerConflict : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class FixingLedger {
 public:
  /// False if the column is already fixed to the same value. Throws
  /// LedgerConflict on an opposite value or a bound not above ub.
  bool record(const FixEntry& entry);
  void merge(const FixingLedger& other);

  bool is_fixed(int column) const { return index_.contains(column); }
  std::optional<int> value(int column) const;
  const FixEntry* find(int column) const;
  const std::vector<FixEntry>& entries() const { return entries_; }
  std::vector<int> fixed_to(int value) const;  // sorted
  int count(int value) const;
  int count(FixRule rule) const;
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

  /// Same entries with columns renamed through `map` (new = map[old]).
  FixingLedger remapped(std::span<const int> map) const;

 private:
  std::vector<FixEntry> entries_;
  std::map<int, std::size_t> index_;
};

struct RowElimination {
  CoverMatrix matrix;
  std::vector<int> kept_rows;  // original index of each surviving row
};

/// Removes every row whose support contains the support of another kept row.
/// Among identical rows the lowest index survives.
RowElimination eliminate_dominated_rows(const CoverMatrix& a);

class CertificateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Clamps small negatives and scales u so that u >= 0 and u^T A <= w hold
/// exactly in floating point. Throws CertificateError when the input violates
/// either condition by more than kFeasTol (relative to w).
std::vector<double> certify_dual(const CoverMatrix& a, std::span<const double> w,
                                 std::span<const double> u);

/// w_j + u^T (e - A_j): the fixing bound of column j at dual point u.
double rc_bound(const CoverMatrix& a, std::span<const double> w, std::span<const double> u,
                const std::vector<std::vector<int>>& supports, int column);

/// Largest integer value z_j can take in a solution of cost <= ub, from
/// (ub - u^T e) / (w_j - u^T A_j); nullopt when the reduced cost is not positive.
std::optional<long> rc_integer_bound(const CoverMatrix& a, std::span<const double> w,
                                     std::span<const double> u, double ub, int column);

/// Fixes z_j = 0 for every column with w_j + u^T(e - A_j) > ub + kFixEps.
FixingLedger reduced_cost_fix(const CoverMatrix& a, std::span<const double> w,
                              std::span<const double> u, double ub,
                              FixRule rule = FixRule::RC0, int source = -1);

/// Fixes z_j = 1 when u^T e - v^T e + v_j > ub + kFixEps for a point (u, v) of
/// the augmented dual {u^T A - v^T <= w, u, v >= 0}. Throws CertificateError
/// on an infeasible point.
FixingLedger fix_at_one(const CoverMatrix& a, std::span<const double> w,
                        std::span<const double> u, std::span<const double> v, double ub);

struct DualRelaxation {
  lp::LpStatus status = lp::LpStatus::NumericalFailure;
  double value = 0.0;          // LP relaxation optimum
  std::vector<double> u;       // certified dual point
};

/// max e^T u s.t. u^T A <= w, u >= 0.
DualRelaxation solve_dual_relaxation(const CoverMatrix& a, std::span<const double> w);

enum class Strategy { All, Jaccard, BestZ };
std::string_view to_string(Strategy s);
std::optional<Strategy> parse_strategy(std::string_view text);

struct StrongFixConfig {
  Strategy strategy = Strategy::All;
  int budget = 0;  // subproblems to solve; 0 means one per column
  bool fix_at_one = false;
  bool opportunistic = true;  // apply the reduced-cost test at each subproblem dual
  bool skip_fixed = true;     // do not solve subproblems of fixed columns
  /// Site coordinates, used only for the starting column of Jaccard.
  std::vector<geom::Point2> site_points;
};

struct StrongFixResult {
  FixingLedger ledger;
  std::vector<int> solved;                     // columns in solve order
  std::vector<double> values;                  // subproblem value per solve (+inf if unbounded)
  std::vector<std::vector<int>> fixable_sets;  // S_j per solve, from its dual point
  int failures = 0;
  long lp_iterations = 0;
  double relaxation_value = 0.0;
  double seconds = 0.0;
};

/// Solves w_j + max{u^T(e - A_j) : u^T A <= w, u >= 0} for the columns chosen
/// by the strategy, each one warm-started from the relaxation's optimal basis.
StrongFixResult strong_fix(const CoverMatrix& a, std::span<const double> w, double ub,
                           const StrongFixConfig& config);

/// |supp(A_i) & supp(A_j)| / |supp(A_i) | supp(A_j)|; 0 when both are empty.
double jaccard_similarity(std::span<const int> support_a, std::span<const int> support_b);

/// Site with the largest y, then the smallest x; column 0 without points.
int jaccard_start(std::span<const geom::Point2> sites);

/// Argmax of the Jaccard similarity to `current` over `candidates`; ties go to
/// the smallest index. -1 if there are no candidates.
int select_next_jaccard(const std::vector<std::vector<int>>& supports, int current,
                        std::span<const int> candidates);

/// Argmax of w_j + u^T(e - A_j) - ub over `candidates`; ties go to the
/// smallest index. -1 if there are no candidates.
int select_next_bestz(const CoverMatrix& a, std::span<const double> w, double ub,
                      std::span<const double> u, const std::vector<std::vector<int>>& supports,
                      std::span<const int> candidates);

/// Candidate with the smallest (ub - u^T e) / (w_j - u^T A_j) among positive
/// reduced costs; the smallest candidate if none is positive.
int bestz_start(const CoverMatrix& a, std::span<const double> w, double ub,
                std::span<const double> u, const std::vector<std::vector<int>>& supports,
                std::span<const int> candidates);

struct BestKResult {
  std::vector<int> chosen;  // indices into the input families
  int fixed_count = 0;
  bool proved_optimal = false;
  long nodes = 0;
};

/// max sum y s.t. F x - y >= 0, sum x <= k, binary, with f_ij = 1 iff i in S_j.
/// Families contained in another family are dropped first; if at most k
/// remain the answer is their union. `hint` (family indices) seeds the search.
BestKResult best_k_oracle(const std::vector<std::vector<int>>& sets, int k,
                          std::span<const int> hint = {}, double time_limit = 0.0);

struct StageSize {
  int m = 0;
  int n = 0;
  double seconds = 0.0;
};

struct ReductionReport {
  StageSize original;
  StageSize rows_eliminated;  // (a)
  StageSize rc_fixed;         // (b) then (a)
  StageSize strong_fixed;     // (c) then (a)
  int n0_rc = 0;
  int n0_sf = 0;
  int n1_sf = 0;
  double upper_bound = 0.0;
  double offset = 0.0;
};

std::string report_csv_header();
std::string report_csv_row(std::string_view instance_id, const ReductionReport& report);

/// Reduced covering problem tracking where its rows and columns came from.
struct ReducedProblem {
  CoverMatrix matrix;
  std::vector<double> weights;
  std::vector<int> col_map;  // reduced column -> original column
  std::vector<int> row_map;  // reduced row -> original row
  std::vector<int> forced_one;  // original columns fixed to one
  double offset = 0.0;

  static ReducedProblem identity(const CoverMatrix& a, std::span<const double> w);
};

/// Deletes zero-fixed columns, deletes one-fixed columns with their rows
/// (their weight moves into the offset), then eliminates dominated rows.
/// Ledger columns are indices of `base`. Throws LedgerConflict if a row loses
/// all its columns.
ReducedProblem apply_fixings(const ReducedProblem& base, const FixingLedger& ledger);

/// Dominated-row elimination on a reduced problem.
ReducedProblem eliminate_rows(const ReducedProblem& base);

}  // namespace slscover::presolve
