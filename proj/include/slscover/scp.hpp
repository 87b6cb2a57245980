#pragma once

// End-to-end set-covering solves: greedy upper bound, the reduction pipeline
// followed by branch-and-bound, matrix diagnostics, and the unit-grid case
// that reduces to a restricted vertex cover.

#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

#include "slscover/bnb.hpp"
#include "slscover/cover_matrix.hpp"
#include "slscover/geometry.hpp"
#include "slscover/instance.hpp"
#include "slscover/presolve.hpp"

namespace slscover::scp {

/// Raised for instances with a row no column can cover.
class CoverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SolveStats {
  long nodes = 0;
  long lp_solves = 0;
  long lp_iterations = 0;
  double presolve_seconds = 0.0;
  double bnb_seconds = 0.0;
  double total_seconds = 0.0;
};

struct CoverSolution {
  std::vector<int> columns;  // sorted
  double objective = 0.0;
  bool proved_optimal = false;
  SolveStats stats;
};

/// Weighted greedy: repeatedly takes the column with the smallest weight per
/// newly covered row (ties to the smallest index).
CoverSolution greedy_cover(const CoverMatrix& a, std::span<const double> w);

enum class PresolveLevel { None, ReducedCost, Strong };
std::string_view to_string(PresolveLevel level);
std::optional<PresolveLevel> parse_presolve_level(std::string_view text);

struct PipelineConfig {
  PresolveLevel presolve = PresolveLevel::Strong;
  presolve::StrongFixConfig strong;
  lp::BnbConfig bnb;
};

struct PipelineResult {
  CoverSolution solution;
  presolve::ReductionReport report;
  presolve::FixingLedger ledger;  // original column indices
  double greedy_objective = 0.0;
};

/// Row elimination, reduced-cost fixing at the relaxation dual, strong
/// fixing, then branch-and-bound on what is left. The returned cover refers
/// to the original columns and covers every original row.
PipelineResult solve_scp(const CoverMatrix& a, std::span<const double> w,
                         const PipelineConfig& config = {});
PipelineResult solve_scp(const ScpInstance& inst, const PipelineConfig& config = {});

/// min w^T z s.t. A z >= e, 0 <= z <= 1.
lp::LpModel covering_model(const CoverMatrix& a, std::span<const double> w);

/// Every column's support is an interval of `row_order` (identity if empty).
bool is_consecutive_ones(const CoverMatrix& a, std::span<const int> row_order = {});

/// False iff some odd square submatrix has exactly two ones per row and
/// column. nullopt when min(m, n) exceeds `size_cap`.
std::optional<bool> is_balanced(const CoverMatrix& a, int size_cap = 16);

/// Optimal vertex of the unit-cost covering LP when it is fractional.
std::optional<std::vector<double>> fractional_vertex_witness(const CoverMatrix& a);

struct MatrixDiagnosis {
  std::optional<bool> balanced;
  std::optional<std::vector<double>> fractional_vertex;
  bool consecutive_ones = false;
};

MatrixDiagnosis diagnose(const CoverMatrix& a, int size_cap = 16);

/// Covering by balls of radius r_v at the allowed vertices of a unit grid
/// graph, with 1 <= r_v < sqrt(5/4). Solved as a vertex cover LP restricted to
/// the allowed vertices. Columns of the solution are vertex ids.
/// Throws PreconditionError when the graph is not a unit grid or a radius is
/// out of range, and CoverError when some edge has no allowed endpoint.
CoverSolution solve_unit_grid_case(std::span<const geom::Point2> vertices,
                                   std::span<const std::pair<int, int>> edges,
                                   const std::vector<bool>& allowed,
                                   std::span<const double> radii, std::span<const double> w);

/// The 5x5 circulant with two consecutive ones per row.
CoverMatrix c25_matrix();
/// The 8x8 circulant with three consecutive ones per row.
CoverMatrix c38_matrix();

}  // namespace slscover::scp
