#pragma once

// Random edge-covering instances: graph generation, radius repair loops, and
// conversion to the set-covering matrix and to the box-location model.

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "slscover/cover_matrix.hpp"
#include "slscover/geometry.hpp"

namespace slscover {

using geom::Box;
using geom::Point2;

class InstanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Site {
  Point2 center;
  double radius = 0.0;
  double weight = 0.0;
};

struct GeneratorParams {
  int n = 0;            // candidate sites
  int nu = 0;           // graph vertices
  double r_min = 0.11;
  double r_max = 0.19;
  double ell = 0.05;    // box side for the location model
};

struct Cp1Instance {
  std::vector<Point2> vertices;
  std::vector<std::pair<int, int>> edges;  // (u, v) with u < v
  std::vector<Site> sites;
  std::uint64_t seed = 0;
  GeneratorParams params;
  int feasibility_rounds = 0;
  int zero_column_rounds = 0;  // total per-site inflation steps

  geom::Segment segment(int edge) const;
  std::vector<geom::Disk> disks() const;
};

/// Uniform vertices, MST plus interior Delaunay edges, uniform sites with
/// radii in [r_min, r_max] and weights in [0.5 r^2, 1.5 r^2]. No repair.
Cp1Instance generate(const GeneratorParams& params, std::uint64_t seed);

/// generate() followed by both repair loops.
Cp1Instance generate_repaired(const GeneratorParams& params, std::uint64_t seed);

/// Vertices on the horizontal line y = 0.5 joined in x order; sites are drawn
/// from the band 0.3 <= y <= 0.7. Used for consecutive-ones checks.
Cp1Instance generate_path_instance(int n, int num_vertices, std::uint64_t seed,
                                   double r_min = 0.11, double r_max = 0.19);

std::vector<geom::SubintervalDecomposition> decompose_all(const Cp1Instance& inst);

/// True when every cell of every edge is covered by some disk.
bool is_feasible(const Cp1Instance& inst);

/// Scales every radius by 1.1 until the instance is feasible (cap 200 rounds).
Cp1Instance repair_feasibility(Cp1Instance inst);

/// Scales the radius of each zero-column site by 1.1 per round until its
/// column is nonempty (cap 200 rounds per site).
Cp1Instance repair_zero_columns(Cp1Instance inst);

struct RowOrigin {
  int edge = 0;
  int cell = 0;
  double t_lo = 0.0;
  double t_hi = 0.0;
};

struct ScpInstance {
  CoverMatrix matrix;
  std::vector<double> weights;
  std::vector<RowOrigin> origin;  // one per row

  int num_rows() const { return matrix.num_rows(); }
  int num_cols() const { return matrix.num_cols; }
};

/// One row per cell, rows ordered by (edge, cell). Throws on an empty row.
ScpInstance to_scp(const Cp1Instance& inst);

struct Cp2Edge {
  Point2 a1;
  Point2 a2;
  int source_edge = 0;
  int cell = 0;
};

/// Data for one (edge i, site j) pair with j in N_i.
struct Cp2Pair {
  int site = 0;
  std::array<double, 2> dist_max{};  // D_ijk: farthest box vertex to endpoint k
  std::array<double, 2> big_m{};     // max(D_ijk - r_j, 0)
};

struct Cp2Instance {
  std::vector<Cp2Edge> edges;
  std::vector<Box> boxes;
  std::vector<double> radii;
  std::vector<double> weights;
  std::vector<Point2> site_points;               // box centers
  std::vector<std::vector<Cp2Pair>> candidates;  // per edge, sorted by site
  double ell = 0.0;

  int num_sites() const { return static_cast<int>(boxes.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }
  int num_pairs() const;
  /// I^j: edges listing site j as a candidate.
  std::vector<std::vector<int>> edges_of_site() const;
};

/// Cells of the SCP decomposition become the edges of H; boxes of side ell are
/// centered at the sites. Throws InstanceError if some edge has no candidate.
Cp2Instance to_cp2(const Cp1Instance& inst, double ell);

/// Star of five spokes with five disks, each covering two adjacent spokes.
/// Spoke s is covered by exactly the columns s and s+1 (mod 5).
Cp1Instance c25_star_instance();

/// Boundary of a 2x2 unit grid (8 edges, scaled into [0,1]^2) with eight
/// disks, each covering an L of three consecutive edges. Edge e (in cycle
/// order) is covered by exactly the columns e, e+1, e+2 (mod 8).
Cp1Instance c38_grid_instance();

}  // namespace slscover
