#pragma once

// Planar primitives used to build covering instances: segment/disk
// intersection, subinterval decomposition of edges, Euclidean MST, Delaunay
// interior edges, and box/disk feasibility tests.
//
// All functions are pure; they can be called concurrently.

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace slscover::geom {

/// Breakpoint-merge and membership tolerance (distance units).
inline constexpr double kEpsGeom = 1e-9;

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Point2 a, Point2 b) = default;
};

double dot(Point2 a, Point2 b);
double norm(Point2 a);
double distance(Point2 a, Point2 b);

struct Segment {
  Point2 p;
  Point2 q;
  int id = 0;

  Point2 at(double t) const { return p + t * (q - p); }
  double length() const { return distance(p, q); }
  bool degenerate(double eps = kEpsGeom) const { return length() <= eps; }
};

struct Disk {
  Point2 center;
  double radius = 0.0;

  bool contains(Point2 a, double eps = 0.0) const {
    return distance(a, center) <= radius + eps;
  }
};

/// Closed parameter interval [t_lo, t_hi] ⊆ [0, 1] along a segment.
struct ParamInterval {
  double t_lo = 0.0;
  double t_hi = 0.0;

  bool degenerate() const { return t_hi <= t_lo; }
};

/// Axis-aligned box {x : lo <= x <= hi}.
struct Box {
  Point2 lo;
  Point2 hi;

  static Box centered(Point2 c, double side) {
    return {{c.x - side / 2, c.y - side / 2}, {c.x + side / 2, c.y + side / 2}};
  }
  Point2 center() const { return 0.5 * (lo + hi); }
  bool valid() const { return lo.x <= hi.x && lo.y <= hi.y; }
  bool contains(Point2 a, double eps = 0.0) const {
    return a.x >= lo.x - eps && a.x <= hi.x + eps && a.y >= lo.y - eps &&
           a.y <= hi.y + eps;
  }
  Point2 project(Point2 a) const;
};

struct Cell {
  ParamInterval range;
  std::vector<int> cover;  // sorted disk indices containing the cell midpoint
};

struct SubintervalDecomposition {
  int segment_id = 0;
  std::vector<double> breakpoints;  // 0 = t_0 < t_1 < ... < t_K = 1
  std::vector<Cell> cells;          // cells[k] spans [t_k, t_{k+1}]
};

/// Parameter range where the segment lies inside the disk, clipped to [0,1].
/// A tangent line yields a single-point interval.
std::optional<ParamInterval> segment_disk_intersection(const Segment& seg,
                                                       const Disk& disk);

/// Cuts a segment at every disk boundary crossing. Breakpoints closer than
/// kEpsGeom (in distance along the segment) are merged.
SubintervalDecomposition decompose_edge(const Segment& seg,
                                        std::span<const Disk> disks);

struct MstResult {
  std::vector<std::pair<int, int>> edges;  // (i, j) with i < j, sorted
  bool has_zero_length_edge = false;
};

/// Kruskal over the complete Euclidean graph. Ties are broken by (i, j).
MstResult euclidean_mst(std::span<const Point2> points);

/// Edges of the Delaunay triangulation minus convex-hull edges.
/// Empty for fewer than three points or collinear input.
std::vector<std::pair<int, int>> delaunay_interior_edges(
    std::span<const Point2> points);

/// All Delaunay edges (including hull edges); exposed for tests and plotting.
std::vector<std::pair<int, int>> delaunay_edges(std::span<const Point2> points);

/// Edges between consecutive convex-hull vertices (collinear boundary points
/// are kept as hull vertices).
std::vector<std::pair<int, int>> convex_hull_edges(
    std::span<const Point2> points);

struct FeasibilityCheck {
  bool feasible = false;
  bool borderline = false;
  int iterations = 0;
  double residual = 0.0;
};

/// Decides box ∩ B(a1, r) ∩ B(a2, r) ≠ ∅ by cyclic projections. Borderline
/// outcomes (residual within 10 * tol after the iteration cap) count as
/// feasible.
FeasibilityCheck box_two_disk_check(const Box& box, Point2 a1, Point2 a2,
                                    double r, double tol = 1e-7,
                                    int max_iterations = 10000);

bool box_two_disk_feasible(const Box& box, Point2 a1, Point2 a2, double r,
                           double tol = 1e-7);

/// Largest distance from `a` to a vertex of the box.
double box_vertex_max_distance(const Box& box, Point2 a);

}  // namespace slscover::geom
