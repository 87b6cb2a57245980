#include "slscover/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <set>
#include <tuple>

#include <spdlog/spdlog.h>

namespace slscover::geom {

double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
double norm(Point2 a) { return std::hypot(a.x, a.y); }
double distance(Point2 a, Point2 b) { return norm(a - b); }

Point2 Box::project(Point2 a) const {
  return {std::clamp(a.x, lo.x, hi.x), std::clamp(a.y, lo.y, hi.y)};
}

std::optional<ParamInterval> segment_disk_intersection(const Segment& seg,
                                                       const Disk& disk) {
  const Point2 d = seg.q - seg.p;
  const double a = dot(d, d);
  if (std::sqrt(a) <= kEpsGeom) {
    if (disk.contains(seg.p, kEpsGeom)) return ParamInterval{0.0, 1.0};
    return std::nullopt;
  }
  const Point2 f = seg.p - disk.center;
  const double b = 2.0 * dot(f, d);
  const double c = dot(f, f) - disk.radius * disk.radius;

  // Closest point of the supporting line to the center.
  const double t_star = -b / (2.0 * a);
  const double closest = distance(seg.at(t_star), disk.center);
  if (closest > disk.radius + kEpsGeom) return std::nullopt;

  double t1 = t_star;
  double t2 = t_star;
  const double disc = b * b - 4.0 * a * c;
  if (disc > 0.0 && closest < disk.radius) {
    // q has the sign of b, so neither root loses digits to cancellation.
    const double s = std::sqrt(disc);
    const double q = -0.5 * (b + std::copysign(s, b));
    if (q != 0.0) {
      t1 = q / a;
      t2 = c / q;
    } else {
      t1 = -s / (2.0 * a);
      t2 = s / (2.0 * a);
    }
    if (t1 > t2) std::swap(t1, t2);
  }
  if (t2 < 0.0 || t1 > 1.0) return std::nullopt;
  return ParamInterval{std::max(t1, 0.0), std::min(t2, 1.0)};
}

SubintervalDecomposition decompose_edge(const Segment& seg,
                                        std::span<const Disk> disks) {
  SubintervalDecomposition out;
  out.segment_id = seg.id;

  const double len = seg.length();
  const double t_tol = len > 0.0 ? kEpsGeom / len : 1.0;

  std::vector<double> raw{0.0, 1.0};
  for (const Disk& disk : disks) {
    if (auto iv = segment_disk_intersection(seg, disk)) {
      raw.push_back(iv->t_lo);
      raw.push_back(iv->t_hi);
    }
  }
  std::sort(raw.begin(), raw.end());

  out.breakpoints.push_back(0.0);
  for (double t : raw) {
    if (t - out.breakpoints.back() > t_tol) out.breakpoints.push_back(t);
  }
  // The last breakpoint must be exactly 1; a merged neighbour is replaced.
  if (out.breakpoints.size() == 1) {
    out.breakpoints.push_back(1.0);
  } else if (out.breakpoints.back() != 1.0) {
    if (1.0 - out.breakpoints.back() <= t_tol) {
      out.breakpoints.back() = 1.0;
    } else {
      out.breakpoints.push_back(1.0);
    }
  }

  for (std::size_t k = 0; k + 1 < out.breakpoints.size(); ++k) {
    Cell cell;
    cell.range = {out.breakpoints[k], out.breakpoints[k + 1]};
    const Point2 mid = seg.at(0.5 * (cell.range.t_lo + cell.range.t_hi));
    for (std::size_t j = 0; j < disks.size(); ++j) {
      if (disks[j].contains(mid)) cell.cover.push_back(static_cast<int>(j));
    }
    out.cells.push_back(std::move(cell));
  }
  return out;
}

namespace {

struct DisjointSets {
  std::vector<int> parent;
  explicit DisjointSets(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

double cross(Point2 o, Point2 a, Point2 b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool all_collinear(std::span<const Point2> pts) {
  if (pts.size() < 3) return true;
  // Pick the farthest point from pts[0] as the reference direction.
  std::size_t far = 0;
  double best = -1.0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double d = distance(pts[0], pts[i]);
    if (d > best) {
      best = d;
      far = i;
    }
  }
  if (best <= kEpsGeom) return true;
  for (const Point2& p : pts) {
    if (std::abs(cross(pts[0], pts[far], p)) / best > kEpsGeom) return false;
  }
  return true;
}

// > 0 when d lies strictly inside the circumcircle of the CCW triangle abc,
// < 0 when strictly outside, 0 when the test is within rounding of a tie.
int incircle_sign(Point2 a, Point2 b, Point2 c, Point2 d) {
  const double adx = a.x - d.x, ady = a.y - d.y;
  const double bdx = b.x - d.x, bdy = b.y - d.y;
  const double cdx = c.x - d.x, cdy = c.y - d.y;
  const double alift = adx * adx + ady * ady;
  const double blift = bdx * bdx + bdy * bdy;
  const double clift = cdx * cdx + cdy * cdy;
  const double det = alift * (bdx * cdy - bdy * cdx) +
                     blift * (cdx * ady - cdy * adx) +
                     clift * (adx * bdy - ady * bdx);
  const double permanent =
      alift * (std::abs(bdx * cdy) + std::abs(bdy * cdx)) +
      blift * (std::abs(cdx * ady) + std::abs(cdy * adx)) +
      clift * (std::abs(adx * bdy) + std::abs(ady * bdx));
  const double err = 1e-12 * permanent;
  if (det > err) return 1;
  if (det < -err) return -1;
  return 0;
}

std::pair<int, int> ordered(int a, int b) {
  return a < b ? std::pair{a, b} : std::pair{b, a};
}

}  // namespace

MstResult euclidean_mst(std::span<const Point2> points) {
  MstResult out;
  const int n = static_cast<int>(points.size());
  if (n < 2) return out;
  std::vector<std::tuple<double, int, int>> edges;
  edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      edges.emplace_back(distance(points[i], points[j]), i, j);
    }
  }
  std::sort(edges.begin(), edges.end());
  DisjointSets dsu(n);
  for (const auto& [len, i, j] : edges) {
    if (dsu.unite(i, j)) {
      out.edges.emplace_back(i, j);
      if (len <= kEpsGeom) out.has_zero_length_edge = true;
      if (static_cast<int>(out.edges.size()) == n - 1) break;
    }
  }
  std::sort(out.edges.begin(), out.edges.end());
  return out;
}

std::vector<std::pair<int, int>> delaunay_edges(std::span<const Point2> points) {
  const int n = static_cast<int>(points.size());
  if (n < 3 || all_collinear(points)) return {};

  // Bowyer-Watson over points + three far-away super vertices. Points are
  // inserted in index order; a point exactly on a circumcircle counts as
  // outside it, which keeps the existing triangle.
  double min_x = points[0].x, max_x = points[0].x;
  double min_y = points[0].y, max_y = points[0].y;
  for (const Point2& p : points) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  const double span = std::max({max_x - min_x, max_y - min_y, 1e-6});
  const Point2 mid{(min_x + max_x) / 2, (min_y + max_y) / 2};
  std::vector<Point2> pts(points.begin(), points.end());
  pts.push_back({mid.x - 1000 * span, mid.y - 1000 * span});
  pts.push_back({mid.x + 1000 * span, mid.y - 1000 * span});
  pts.push_back({mid.x, mid.y + 1000 * span});

  using Tri = std::array<int, 3>;
  std::vector<Tri> tris{{n, n + 1, n + 2}};
  std::vector<int> inserted;

  for (int p = 0; p < n; ++p) {
    bool duplicate = false;
    for (int q : inserted) {
      if (distance(pts[p], pts[q]) <= kEpsGeom) {
        duplicate = true;
        break;
      }
    }
    if (duplicate) continue;
    inserted.push_back(p);

    std::vector<Tri> keep;
    std::vector<std::pair<int, int>> boundary;
    std::vector<Tri> bad;
    for (const Tri& t : tris) {
      if (incircle_sign(pts[t[0]], pts[t[1]], pts[t[2]], pts[p]) > 0) {
        bad.push_back(t);
      } else {
        keep.push_back(t);
      }
    }
    // Cavity boundary: directed edges of bad triangles whose twin is absent.
    std::set<std::pair<int, int>> directed;
    for (const Tri& t : bad) {
      for (int e = 0; e < 3; ++e) directed.emplace(t[e], t[(e + 1) % 3]);
    }
    for (const auto& [a, b] : directed) {
      if (!directed.contains({b, a})) boundary.emplace_back(a, b);
    }
    for (const auto& [a, b] : boundary) keep.push_back({a, b, p});
    tris = std::move(keep);
  }

  std::set<std::pair<int, int>> edges;
  for (const Tri& t : tris) {
    if (t[0] >= n || t[1] >= n || t[2] >= n) continue;
    for (int e = 0; e < 3; ++e) edges.insert(ordered(t[e], t[(e + 1) % 3]));
  }
  return {edges.begin(), edges.end()};
}

std::vector<std::pair<int, int>> convex_hull_edges(
    std::span<const Point2> points) {
  const int n = static_cast<int>(points.size());
  if (n < 2) return {};
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    return std::tie(points[a].x, points[a].y, a) <
           std::tie(points[b].x, points[b].y, b);
  });
  // Drop exact duplicates, keeping the lowest index.
  std::vector<int> uniq;
  for (int i : idx) {
    if (!uniq.empty() && distance(points[uniq.back()], points[i]) <= kEpsGeom) {
      continue;
    }
    uniq.push_back(i);
  }
  if (uniq.size() < 2) return {};
  auto turn = [&](int o, int a, int b) {
    const double c = cross(points[o], points[a], points[b]);
    const double scale = distance(points[o], points[a]) + kEpsGeom;
    return std::abs(c) / scale <= kEpsGeom ? 0.0 : c;
  };
  // Monotone chain keeping collinear boundary points.
  std::vector<int> hull;
  for (int pass = 0; pass < 2; ++pass) {
    const std::size_t start = hull.size();
    for (int i : uniq) {
      while (hull.size() >= start + 2 &&
             turn(hull[hull.size() - 2], hull.back(), i) < 0) {
        hull.pop_back();
      }
      hull.push_back(i);
    }
    hull.pop_back();
    std::reverse(uniq.begin(), uniq.end());
  }
  std::set<std::pair<int, int>> out;
  for (std::size_t k = 0; k < hull.size(); ++k) {
    const int a = hull[k];
    const int b = hull[(k + 1) % hull.size()];
    if (a != b) out.insert(ordered(a, b));
  }
  return {out.begin(), out.end()};
}

std::vector<std::pair<int, int>> delaunay_interior_edges(
    std::span<const Point2> points) {
  auto all = delaunay_edges(points);
  if (all.empty()) return {};
  const auto hull = convex_hull_edges(points);
  const std::set<std::pair<int, int>> hull_set(hull.begin(), hull.end());
  std::vector<std::pair<int, int>> out;
  for (const auto& e : all) {
    if (!hull_set.contains(e)) out.push_back(e);
  }
  return out;
}

namespace {

Point2 project_disk(Point2 x, Point2 c, double r) {
  const double d = distance(x, c);
  if (d <= r) return x;
  return c + (r / d) * (x - c);
}

}  // namespace

FeasibilityCheck box_two_disk_check(const Box& box, Point2 a1, Point2 a2,
                                    double r, double tol, int max_iterations) {
  FeasibilityCheck out;
  auto residual = [&](Point2 x) {
    return std::max({distance(x, a1) - r, distance(x, a2) - r, 0.0});
  };
  Point2 x = box.project(box.center());
  out.residual = residual(x);
  for (int it = 0; it < max_iterations && out.residual > tol; ++it) {
    const Point2 prev = x;
    x = box.project(project_disk(project_disk(x, a1, r), a2, r));
    out.residual = residual(x);
    out.iterations = it + 1;
    // A fixed point of the cycle that is not feasible means the sets are
    // disjoint (or touch within rounding).
    if (distance(prev, x) <= 1e-15 && out.residual > 10 * tol) break;
  }
  if (out.residual <= tol) {
    out.feasible = true;
  } else if (out.residual <= 10 * tol) {
    out.feasible = true;
    out.borderline = true;
    spdlog::warn(
        "box/two-disk feasibility is borderline (residual {:.3e}); treating "
        "as feasible",
        out.residual);
  }
  return out;
}

bool box_two_disk_feasible(const Box& box, Point2 a1, Point2 a2, double r,
                           double tol) {
  return box_two_disk_check(box, a1, a2, r, tol).feasible;
}

double box_vertex_max_distance(const Box& box, Point2 a) {
  double best = 0.0;
  for (double x : {box.lo.x, box.hi.x}) {
    for (double y : {box.lo.y, box.hi.y}) {
      best = std::max(best, distance({x, y}, a));
    }
  }
  return best;
}

}  // namespace slscover::geom
