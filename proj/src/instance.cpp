#include "slscover/instance.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "slscover/rng.hpp"

namespace slscover {

namespace {

constexpr int kRepairCap = 200;
constexpr double kGrowth = 1.1;

void check_params(const GeneratorParams& p) {
  if (p.n < 1) throw InstanceError("generator: n must be >= 1");
  if (p.nu < 2) throw InstanceError("generator: nu must be >= 2");
  if (!(0.1 < p.r_min && p.r_min < p.r_max && p.r_max < 0.2)) {
    throw InstanceError("generator: need 0.1 < r_min < r_max < 0.2");
  }
}

void draw_sites(Cp1Instance& inst, int n, std::uint64_t seed, double y_lo,
                double y_hi) {
  SplitMix64 site_rng(seed, StreamTag::Sites);
  SplitMix64 radius_rng(seed, StreamTag::Radii);
  SplitMix64 weight_rng(seed, StreamTag::Weights);
  inst.sites.resize(n);
  for (Site& s : inst.sites) {
    s.center.x = site_rng.uniform();
    s.center.y = site_rng.uniform(y_lo, y_hi);
    s.radius = radius_rng.uniform(inst.params.r_min, inst.params.r_max);
    const double r2 = s.radius * s.radius;
    s.weight = weight_rng.uniform(0.5 * r2, 1.5 * r2);
  }
}

std::vector<int> zero_columns(const Cp1Instance& inst) {
  std::vector<std::uint8_t> seen(inst.sites.size(), 0);
  for (const auto& dec : decompose_all(inst)) {
    for (const auto& cell : dec.cells) {
      for (int j : cell.cover) seen[j] = 1;
    }
  }
  std::vector<int> out;
  for (std::size_t j = 0; j < seen.size(); ++j) {
    if (!seen[j]) out.push_back(static_cast<int>(j));
  }
  return out;
}

}  // namespace

geom::Segment Cp1Instance::segment(int edge) const {
  const auto [u, v] = edges.at(edge);
  return {vertices.at(u), vertices.at(v), edge};
}

std::vector<geom::Disk> Cp1Instance::disks() const {
  std::vector<geom::Disk> out;
  out.reserve(sites.size());
  for (const Site& s : sites) out.push_back({s.center, s.radius});
  return out;
}

Cp1Instance generate(const GeneratorParams& params, std::uint64_t seed) {
  check_params(params);
  Cp1Instance inst;
  inst.seed = seed;
  inst.params = params;

  SplitMix64 vertex_rng(seed, StreamTag::Vertices);
  inst.vertices.resize(params.nu);
  for (Point2& p : inst.vertices) {
    p.x = vertex_rng.uniform();
    p.y = vertex_rng.uniform();
  }

  std::set<std::pair<int, int>> edge_set;
  const auto mst = geom::euclidean_mst(inst.vertices);
  edge_set.insert(mst.edges.begin(), mst.edges.end());
  const auto interior = geom::delaunay_interior_edges(inst.vertices);
  edge_set.insert(interior.begin(), interior.end());
  inst.edges.assign(edge_set.begin(), edge_set.end());

  draw_sites(inst, params.n, seed, 0.0, 1.0);
  return inst;
}

Cp1Instance generate_repaired(const GeneratorParams& params, std::uint64_t seed) {
  return repair_zero_columns(repair_feasibility(generate(params, seed)));
}

Cp1Instance generate_path_instance(int n, int num_vertices, std::uint64_t seed,
                                   double r_min, double r_max) {
  Cp1Instance inst;
  inst.seed = seed;
  inst.params = {n, num_vertices, r_min, r_max, 0.0};
  check_params(inst.params);

  SplitMix64 vertex_rng(seed, StreamTag::Vertices);
  std::vector<double> xs(num_vertices);
  for (double& x : xs) x = vertex_rng.uniform();
  std::sort(xs.begin(), xs.end());
  for (double x : xs) inst.vertices.push_back({x, 0.5});
  for (int k = 0; k + 1 < num_vertices; ++k) inst.edges.emplace_back(k, k + 1);

  draw_sites(inst, n, seed, 0.3, 0.7);
  return repair_zero_columns(repair_feasibility(std::move(inst)));
}

std::vector<geom::SubintervalDecomposition> decompose_all(
    const Cp1Instance& inst) {
  const auto disks = inst.disks();
  std::vector<geom::SubintervalDecomposition> out;
  out.reserve(inst.edges.size());
  for (int e = 0; e < static_cast<int>(inst.edges.size()); ++e) {
    out.push_back(geom::decompose_edge(inst.segment(e), disks));
  }
  return out;
}

bool is_feasible(const Cp1Instance& inst) {
  for (const auto& dec : decompose_all(inst)) {
    for (const auto& cell : dec.cells) {
      if (cell.cover.empty()) return false;
    }
  }
  return true;
}

Cp1Instance repair_feasibility(Cp1Instance inst) {
  int rounds = 0;
  while (!is_feasible(inst)) {
    if (rounds == kRepairCap) {
      throw InstanceError("repair_feasibility: no cover after 200 rounds");
    }
    for (Site& s : inst.sites) s.radius *= kGrowth;
    ++rounds;
  }
  inst.feasibility_rounds += rounds;
  return inst;
}

Cp1Instance repair_zero_columns(Cp1Instance inst) {
  std::vector<int> per_site(inst.sites.size(), 0);
  for (auto zero = zero_columns(inst); !zero.empty(); zero = zero_columns(inst)) {
    for (int j : zero) {
      if (per_site[j] == kRepairCap) {
        throw InstanceError("repair_zero_columns: site " + std::to_string(j) +
                            " still reaches no edge after 200 rounds");
      }
      inst.sites[j].radius *= kGrowth;
      ++per_site[j];
      ++inst.zero_column_rounds;
    }
  }
  return inst;
}

ScpInstance to_scp(const Cp1Instance& inst) {
  ScpInstance scp;
  scp.matrix.num_cols = static_cast<int>(inst.sites.size());
  for (const Site& s : inst.sites) scp.weights.push_back(s.weight);
  const auto decs = decompose_all(inst);
  for (int e = 0; e < static_cast<int>(decs.size()); ++e) {
    for (int k = 0; k < static_cast<int>(decs[e].cells.size()); ++k) {
      const auto& cell = decs[e].cells[k];
      if (cell.cover.empty()) {
        throw InstanceError("to_scp: edge " + std::to_string(e) + " cell " +
                            std::to_string(k) + " is not covered by any disk");
      }
      scp.matrix.rows.push_back(cell.cover);
      scp.origin.push_back({e, k, cell.range.t_lo, cell.range.t_hi});
    }
  }
  return scp;
}

int Cp2Instance::num_pairs() const {
  int total = 0;
  for (const auto& c : candidates) total += static_cast<int>(c.size());
  return total;
}

std::vector<std::vector<int>> Cp2Instance::edges_of_site() const {
  std::vector<std::vector<int>> out(boxes.size());
  for (int i = 0; i < num_edges(); ++i) {
    for (const Cp2Pair& p : candidates[i]) out[p.site].push_back(i);
  }
  return out;
}

Cp2Instance to_cp2(const Cp1Instance& inst, double ell) {
  if (!(ell >= 0.0)) throw InstanceError("to_cp2: ell must be >= 0");
  Cp2Instance out;
  out.ell = ell;
  for (const Site& s : inst.sites) {
    out.boxes.push_back(Box::centered(s.center, ell));
    out.radii.push_back(s.radius);
    out.weights.push_back(s.weight);
    out.site_points.push_back(s.center);
  }
  const auto decs = decompose_all(inst);
  for (int e = 0; e < static_cast<int>(decs.size()); ++e) {
    const auto seg = inst.segment(e);
    for (int k = 0; k < static_cast<int>(decs[e].cells.size()); ++k) {
      const auto& range = decs[e].cells[k].range;
      Cp2Edge edge{seg.at(range.t_lo), seg.at(range.t_hi), e, k};
      std::vector<Cp2Pair> cand;
      for (int j = 0; j < out.num_sites(); ++j) {
        if (!geom::box_two_disk_feasible(out.boxes[j], edge.a1, edge.a2,
                                         out.radii[j])) {
          continue;
        }
        Cp2Pair pair{j, {}, {}};
        const std::array<Point2, 2> ends{edge.a1, edge.a2};
        for (int t = 0; t < 2; ++t) {
          pair.dist_max[t] = geom::box_vertex_max_distance(out.boxes[j], ends[t]);
          pair.big_m[t] = std::max(pair.dist_max[t] - out.radii[j], 0.0);
        }
        cand.push_back(pair);
      }
      if (cand.empty()) {
        throw InstanceError("to_cp2: edge " + std::to_string(out.num_edges()) +
                            " has no candidate site");
      }
      out.edges.push_back(edge);
      out.candidates.push_back(std::move(cand));
    }
  }
  return out;
}

Cp1Instance c25_star_instance() {
  constexpr double kSpoke = 0.4;
  constexpr double kOffset = 0.28;  // disk center distance from the hub
  const Point2 hub{0.5, 0.5};
  const double step = 2.0 * std::numbers::pi / 5.0;

  Cp1Instance inst;
  inst.params = {5, 6, 0.11, 0.19, 0.0};
  inst.vertices.push_back(hub);
  for (int s = 0; s < 5; ++s) {
    const double a = std::numbers::pi / 2 + s * step;
    inst.vertices.push_back(hub + kSpoke * Point2{std::cos(a), std::sin(a)});
    inst.edges.emplace_back(0, s + 1);
  }
  // Column c sits between spokes c-1 and c; its circle passes through the hub.
  for (int c = 0; c < 5; ++c) {
    const double a = std::numbers::pi / 2 + (c - 0.5) * step;
    const Point2 center = hub + kOffset * Point2{std::cos(a), std::sin(a)};
    inst.sites.push_back({center, kOffset, 1.0});
  }
  return inst;
}

Cp1Instance c38_grid_instance() {
  // Work on the 2x2 square, then halve.
  const std::array<Point2, 8> cycle{{{0, 0}, {1, 0}, {2, 0}, {2, 1},
                                     {2, 2}, {1, 2}, {0, 2}, {0, 1}}};
  // The circle through cycle[0] and cycle[3] centered slightly below the
  // bottom side touches the neighbouring edges only at those two vertices.
  const Point2 base_center{1.3, -0.1};
  const double kRadius = std::max(geom::distance(base_center, cycle[0]),
                                  geom::distance(base_center, cycle[3])) *
                         (1.0 + 1e-12);
  auto rotate = [](Point2 p, int quarter_turns) {
    for (int k = 0; k < quarter_turns; ++k) p = {2.0 - p.y, p.x};
    return p;
  };
  auto reflect = [](Point2 p) { return Point2{2.0 - p.y, 2.0 - p.x}; };

  Cp1Instance inst;
  inst.params = {8, 8, 0.11, 0.19, 0.0};
  for (const Point2& p : cycle) inst.vertices.push_back(0.5 * p);
  for (int k = 0; k < 7; ++k) inst.edges.emplace_back(k, k + 1);
  inst.edges.emplace_back(0, 7);

  // Column c covers edges c-2, c-1, c.
  std::array<Site, 8> sites{};
  for (int k = 0; k < 4; ++k) {
    sites[(2 * k + 2) % 8] = {0.5 * rotate(base_center, k), 0.5 * kRadius, 1.0};
    sites[(2 * k + 3) % 8] = {0.5 * rotate(reflect(base_center), k),
                              0.5 * kRadius, 1.0};
  }
  inst.sites.assign(sites.begin(), sites.end());
  return inst;
}

}  // namespace slscover
