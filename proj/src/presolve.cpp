#include "slscover/presolve.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

#include <spdlog/spdlog.h>

#include "slscover/bnb.hpp"

namespace slscover::presolve {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double column_dot(std::span<const double> u, const std::vector<int>& support) {
  double s = 0.0;
  for (int i : support) s += u[i];
  return s;
}

// {u : u^T A <= w, u >= 0} with one LP row per column of A.
lp::LpModel dual_region(const CoverMatrix& a, std::span<const double> w) {
  lp::LpModel model(lp::ObjSense::Maximize);
  for (int i = 0; i < a.num_rows(); ++i) model.add_variable(0.0, lp::kInf, 1.0);
  const auto supports = a.column_supports();
  for (int j = 0; j < a.num_cols; ++j) {
    std::vector<lp::Term> terms;
    for (int i : supports[j]) terms.push_back({i, 1.0});
    model.add_constraint(std::move(terms), lp::RowSense::Leq, w[j]);
  }
  return model;
}

// {(u, v) : u^T A - v^T <= w, u, v >= 0}; u first, then v.
lp::LpModel augmented_dual_region(const CoverMatrix& a, std::span<const double> w) {
  lp::LpModel model(lp::ObjSense::Maximize);
  const int m = a.num_rows();
  for (int i = 0; i < m; ++i) model.add_variable(0.0, lp::kInf, 1.0);
  for (int j = 0; j < a.num_cols; ++j) model.add_variable(0.0, lp::kInf, -1.0);
  const auto supports = a.column_supports();
  for (int j = 0; j < a.num_cols; ++j) {
    std::vector<lp::Term> terms;
    for (int i : supports[j]) terms.push_back({i, 1.0});
    terms.push_back({m + j, -1.0});
    model.add_constraint(std::move(terms), lp::RowSense::Leq, w[j]);
  }
  return model;
}

std::vector<int> candidates_of(int n, const FixingLedger& ledger,
                               const std::vector<std::uint8_t>& solved, bool skip_fixed) {
  std::vector<int> out;
  for (int j = 0; j < n; ++j) {
    if (solved[j] || (skip_fixed && ledger.is_fixed(j))) continue;
    out.push_back(j);
  }
  return out;
}

}  // namespace

std::string_view to_string(FixRule rule) {
  switch (rule) {
    case FixRule::RC0: return "RC0";
    case FixRule::DPlus1: return "D+1";
    case FixRule::SF0: return "SF0";
    case FixRule::SF1: return "SF1";
    case FixRule::Propagation: return "propagation";
  }
  return "unknown";
}

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::All: return "all";
    case Strategy::Jaccard: return "jaccard";
    case Strategy::BestZ: return "bestz";
  }
  return "unknown";
}

std::optional<Strategy> parse_strategy(std::string_view text) {
  if (text == "all") return Strategy::All;
  if (text == "jaccard") return Strategy::Jaccard;
  if (text == "bestz") return Strategy::BestZ;
  return std::nullopt;
}

// --- ledger ---------------------------------------------------------------

bool FixingLedger::record(const FixEntry& entry) {
  if (entry.value != 0 && entry.value != 1) throw LedgerConflict("fixed value must be 0 or 1");
  if (!(entry.bound > entry.ub)) {
    throw LedgerConflict("column " + std::to_string(entry.column) +
                         ": certifying bound does not exceed the upper bound");
  }
  if (const auto it = index_.find(entry.column); it != index_.end()) {
    if (entries_[it->second].value != entry.value) {
      throw LedgerConflict("column " + std::to_string(entry.column) +
                           " fixed to both 0 and 1");
    }
    return false;
  }
  index_.emplace(entry.column, entries_.size());
  entries_.push_back(entry);
  return true;
}

void FixingLedger::merge(const FixingLedger& other) {
  for (const FixEntry& e : other.entries_) record(e);
}

std::optional<int> FixingLedger::value(int column) const {
  const FixEntry* e = find(column);
  return e ? std::optional<int>(e->value) : std::nullopt;
}

const FixEntry* FixingLedger::find(int column) const {
  const auto it = index_.find(column);
  return it == index_.end() ? nullptr : &entries_[it->second];
}

std::vector<int> FixingLedger::fixed_to(int value) const {
  std::vector<int> out;
  for (const auto& [col, idx] : index_) {
    if (entries_[idx].value == value) out.push_back(col);
  }
  return out;
}

int FixingLedger::count(int value) const {
  return static_cast<int>(std::count_if(entries_.begin(), entries_.end(),
                                        [&](const FixEntry& e) { return e.value == value; }));
}

int FixingLedger::count(FixRule rule) const {
  return static_cast<int>(std::count_if(entries_.begin(), entries_.end(),
                                        [&](const FixEntry& e) { return e.rule == rule; }));
}

FixingLedger FixingLedger::remapped(std::span<const int> map) const {
  FixingLedger out;
  for (FixEntry e : entries_) {
    e.column = map[e.column];
    if (e.source >= 0) e.source = map[e.source];
    out.record(e);
  }
  return out;
}

// --- row elimination --------------------------------------------------------

RowElimination eliminate_dominated_rows(const CoverMatrix& a) {
  const int m = a.num_rows();
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int r, int s) {
    return a.rows[r].size() < a.rows[s].size();
  });

  std::vector<std::vector<int>> kept_by_first(a.num_cols);
  std::vector<int> stamp(a.num_cols, -1);
  std::vector<std::uint8_t> kept(m, 0);
  for (int s : order) {
    const auto& row = a.rows[s];
    if (row.empty()) {
      kept[s] = 1;
      continue;
    }
    for (int c : row) stamp[c] = s;
    bool dominated = false;
    for (int c : row) {
      for (int r : kept_by_first[c]) {
        const auto& small = a.rows[r];
        if (std::all_of(small.begin(), small.end(), [&](int q) { return stamp[q] == s; })) {
          dominated = true;
          break;
        }
      }
      if (dominated) break;
    }
    if (!dominated) {
      kept[s] = 1;
      kept_by_first[row.front()].push_back(s);
    }
  }

  RowElimination out;
  out.matrix.num_cols = a.num_cols;
  for (int i = 0; i < m; ++i) {
    if (!kept[i]) continue;
    out.matrix.rows.push_back(a.rows[i]);
    out.kept_rows.push_back(i);
  }
  return out;
}

// --- dual certificates and the fixing tests ---------------------------------

std::vector<double> certify_dual(const CoverMatrix& a, std::span<const double> w,
                                 std::span<const double> u) {
  if (static_cast<int>(u.size()) != a.num_rows()) {
    throw CertificateError("dual vector length does not match the row count");
  }
  std::vector<double> out(u.begin(), u.end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!(out[i] >= -lp::kFeasTol)) {
      throw CertificateError("dual component " + std::to_string(i) + " is negative");
    }
    out[i] = std::max(out[i], 0.0);
  }
  const auto supports = a.column_supports();
  double scale = 1.0;
  for (int j = 0; j < a.num_cols; ++j) {
    const double s = column_dot(out, supports[j]);
    if (s > w[j] + lp::kFeasTol * (1.0 + w[j])) {
      throw CertificateError("dual constraint of column " + std::to_string(j) + " is violated");
    }
    if (s > w[j]) scale = std::min(scale, w[j] / s);
  }
  if (scale < 1.0) {
    scale *= 1.0 - 4.0 * std::numeric_limits<double>::epsilon();
    for (double& v : out) v *= scale;
  }
  return out;
}

double rc_bound(const CoverMatrix& /*a*/, std::span<const double> w, std::span<const double> u,
                const std::vector<std::vector<int>>& supports, int column) {
  const double ue = std::accumulate(u.begin(), u.end(), 0.0);
  return w[column] + ue - column_dot(u, supports[column]);
}

std::optional<long> rc_integer_bound(const CoverMatrix& a, std::span<const double> w,
                                     std::span<const double> u, double ub, int column) {
  const auto supports = a.column_supports();
  const double reduced = w[column] - column_dot(u, supports[column]);
  if (!(reduced > 0.0)) return std::nullopt;
  const double ue = std::accumulate(u.begin(), u.end(), 0.0);
  return static_cast<long>(std::floor((ub - ue) / reduced));
}

FixingLedger reduced_cost_fix(const CoverMatrix& a, std::span<const double> w,
                              std::span<const double> u, double ub, FixRule rule, int source) {
  const std::vector<double> safe = certify_dual(a, w, u);
  const auto supports = a.column_supports();
  FixingLedger ledger;
  for (int j = 0; j < a.num_cols; ++j) {
    const double bound = rc_bound(a, w, safe, supports, j);
    if (bound > ub + kFixEps) ledger.record({j, 0, rule, bound, ub, source});
  }
  return ledger;
}

FixingLedger fix_at_one(const CoverMatrix& a, std::span<const double> w,
                        std::span<const double> u, std::span<const double> v, double ub) {
  if (static_cast<int>(u.size()) != a.num_rows() || static_cast<int>(v.size()) != a.num_cols) {
    throw CertificateError("augmented dual point has the wrong length");
  }
  std::vector<double> uu(u.begin(), u.end());
  std::vector<double> vv(v.begin(), v.end());
  for (double& x : uu) {
    if (!(x >= -lp::kFeasTol)) throw CertificateError("negative u component");
    x = std::max(x, 0.0);
  }
  for (double& x : vv) {
    if (!(x >= -lp::kFeasTol)) throw CertificateError("negative v component");
    x = std::max(x, 0.0);
  }
  const auto supports = a.column_supports();
  for (int j = 0; j < a.num_cols; ++j) {
    const double s = column_dot(uu, supports[j]);
    if (s - vv[j] > w[j] + lp::kFeasTol * (1.0 + w[j])) {
      throw CertificateError("augmented dual constraint of column " + std::to_string(j) +
                             " is violated");
    }
    // Raising v_j restores exact feasibility and only lowers the bounds.
    vv[j] = std::max(vv[j], s - w[j]);
  }
  const double ue = std::accumulate(uu.begin(), uu.end(), 0.0);
  const double ve = std::accumulate(vv.begin(), vv.end(), 0.0);
  FixingLedger ledger;
  for (int j = 0; j < a.num_cols; ++j) {
    const double bound = ue - ve + vv[j];
    if (bound > ub + kFixEps) ledger.record({j, 1, FixRule::DPlus1, bound, ub, -1});
  }
  return ledger;
}

DualRelaxation solve_dual_relaxation(const CoverMatrix& a, std::span<const double> w) {
  DualRelaxation out;
  const lp::LpSolution sol = lp::solve_lp(dual_region(a, w));
  out.status = sol.status;
  if (!sol.optimal()) return out;
  out.value = sol.objective;
  out.u = certify_dual(a, w, sol.primal);
  return out;
}

// --- selection rules --------------------------------------------------------

double jaccard_similarity(std::span<const int> support_a, std::span<const int> support_b) {
  std::size_t common = 0;
  auto ia = support_a.begin();
  auto ib = support_b.begin();
  while (ia != support_a.end() && ib != support_b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++common;
      ++ia;
      ++ib;
    }
  }
  const std::size_t uni = support_a.size() + support_b.size() - common;
  return uni == 0 ? 0.0 : static_cast<double>(common) / static_cast<double>(uni);
}

int jaccard_start(std::span<const geom::Point2> sites) {
  int best = 0;
  for (int j = 1; j < static_cast<int>(sites.size()); ++j) {
    const auto& p = sites[j];
    const auto& q = sites[best];
    if (p.y > q.y || (p.y == q.y && p.x < q.x)) best = j;
  }
  return best;
}

int select_next_jaccard(const std::vector<std::vector<int>>& supports, int current,
                        std::span<const int> candidates) {
  int best = -1;
  double best_sim = -1.0;
  for (int j : candidates) {
    const double sim = jaccard_similarity(supports[j], supports[current]);
    if (sim > best_sim || (sim == best_sim && j < best)) {
      best_sim = sim;
      best = j;
    }
  }
  return best;
}

int select_next_bestz(const CoverMatrix& a, std::span<const double> w, double ub,
                      std::span<const double> u, const std::vector<std::vector<int>>& supports,
                      std::span<const int> candidates) {
  int best = -1;
  double best_val = -lp::kInf;
  for (int j : candidates) {
    const double val = rc_bound(a, w, u, supports, j) - ub;
    if (val > best_val || (val == best_val && j < best)) {
      best_val = val;
      best = j;
    }
  }
  return best;
}

int bestz_start(const CoverMatrix& /*a*/, std::span<const double> w, double ub,
                std::span<const double> u, const std::vector<std::vector<int>>& supports,
                std::span<const int> candidates) {
  const double ue = std::accumulate(u.begin(), u.end(), 0.0);
  int best = -1;
  double best_ratio = lp::kInf;
  for (int j : candidates) {
    const double reduced = w[j] - column_dot(u, supports[j]);
    if (!(reduced > 0.0)) continue;
    const double ratio = (ub - ue) / reduced;
    if (ratio < best_ratio || (ratio == best_ratio && j < best)) {
      best_ratio = ratio;
      best = j;
    }
  }
  if (best < 0 && !candidates.empty()) best = candidates.front();
  return best;
}

// --- strong fixing ------------------------------------------------------------

StrongFixResult strong_fix(const CoverMatrix& a, std::span<const double> w, double ub,
                           const StrongFixConfig& config) {
  const auto t0 = Clock::now();
  StrongFixResult res;
  const int m = a.num_rows();
  const int n = a.num_cols;
  if (n == 0) return res;
  const auto supports = a.column_supports();

  lp::SimplexSolver solver(dual_region(a, w));
  const lp::LpSolution root = solver.solve();
  res.lp_iterations += root.iterations;
  if (!root.optimal()) {
    spdlog::warn("strong_fix: dual relaxation ended with status {}", lp::to_string(root.status));
    res.failures = 1;
    res.seconds = seconds_since(t0);
    return res;
  }
  res.relaxation_value = root.objective;
  std::vector<double> last_u = certify_dual(a, w, root.primal);
  const auto root_state = solver.snapshot();

  std::optional<lp::SimplexSolver> plus;
  std::shared_ptr<const lp::SimplexSolver::Snapshot> plus_state;
  if (config.fix_at_one) {
    plus.emplace(augmented_dual_region(a, w));
    const lp::LpSolution proot = plus->solve();
    res.lp_iterations += proot.iterations;
    if (proot.optimal()) {
      plus_state = plus->snapshot();
    } else {
      plus.reset();
    }
  }

  const int budget = config.budget > 0 ? std::min(config.budget, n) : n;
  std::vector<std::uint8_t> solved(n, 0);
  std::vector<double> objective(m, 1.0);
  std::vector<double> plus_objective(m + n);

  int current = -1;
  while (static_cast<int>(res.solved.size()) < budget) {
    const auto cand = candidates_of(n, res.ledger, solved, config.skip_fixed);
    if (cand.empty()) break;
    int j = -1;
    switch (config.strategy) {
      case Strategy::All:
        j = cand.front();
        break;
      case Strategy::Jaccard:
        if (current < 0) {
          current = static_cast<int>(config.site_points.size()) == n
                        ? jaccard_start(config.site_points)
                        : 0;
          if (std::binary_search(cand.begin(), cand.end(), current)) {
            j = current;
            break;
          }
        }
        j = select_next_jaccard(supports, current, cand);
        break;
      case Strategy::BestZ:
        j = res.solved.empty() ? bestz_start(a, w, ub, last_u, supports, cand)
                               : select_next_bestz(a, w, ub, last_u, supports, cand);
        break;
    }
    if (j < 0) break;
    current = j;
    solved[j] = 1;

    solver.restore(*root_state);
    std::fill(objective.begin(), objective.end(), 1.0);
    for (int i : supports[j]) objective[i] = 0.0;
    const lp::LpSolution sol = solver.resolve_with_objective(objective);
    res.lp_iterations += sol.iterations;

    std::vector<int> fixable;
    double value = 0.0;
    if (sol.status == lp::LpStatus::Unbounded) {
      value = lp::kInf;
      fixable.push_back(j);
      res.ledger.record({j, 0, FixRule::SF0, value, ub, j});
    } else if (!sol.optimal()) {
      spdlog::warn("strong_fix: subproblem {} ended with status {}", j, lp::to_string(sol.status));
      ++res.failures;
      res.solved.push_back(j);
      res.values.push_back(std::nan(""));
      res.fixable_sets.emplace_back();
      continue;
    } else {
      std::vector<double> u;
      try {
        u = certify_dual(a, w, sol.primal);
      } catch (const CertificateError& e) {
        spdlog::warn("strong_fix: subproblem {} certificate rejected: {}", j, e.what());
        ++res.failures;
        res.solved.push_back(j);
        res.values.push_back(std::nan(""));
        res.fixable_sets.emplace_back();
        continue;
      }
      value = rc_bound(a, w, u, supports, j);
      for (int i = 0; i < n; ++i) {
        const double b = i == j ? value : rc_bound(a, w, u, supports, i);
        if (b > ub + kFixEps) fixable.push_back(i);
      }
      if (value > ub + kFixEps) res.ledger.record({j, 0, FixRule::SF0, value, ub, j});
      if (config.opportunistic) {
        for (int i : fixable) {
          if (i == j || res.ledger.is_fixed(i)) continue;
          res.ledger.record({i, 0, FixRule::RC0, rc_bound(a, w, u, supports, i), ub, j});
        }
      }
      last_u = std::move(u);
    }

    if (plus && !res.ledger.is_fixed(j)) {
      plus->restore(*plus_state);
      std::fill(plus_objective.begin(), plus_objective.begin() + m, 1.0);
      std::fill(plus_objective.begin() + m, plus_objective.end(), -1.0);
      plus_objective[m + j] = 0.0;
      const lp::LpSolution ps = plus->resolve_with_objective(plus_objective);
      res.lp_iterations += ps.iterations;
      if (ps.status == lp::LpStatus::Unbounded) {
        res.ledger.record({j, 1, FixRule::SF1, lp::kInf, ub, j});
      } else if (ps.optimal()) {
        try {
          const std::span<const double> pu(ps.primal.data(), m);
          const std::span<const double> pv(ps.primal.data() + m, n);
          const FixingLedger one = fix_at_one(a, w, pu, pv, ub);
          if (const FixEntry* e = one.find(j)) {
            res.ledger.record({j, 1, FixRule::SF1, e->bound, ub, j});
          }
        } catch (const CertificateError& e) {
          spdlog::warn("strong_fix: augmented subproblem {} rejected: {}", j, e.what());
          ++res.failures;
        }
      } else {
        ++res.failures;
      }
    }

    res.solved.push_back(j);
    res.values.push_back(value);
    res.fixable_sets.push_back(std::move(fixable));
  }
  res.seconds = seconds_since(t0);
  return res;
}

// --- Best-k -------------------------------------------------------------------

BestKResult best_k_oracle(const std::vector<std::vector<int>>& sets, int k,
                          std::span<const int> hint, double time_limit) {
  BestKResult res;
  const int count = static_cast<int>(sets.size());
  std::vector<std::vector<int>> norm(count);
  for (int j = 0; j < count; ++j) {
    norm[j] = sets[j];
    std::sort(norm[j].begin(), norm[j].end());
    norm[j].erase(std::unique(norm[j].begin(), norm[j].end()), norm[j].end());
  }
  auto subset_of = [](const std::vector<int>& small, const std::vector<int>& big) {
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
  };

  // Maximal distinct families; `owner[j]` is the kept family covering j.
  std::vector<int> order(count);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int p, int q) { return norm[p].size() > norm[q].size(); });
  std::vector<int> kept;
  std::vector<int> owner(count, -1);
  for (int j : order) {
    if (norm[j].empty()) continue;
    for (int r : kept) {
      if (subset_of(norm[j], norm[r])) {
        owner[j] = r;
        break;
      }
    }
    if (owner[j] < 0) {
      owner[j] = j;
      kept.push_back(j);
    }
  }
  std::sort(kept.begin(), kept.end());

  auto union_size = [&](const std::vector<int>& chosen) {
    std::vector<int> all;
    for (int j : chosen) all.insert(all.end(), norm[j].begin(), norm[j].end());
    std::sort(all.begin(), all.end());
    return static_cast<int>(std::unique(all.begin(), all.end()) - all.begin());
  };

  if (k <= 0) {
    res.proved_optimal = true;
    return res;
  }
  if (static_cast<int>(kept.size()) <= k) {
    res.chosen = kept;
    res.fixed_count = union_size(kept);
    res.proved_optimal = true;
    return res;
  }

  // Greedy maximum coverage as a starting incumbent.
  std::vector<int> greedy;
  {
    std::vector<std::uint8_t> covered;
    for (int j : kept) {
      for (int e : norm[j]) {
        if (e >= static_cast<int>(covered.size())) covered.resize(e + 1, 0);
      }
    }
    std::vector<std::uint8_t> used(count, 0);
    for (int step = 0; step < k; ++step) {
      int best = -1, best_gain = -1;
      for (int j : kept) {
        if (used[j]) continue;
        int gain = 0;
        for (int e : norm[j]) gain += !covered[e];
        if (gain > best_gain) {
          best_gain = gain;
          best = j;
        }
      }
      used[best] = 1;
      greedy.push_back(best);
      for (int e : norm[best]) covered[e] = 1;
    }
  }
  std::vector<int> start = greedy;
  if (!hint.empty()) {
    std::vector<int> mapped;
    for (int j : hint) {
      if (j >= 0 && j < count && owner[j] >= 0) mapped.push_back(owner[j]);
    }
    std::sort(mapped.begin(), mapped.end());
    mapped.erase(std::unique(mapped.begin(), mapped.end()), mapped.end());
    if (static_cast<int>(mapped.size()) <= k && union_size(mapped) > union_size(start)) {
      start = mapped;
    }
  }

  // Elements are relabeled densely; y is continuous because it is integral
  // at any LP optimum once x is fixed.
  std::vector<int> elements;
  for (int j : kept) elements.insert(elements.end(), norm[j].begin(), norm[j].end());
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  const int nk = static_cast<int>(kept.size());
  const int ne = static_cast<int>(elements.size());
  lp::LpModel model(lp::ObjSense::Maximize);
  for (int p = 0; p < nk; ++p) model.add_variable(0.0, 1.0, 0.0);
  for (int e = 0; e < ne; ++e) model.add_variable(0.0, 1.0, 1.0);
  std::vector<std::vector<lp::Term>> rows(ne);
  for (int p = 0; p < nk; ++p) {
    for (int e : norm[kept[p]]) {
      const int idx = static_cast<int>(
          std::lower_bound(elements.begin(), elements.end(), e) - elements.begin());
      rows[idx].push_back({p, 1.0});
    }
  }
  for (int e = 0; e < ne; ++e) {
    rows[e].push_back({nk + e, -1.0});
    model.add_constraint(std::move(rows[e]), lp::RowSense::Geq, 0.0);
  }
  std::vector<lp::Term> budget_row;
  for (int p = 0; p < nk; ++p) budget_row.push_back({p, 1.0});
  model.add_constraint(std::move(budget_row), lp::RowSense::Leq, static_cast<double>(k));

  std::vector<double> hint_point(nk + ne, 0.0);
  for (int j : start) {
    const int p = static_cast<int>(std::lower_bound(kept.begin(), kept.end(), j) - kept.begin());
    hint_point[p] = 1.0;
    for (int e : norm[j]) {
      const int idx = static_cast<int>(
          std::lower_bound(elements.begin(), elements.end(), e) - elements.begin());
      hint_point[nk + idx] = 1.0;
    }
  }
  std::vector<int> ints(nk);
  std::iota(ints.begin(), ints.end(), 0);
  lp::BnbConfig cfg;
  cfg.time_limit = time_limit;
  const lp::BnbResult bnb = lp::branch_and_bound(model, ints, cfg, &hint_point);
  res.nodes = bnb.nodes;
  res.proved_optimal = bnb.proved_optimal;
  if (bnb.has_incumbent()) {
    for (int p = 0; p < nk; ++p) {
      if (bnb.incumbent[p] > 0.5) res.chosen.push_back(kept[p]);
    }
  } else {
    res.chosen = start;
  }
  res.fixed_count = union_size(res.chosen);
  return res;
}

// --- report -------------------------------------------------------------------

std::string report_csv_header() {
  return "instance,m,n,matrix_reduction_m,matrix_reduction_n,matrix_reduction_time,"
         "reduced_cost_fixing_m,reduced_cost_fixing_n,reduced_cost_fixing_time,"
         "strong_fixing_m,strong_fixing_n,strong_fixing_time,n0_RC,n0_SF,n1_SF";
}

std::string report_csv_row(std::string_view instance_id, const ReductionReport& r) {
  std::ostringstream out;
  out.precision(6);
  out << instance_id << "," << r.original.m << "," << r.original.n << ","
      << r.rows_eliminated.m << "," << r.rows_eliminated.n << "," << r.rows_eliminated.seconds
      << "," << r.rc_fixed.m << "," << r.rc_fixed.n << "," << r.rc_fixed.seconds << ","
      << r.strong_fixed.m << "," << r.strong_fixed.n << "," << r.strong_fixed.seconds << ","
      << r.n0_rc << "," << r.n0_sf << "," << r.n1_sf;
  return out.str();
}

// --- reduced problems ---------------------------------------------------------

ReducedProblem ReducedProblem::identity(const CoverMatrix& a, std::span<const double> w) {
  ReducedProblem p;
  p.matrix = a;
  p.weights.assign(w.begin(), w.end());
  p.col_map.resize(a.num_cols);
  std::iota(p.col_map.begin(), p.col_map.end(), 0);
  p.row_map.resize(a.num_rows());
  std::iota(p.row_map.begin(), p.row_map.end(), 0);
  return p;
}

ReducedProblem eliminate_rows(const ReducedProblem& base) {
  RowElimination elim = eliminate_dominated_rows(base.matrix);
  ReducedProblem out = base;
  out.matrix = std::move(elim.matrix);
  out.row_map.clear();
  for (int r : elim.kept_rows) out.row_map.push_back(base.row_map[r]);
  return out;
}

ReducedProblem apply_fixings(const ReducedProblem& base, const FixingLedger& ledger) {
  const int n = base.matrix.num_cols;
  std::vector<int> state(n, -1);
  for (const FixEntry& e : ledger.entries()) state.at(e.column) = e.value;

  ReducedProblem out;
  out.offset = base.offset;
  out.forced_one = base.forced_one;
  std::vector<int> new_index(n, -1);
  for (int j = 0; j < n; ++j) {
    if (state[j] == 1) {
      out.offset += base.weights[j];
      out.forced_one.push_back(base.col_map[j]);
    } else if (state[j] < 0) {
      new_index[j] = static_cast<int>(out.col_map.size());
      out.col_map.push_back(base.col_map[j]);
      out.weights.push_back(base.weights[j]);
    }
  }
  std::sort(out.forced_one.begin(), out.forced_one.end());
  out.matrix.num_cols = static_cast<int>(out.col_map.size());
  for (int i = 0; i < base.matrix.num_rows(); ++i) {
    const auto& row = base.matrix.rows[i];
    if (std::any_of(row.begin(), row.end(), [&](int j) { return state[j] == 1; })) continue;
    std::vector<int> reduced;
    for (int j : row) {
      if (new_index[j] >= 0) reduced.push_back(new_index[j]);
    }
    if (reduced.empty()) {
      throw LedgerConflict("fixings leave original row " + std::to_string(base.row_map[i]) +
                           " uncoverable");
    }
    out.matrix.rows.push_back(std::move(reduced));
    out.row_map.push_back(base.row_map[i]);
  }
  return eliminate_rows(out);
}

}  // namespace slscover::presolve
