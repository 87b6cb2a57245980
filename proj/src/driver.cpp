#include "slscover/driver.hpp"

#include <cmath>

#include "slscover/cp2.hpp"
#include "slscover/scp.hpp"
#include "slscover/solution_io.hpp"

namespace slscover::cli {
namespace {

scp::PipelineConfig pipeline_config(const Cp1Instance& inst, const RunConfig& config,
                                    int num_cols) {
  scp::PipelineConfig pc;
  pc.presolve = config.presolve;
  pc.strong.strategy = config.sf_strategy;
  pc.strong.budget =
      config.sf_budget > 0.0 ? std::max(1, static_cast<int>(std::ceil(config.sf_budget * num_cols)))
                             : 0;
  for (const Site& s : inst.sites) pc.strong.site_points.push_back(s.center);
  pc.bnb.time_limit = config.time_limit;
  return pc;
}

SolveOutcome solve_scp_mode(const Cp1Instance& inst, const std::string& id,
                            const RunConfig& config) {
  SolveOutcome out;
  const ScpInstance scp_inst = to_scp(inst);
  const scp::PipelineConfig pc = pipeline_config(inst, config, scp_inst.num_cols());
  const scp::PipelineResult res = scp::solve_scp(scp_inst, pc);

  report::BenchRecord& r = out.record;
  r.instance = id;
  r.mode = "scp";
  r.reduction = res.report;
  r.reduced_time = res.solution.stats.bnb_seconds;
  r.objective = res.solution.objective;
  r.proved_optimal = res.solution.proved_optimal;
  if (config.compare) {
    scp::PipelineConfig plain = pc;
    plain.presolve = scp::PresolveLevel::None;
    r.original_time = scp::solve_scp(scp_inst, plain).solution.stats.bnb_seconds;
  }
  out.solution_json = io::to_json(res.solution);
  out.ledger_json = io::to_json(res.ledger);
  out.exit_code = r.proved_optimal ? kProved : kLimitHit;
  return out;
}

SolveOutcome solve_cp2_mode(const Cp1Instance& inst, const std::string& id,
                            const RunConfig& config) {
  SolveOutcome out;
  const double ell = config.ell.value_or(inst.params.ell);
  const ScpInstance scp_inst = to_scp(inst);
  scp::PipelineConfig pc = pipeline_config(inst, config, scp_inst.num_cols());
  pc.presolve = scp::PresolveLevel::Strong;
  const scp::PipelineResult cover = scp::solve_scp(scp_inst, pc);

  const Cp2Instance loc = to_cp2(inst, ell);
  const cp2::Cp2Model model = cp2::build_cp2_model(loc);
  const cp2::Cp2Solution start = cp2::initial_ub_from_scp(cover.solution.columns, loc);

  cp2::Cp2SolveConfig sc;
  sc.bnb.time_limit = config.time_limit;
  sc.warm_start = start;

  report::BenchRecord& r = out.record;
  r.instance = id;
  r.mode = "cp2";
  r.graph_vertices = static_cast<int>(inst.vertices.size());
  r.graph_edges = loc.num_edges();
  r.opt_scp = cover.solution.objective;
  r.sum_z_scp = static_cast<int>(cover.solution.columns.size());
  presolve::ReductionReport& red = r.reduction;
  red.original = {loc.num_edges(), loc.num_sites(), 0.0};
  red.rows_eliminated = red.rc_fixed = red.strong_fixed = red.original;
  red.upper_bound = start.objective;

  if (config.compare) r.original_time = cp2::solve_cp2(model, sc).stats.seconds;

  if (config.presolve != scp::PresolveLevel::None) {
    cp2::Cp2FixConfig fc;
    fc.strong = config.presolve == scp::PresolveLevel::Strong;
    const cp2::Cp2FixResult fix = cp2::strong_fix_cp2(model, start.objective, fc);
    red.n0_rc = fix.baseline_fixed;
    red.n0_sf = fix.fixed_sites(0);
    red.n1_sf = fix.fixed_sites(1);
    red.strong_fixed = {loc.num_edges(), loc.num_sites() - red.n0_sf - red.n1_sf, fix.seconds};
    sc.fixings = fix.ledger;
  }
  out.ledger_json = io::to_json(sc.fixings);

  const cp2::Cp2Solution sol = cp2::solve_cp2(model, sc);
  r.reduced_time = sol.stats.seconds;
  r.objective = sol.objective;
  r.opt_cp2 = sol.objective;
  r.sum_z_cp2 = static_cast<int>(sol.sites.size());
  r.proved_optimal = sol.proved_optimal;
  out.solution_json = io::to_json(sol);
  out.exit_code = r.proved_optimal ? kProved : kLimitHit;
  return out;
}

}  // namespace

SolveOutcome solve_instance(const Cp1Instance& inst, const std::string& id,
                            const RunConfig& config) {
  try {
    return config.mode == Mode::Scp ? solve_scp_mode(inst, id, config)
                                    : solve_cp2_mode(inst, id, config);
  } catch (const scp::CoverError& e) {
    SolveOutcome out;
    out.exit_code = kInfeasible;
    out.message = e.what();
    return out;
  } catch (const cp2::InfeasibleInstance& e) {
    SolveOutcome out;
    out.exit_code = kInfeasible;
    out.message = e.what();
    return out;
  } catch (const InstanceError& e) {
    // Raised by the conversions when some piece of an edge has no candidate.
    SolveOutcome out;
    out.exit_code = kInfeasible;
    out.message = e.what();
    return out;
  }
}

int combine_exit_codes(int a, int b) {
  const auto rank = [](int c) {
    switch (c) {
      case kProved: return 0;
      case kLimitHit: return 1;
      case kInfeasible: return 2;
      default: return 3;
    }
  };
  return rank(a) >= rank(b) ? a : b;
}

}  // namespace slscover::cli
