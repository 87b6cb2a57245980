// slscover: generate instances, solve them, summarize records, draw them.

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include "slscover/driver.hpp"
#include "slscover/instance.hpp"
#include "slscover/instance_io.hpp"
#include "slscover/report.hpp"
#include "slscover/run_config.hpp"
#include "slscover/solution_io.hpp"
#include "slscover/stats.hpp"
#include "slscover/svg.hpp"

namespace fs = std::filesystem;
using namespace slscover;
using cli::ConfigError;
using cli::RunConfig;

namespace {

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path.string() + ": cannot open for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw std::runtime_error(path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  out << text;
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

Cp1Instance load_instance(const fs::path& path) {
  try {
    return instance_from_json(read_file(path));
  } catch (const InstanceError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

/// Flags that were given on the command line override the config file.
class Overlay {
 public:
  template <class Copy>
  void add(CLI::Option* opt, Copy copy) {
    entries_.emplace_back(opt, std::function<void(RunConfig&, const RunConfig&)>(copy));
  }

  void apply(RunConfig& dst, const RunConfig& flags) const {
    for (const auto& [opt, copy] : entries_) {
      if (opt->count() > 0) copy(dst, flags);
    }
  }

 private:
  std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&, const RunConfig&)>>>
      entries_;
};

#define SLS_FIELD(field) [](RunConfig& d, const RunConfig& s) { d.field = s.field; }

int run_generate(const RunConfig& c) {
  const int nu = c.resolved_nu();
  const double ell = c.resolved_ell();
  const GeneratorParams params{c.n, nu, c.r_min, c.r_max, ell};
  for (std::uint64_t seed = c.seeds.first; seed <= c.seeds.last; ++seed) {
    const Cp1Instance inst = generate_repaired(params, seed);
    const fs::path path =
        c.output_dir / fmt::format("inst_n{}_nu{}_s{}.json", c.n, nu, seed);
    write_instance(path, inst);
    std::cout << path.string() << "\n";
    if (seed == c.seeds.last) break;  // guards against wrap-around at the maximum seed
  }
  return cli::kProved;
}

struct Job {
  fs::path path;
  Cp1Instance inst;
  cli::SolveOutcome outcome;
  bool loaded = false;
};

int run_solve(const RunConfig& c, const fs::path& records_path) {
  std::vector<Job> jobs(c.instances.size());
  int code = cli::kProved;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    jobs[i].path = c.instances[i];
    try {
      jobs[i].inst = load_instance(c.instances[i]);
      jobs[i].loaded = true;
    } catch (const InputError& e) {
      std::cerr << "error: " << e.what() << "\n";
      code = cli::combine_exit_codes(code, cli::kInputError);
    }
  }

  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      Job& job = jobs[i];
      if (!job.loaded) continue;
      job.outcome = cli::solve_instance(job.inst, job.path.stem().string(), c);
      const std::lock_guard lock(log_mutex);
      spdlog::info("{}: exit {}", job.path.string(), job.outcome.exit_code);
    }
  };
  const int workers = std::min<int>(c.jobs, static_cast<int>(jobs.size()));
  {
    std::vector<std::jthread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
  }

  // Single collector: artifacts are written in input order after all solves.
  const std::string mode = cli::to_string(c.mode);
  std::string csv = report::csv_header() + "\n";
  for (const Job& job : jobs) {
    if (!job.loaded) continue;
    code = cli::combine_exit_codes(code, job.outcome.exit_code);
    if (!job.outcome.message.empty()) {
      std::cerr << job.path.string() << ": " << job.outcome.message << "\n";
    }
    if (job.outcome.solution_json.empty()) continue;
    const std::string stem = job.path.stem().string();
    write_file(c.output_dir / (stem + "." + mode + ".solution.json"), job.outcome.solution_json);
    write_file(c.output_dir / (stem + "." + mode + ".ledger.json"), job.outcome.ledger_json);
    csv += report::csv_row(job.outcome.record) + "\n";
    std::cout << stem << " " << mode << " objective " << format_real(job.outcome.record.objective)
              << (job.outcome.record.proved_optimal ? " optimal" : " limit") << "\n";
  }
  write_file(records_path, csv);
  return code;
}

std::string fixed(double v, int digits = 2) { return fmt::format("{:.{}f}", v, digits); }

int run_report(const std::vector<fs::path>& files, double shift) {
  std::vector<report::BenchRecord> records;
  for (const fs::path& f : files) {
    try {
      for (report::BenchRecord& r : report::parse_csv(read_file(f))) records.push_back(std::move(r));
    } catch (const report::RecordError& e) {
      throw InputError(f.string() + ": " + e.what());
    }
  }
  std::map<std::pair<std::string, int>, std::vector<const report::BenchRecord*>> groups;
  for (const report::BenchRecord& r : records) groups[{r.mode, r.reduction.original.n}].push_back(&r);

  for (const auto& [key, group] : groups) {
    const auto mean = [&](auto get) {
      std::vector<double> v;
      for (const report::BenchRecord* r : group) {
        if (const std::optional<double> x = get(*r)) v.push_back(*x);
      }
      return v.empty() ? std::string("-") : fixed(stats::shifted_geomean(v, shift));
    };
    using R = report::BenchRecord;
    std::cout << "mode " << key.first << "  n " << key.second << "  instances " << group.size()
              << "  (shifted geometric means, shift " << fixed(shift, 1) << ")\n";
    std::cout << "  m " << mean([](const R& r) { return std::optional<double>(r.reduction.original.m); })
              << "  original time "
              << mean([](const R& r) { return r.original_time; })
              << "\n  matrix reduction m/n/time "
              << mean([](const R& r) { return std::optional<double>(r.reduction.rows_eliminated.m); }) << " "
              << mean([](const R& r) { return std::optional<double>(r.reduction.rows_eliminated.n); }) << " "
              << mean([](const R& r) { return std::optional<double>(r.reduction.rows_eliminated.seconds); })
              << "\n  reduced-cost fixing m/n/time "
              << mean([](const R& r) { return std::optional<double>(r.reduction.rc_fixed.m); }) << " "
              << mean([](const R& r) { return std::optional<double>(r.reduction.rc_fixed.n); }) << " "
              << mean([](const R& r) { return std::optional<double>(r.reduction.rc_fixed.seconds); })
              << "\n  strong fixing m/n/time "
              << mean([](const R& r) { return std::optional<double>(r.reduction.strong_fixed.m); }) << " "
              << mean([](const R& r) { return std::optional<double>(r.reduction.strong_fixed.n); }) << " "
              << mean([](const R& r) { return std::optional<double>(r.reduction.strong_fixed.seconds); })
              << "\n  reduced time " << mean([](const R& r) { return std::optional<double>(r.reduced_time); })
              << "  n0_RC " << mean([](const R& r) { return std::optional<double>(r.reduction.n0_rc); })
              << "  n0_SF " << mean([](const R& r) { return std::optional<double>(r.reduction.n0_sf); })
              << "  n1_SF " << mean([](const R& r) { return std::optional<double>(r.reduction.n1_sf); })
              << "\n";
    if (key.first == "cp2") {
      std::cout << "  opt SCP/CP2 " << mean([](const R& r) { return r.opt_scp; }) << " "
                << mean([](const R& r) { return r.opt_cp2; }) << "  sum z SCP/CP2 "
                << mean([](const R& r) { return r.sum_z_scp ? std::optional<double>(*r.sum_z_scp) : std::nullopt; })
                << " "
                << mean([](const R& r) { return r.sum_z_cp2 ? std::optional<double>(*r.sum_z_cp2) : std::nullopt; })
                << "\n";
    }

    std::vector<double> factors;
    int flagged = 0;
    for (const report::BenchRecord* r : group) {
      if (!r->original_time) continue;
      const stats::Ratio f = stats::time_reduction_factor(r->reduced_time, *r->original_time);
      flagged += f.undefined;
      factors.push_back(f.value);
    }
    if (factors.empty()) {
      std::cout << "  time-reduction factor: no original times (solve with --compare)\n";
      continue;
    }
    double sum = 0.0;
    for (double f : factors) sum += f;
    std::cout << "  time-reduction factor mean " << fixed(sum / factors.size());
    if (flagged > 0) std::cout << " (" << flagged << " with zero original time)";
    std::cout << "\n  instances with factor <=";
    const stats::FactorHistogram h = stats::factor_histogram(factors);
    int cumulative = 0;
    for (int b = 0; b < 10; ++b) {
      cumulative += h.counts[b];
      std::cout << " " << fixed((b + 1) / 10.0, 1) << ":" << cumulative;
    }
    std::cout << "  (above 1: " << h.counts[10] << ")\n";
  }
  return cli::kProved;
}

int run_plot(const fs::path& instance_path, const std::optional<fs::path>& solution_path,
             std::optional<double> ell, const fs::path& out_path) {
  const Cp1Instance inst = load_instance(instance_path);
  std::string doc;
  if (!solution_path) {
    doc = svg::render_cover(inst, {});
  } else {
    const std::string text = read_file(*solution_path);
    try {
      if (io::solution_kind(text) == "scp") {
        doc = svg::render_cover(inst, io::cover_solution_from_json(text).columns);
      } else {
        const double side = ell.value_or(inst.params.ell);
        const Cp2Instance loc = to_cp2(inst, side);
        doc = svg::render_location(inst, side, io::cp2_solution_from_json(text, loc));
      }
    } catch (const io::SchemaError& e) {
      throw InputError(solution_path->string() + ": " + e.what());
    } catch (const std::out_of_range& e) {
      throw InputError(solution_path->string() + ": " + e.what());
    }
  }
  write_file(out_path, doc);
  std::cout << out_path.string() << "\n";
  return cli::kProved;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Covering edges of a planar graph with disks"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Log progress");

  RunConfig flags;
  if (const char* env = std::getenv("SLSCOVER_OUTPUT_DIR"); env != nullptr && *env != '\0') {
    flags.output_dir = env;
  }
  std::string config_path;
  Overlay overlay;
  int nu_flag = 0;
  double ell_flag = 0.0;
  std::string seeds_text = "1";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON file with the same settings as the flags")
        ->check(CLI::ExistingFile);
    overlay.add(sub->add_option("-o,--out", flags.output_dir,
                                "Output directory (default $SLSCOVER_OUTPUT_DIR or .)"),
                SLS_FIELD(output_dir));
  };

  CLI::App* gen = app.add_subcommand("generate", "Write one JSON instance per seed");
  add_common(gen);
  overlay.add(gen->add_option("--n", flags.n, "Candidate sites"), SLS_FIELD(n));
  CLI::Option* nu_opt = gen->add_option("--nu", nu_flag, "Graph vertices");
  overlay.add(nu_opt, [&](RunConfig& d, const RunConfig&) { d.nu = nu_flag; });
  overlay.add(gen->add_option("--family", flags.family, "Defaults for nu and ell: scp or cp2")
                  ->check(CLI::IsMember({"scp", "cp2"})),
              SLS_FIELD(family));
  overlay.add(gen->add_option("--r-min", flags.r_min, "Smallest radius"), SLS_FIELD(r_min));
  overlay.add(gen->add_option("--r-max", flags.r_max, "Largest radius"), SLS_FIELD(r_max));
  CLI::Option* gen_ell = gen->add_option("--ell", ell_flag, "Box side stored in the instance");
  overlay.add(gen_ell, [&](RunConfig& d, const RunConfig&) { d.ell = ell_flag; });
  CLI::Option* seeds_opt = gen->add_option("--seeds", seeds_text, "Seed or range A-B");
  overlay.add(seeds_opt, [&](RunConfig& d, const RunConfig&) {
    d.seeds = cli::parse_seed_range(seeds_text);
  });

  CLI::App* solve = app.add_subcommand("solve", "Solve instances and write solutions and records");
  add_common(solve);
  overlay.add(solve->add_option("instances", flags.instances, "Instance files"),
              SLS_FIELD(instances));
  std::string mode_text;
  overlay.add(solve->add_option("--mode", mode_text, "scp or cp2")
                  ->check(CLI::IsMember({"scp", "cp2"})),
              [&](RunConfig& d, const RunConfig&) { d.mode = *cli::parse_mode(mode_text); });
  std::string presolve_text;
  overlay.add(solve->add_option("--presolve", presolve_text, "none, rc or strong")
                  ->check(CLI::IsMember({"none", "rc", "strong"})),
              [&](RunConfig& d, const RunConfig&) {
                d.presolve = *scp::parse_presolve_level(presolve_text);
              });
  overlay.add(solve->add_option("--sf-budget", flags.sf_budget,
                                "Fraction of columns given a strong fixing subproblem"),
              SLS_FIELD(sf_budget));
  std::string strategy_text;
  overlay.add(solve->add_option("--sf-strategy", strategy_text, "all, jaccard or bestz")
                  ->check(CLI::IsMember({"all", "jaccard", "bestz"})),
              [&](RunConfig& d, const RunConfig&) {
                d.sf_strategy = *presolve::parse_strategy(strategy_text);
              });
  overlay.add(solve->add_option("--time-limit", flags.time_limit, "Seconds per solve"),
              SLS_FIELD(time_limit));
  CLI::Option* solve_ell = solve->add_option("--ell", ell_flag, "Box side in cp2 mode");
  overlay.add(solve_ell, [&](RunConfig& d, const RunConfig&) { d.ell = ell_flag; });
  overlay.add(solve->add_flag("--compare", flags.compare, "Also solve without presolve"),
              SLS_FIELD(compare));
  overlay.add(solve->add_option("-j,--jobs", flags.jobs, "Worker threads"), SLS_FIELD(jobs));
  std::string records_name;
  solve->add_option("--records", records_name, "Record CSV (default <out>/records.<mode>.csv)");

  CLI::App* rep = app.add_subcommand("report", "Summarize record CSV files");
  std::vector<fs::path> csv_files;
  double shift = 1.0;
  rep->add_option("files", csv_files, "Record CSV files")->required();
  rep->add_option("--shift", shift, "Shift of the geometric mean");

  CLI::App* plot = app.add_subcommand("plot", "Draw an instance and optionally a solution as SVG");
  fs::path plot_instance;
  std::string plot_solution;
  fs::path plot_out;
  plot->add_option("instance", plot_instance, "Instance file")->required();
  plot->add_option("--solution", plot_solution, "Solution JSON (scp or cp2)");
  CLI::Option* plot_ell = plot->add_option("--ell", ell_flag, "Box side for cp2 solutions");
  plot->add_option("-o,--out", plot_out, "SVG file (default <instance stem>.svg)");

  CLI::App* exp = app.add_subcommand("export", "Write the covering matrix in sparse text form");
  fs::path export_instance;
  fs::path export_out;
  exp->add_option("instance", export_instance, "Instance file")->required();
  exp->add_option("-o,--out", export_out, "Output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cli::kInputError;
  }
  spdlog::set_level(verbose ? spdlog::level::info : spdlog::level::warn);

  try {
    if (*rep) return run_report(csv_files, shift);
    if (*plot) {
      const fs::path out = plot_out.empty() ? fs::path(plot_instance.stem().string() + ".svg")
                                            : plot_out;
      std::optional<fs::path> sol;
      if (!plot_solution.empty()) sol = plot_solution;
      std::optional<double> ell;
      if (plot_ell->count() > 0) ell = ell_flag;
      return run_plot(plot_instance, sol, ell, out);
    }
    if (*exp) {
      write_file(export_out, to_scp_text(to_scp(load_instance(export_instance))));
      return cli::kProved;
    }

    RunConfig config;
    config.output_dir = flags.output_dir;  // env default
    if (!config_path.empty()) apply_config_json(config, read_file(config_path));
    overlay.apply(config, flags);
    config.command = *gen ? "generate" : "solve";
    config.validate();

    if (*gen) return run_generate(config);
    const fs::path records = records_name.empty()
                                 ? config.output_dir / ("records." + cli::to_string(config.mode) + ".csv")
                                 : fs::path(records_name);
    return run_solve(config, records);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kInputError;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kInputError;
  } catch (const InstanceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
