#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <regex>
#include <sstream>

#include "families.hpp"
#include "oracles.hpp"
#include "slscover/driver.hpp"
#include "slscover/instance_io.hpp"
#include "slscover/report.hpp"
#include "slscover/run_config.hpp"
#include "slscover/solution_io.hpp"
#include "slscover/stats.hpp"
#include "slscover/svg.hpp"

using namespace slscover;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("slscover_test_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

struct CliRun {
  int status = -1;
  std::string output;
};

CliRun run_cli(const std::string& args, const std::string& env = "") {
  const char* cli = std::getenv("SLSCOVER_CLI");
  CliRun r;
  if (cli == nullptr) return r;
  const std::string cmd = env + " \"" + cli + "\" " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  char buf[4096];
  while (std::fgets(buf, sizeof buf, pipe) != nullptr) r.output += buf;
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

#define REQUIRE_CLI()                                                   \
  if (std::getenv("SLSCOVER_CLI") == nullptr) {                         \
    GTEST_SKIP() << "SLSCOVER_CLI is not set (run through ctest)";      \
  }

int count_occurrences(const std::string& text, const std::string& needle) {
  int c = 0;
  for (std::size_t pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle, pos + needle.size())) {
    ++c;
  }
  return c;
}

Cp1Instance uncoverable_instance() {
  Cp1Instance inst;
  inst.vertices = {{0.1, 0.5}, {0.9, 0.5}};
  inst.edges = {{0, 1}};
  inst.sites = {{{0.5, 0.5}, 0.15, 0.02}};
  inst.params = {1, 2, 0.11, 0.19, 0.05};
  return inst;
}

report::BenchRecord sample_record(bool cp2) {
  report::BenchRecord r;
  r.instance = cp2 ? "inst_cp2" : "inst_scp";
  r.mode = cp2 ? "cp2" : "scp";
  r.reduction.original = {7164, 500, 0.0};
  r.reduction.rows_eliminated = {531, 500, 24.49};
  r.reduction.rc_fixed = {214, 167, 0.5};
  r.reduction.strong_fixed = {12, 13, 5.67};
  r.reduction.n0_rc = 333;
  r.reduction.n0_sf = 150;
  r.reduction.n1_sf = 4;
  r.reduced_time = 0.001;
  r.objective = 0.123456789012345;
  r.proved_optimal = true;
  if (cp2) {
    r.original_time = 6.58;
    r.graph_vertices = 10;
    r.graph_edges = 161;
    r.opt_scp = 0.45;
    r.opt_cp2 = 0.25;
    r.sum_z_scp = 4;
    r.sum_z_cp2 = 3;
  }
  return r;
}

}  // namespace

// ---- statistics ----

TEST(Stats, ShiftedGeomeanExamples) {
  const std::vector<double> two{1.0, 9.0};
  EXPECT_NEAR(stats::shifted_geomean(two, 1.0), std::sqrt(20.0) - 1.0, 1e-12);
  EXPECT_NEAR(stats::shifted_geomean(std::vector<double>{3.7}, 1.0), 3.7, 1e-12);
  EXPECT_NEAR(stats::shifted_geomean(std::vector<double>{2.5, 2.5, 2.5}, 10.0), 2.5, 1e-12);
}

TEST(Stats, ShiftedGeomeanMatchesDirectProduct) {
  // Fixture checked against the product formula evaluated directly.
  const std::vector<double> v{0.5, 2.25, 10.0, 0.0, 7164.0};
  double prod = 1.0;
  for (double x : v) prod *= x + 1.0;
  EXPECT_NEAR(stats::shifted_geomean(v, 1.0), std::pow(prod, 1.0 / 5.0) - 1.0, 1e-9);
}

TEST(Stats, ShiftedGeomeanErrors) {
  EXPECT_THROW(stats::shifted_geomean(std::vector<double>{}, 1.0), std::invalid_argument);
  EXPECT_THROW(stats::shifted_geomean(std::vector<double>{1.0}, 0.0), std::invalid_argument);
  EXPECT_THROW(stats::shifted_geomean(std::vector<double>{-1.0}, 1.0), std::invalid_argument);
}

TEST(Stats, TimeReductionFactor) {
  EXPECT_NEAR(stats::time_reduction_factor(5.0, 50.0).value, 0.1, 1e-15);
  EXPECT_EQ(stats::time_reduction_factor(3.0, 3.0).value, 1.0);
  const stats::Ratio zero = stats::time_reduction_factor(1.0, 0.0);
  EXPECT_EQ(zero.value, 0.0);
  EXPECT_TRUE(zero.undefined);
  EXPECT_FALSE(stats::time_reduction_factor(1.0, 2.0).undefined);
}

TEST(Stats, FactorHistogramBins) {
  const std::vector<double> f{0.0, 0.1, 0.1000001, 0.3, 0.55, 0.999, 1.0, 1.5};
  const stats::FactorHistogram h = stats::factor_histogram(f);
  EXPECT_EQ(h.counts[0], 2);  // 0 and 0.1
  EXPECT_EQ(h.counts[1], 1);
  EXPECT_EQ(h.counts[2], 1);  // 0.3
  EXPECT_EQ(h.counts[5], 1);
  EXPECT_EQ(h.counts[9], 2);
  EXPECT_EQ(h.counts[10], 1);
  EXPECT_EQ(h.total(), static_cast<int>(f.size()));
}

// ---- records ----

TEST(Records, CsvRoundTrip) {
  for (bool cp2 : {false, true}) {
    const report::BenchRecord r = sample_record(cp2);
    const std::string row = report::csv_row(r);
    EXPECT_EQ(count_occurrences(row, ",") + 1, static_cast<int>(report::csv_columns().size()));
    const report::BenchRecord back = report::parse_csv_row(row);
    EXPECT_EQ(report::csv_row(back), row);
    EXPECT_EQ(back.objective, r.objective);
    EXPECT_EQ(back.original_time, r.original_time);
    EXPECT_EQ(back.sum_z_cp2, r.sum_z_cp2);
    EXPECT_EQ(back.reduction.strong_fixed.n, 13);
  }
  const std::string text = report::csv_header() + "\n" + report::csv_row(sample_record(false)) +
                           "\n\n" + report::csv_row(sample_record(true)) + "\n";
  EXPECT_EQ(report::parse_csv(text).size(), 2u);
}

TEST(Records, ParseErrorsNameTheColumn) {
  std::string row = report::csv_row(sample_record(false));
  row.replace(row.find(",7164,"), 6, ",71x4,");
  try {
    report::parse_csv_row(row);
    FAIL() << "expected RecordError";
  } catch (const report::RecordError& e) {
    EXPECT_NE(std::string(e.what()).find("'m'"), std::string::npos) << e.what();
  }
  EXPECT_THROW(report::parse_csv_row("a,b,c"), report::RecordError);
  EXPECT_THROW(report::parse_csv("instance,m\n"), report::RecordError);
}

TEST(Records, Validation) {
  report::BenchRecord r = sample_record(false);
  EXPECT_NO_THROW(r.validate());
  r.reduced_time = -1.0;
  EXPECT_THROW(r.validate(), report::RecordError);
  r = sample_record(false);
  r.reduction.strong_fixed.n = 600;
  EXPECT_THROW(r.validate(), report::RecordError);
}

TEST(Records, TimeColumnsAreMarked) {
  int time_columns = 0;
  for (const std::string& c : report::csv_columns()) time_columns += report::is_time_column(c);
  EXPECT_EQ(time_columns, 5);
  EXPECT_FALSE(report::is_time_column("objective"));
}

// ---- solution and ledger documents ----

TEST(SolutionJson, CoverRoundTrip) {
  scp::CoverSolution sol;
  sol.columns = {1, 4, 7};
  sol.objective = 0.3;
  sol.proved_optimal = true;
  sol.stats.nodes = 12;
  const scp::CoverSolution back = io::cover_solution_from_json(io::to_json(sol));
  EXPECT_EQ(back.columns, sol.columns);
  EXPECT_EQ(back.objective, 0.3);
  EXPECT_TRUE(back.proved_optimal);
  EXPECT_EQ(back.stats.nodes, 12);
  EXPECT_EQ(io::solution_kind(io::to_json(sol)), "scp");
}

TEST(SolutionJson, LocationRoundTrip) {
  const auto tiny = families::tiny_cp2(1);
  const Cp2Instance& inst = tiny[0].inst;
  const cp2::Cp2Solution sol = cp2::solve_cp2(cp2::build_cp2_model(inst));
  const std::string text = io::to_json(sol);
  EXPECT_EQ(io::solution_kind(text), "cp2");
  const cp2::Cp2Solution back = io::cp2_solution_from_json(text, inst);
  EXPECT_EQ(back.sites, sol.sites);
  EXPECT_EQ(back.objective, sol.objective);
  ASSERT_EQ(back.assignments.size(), sol.assignments.size());
  for (int j : sol.sites) EXPECT_EQ(back.centers[j], sol.centers[j]);
  EXPECT_LE(cp2::max_violation(inst, back), cp2::kConicFeasTol);
}

TEST(SolutionJson, SchemaErrorsNameTheKey) {
  const auto message_for = [](const std::string& text) {
    try {
      io::cover_solution_from_json(text);
    } catch (const io::SchemaError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_NE(message_for(R"({"kind":"scp","columns":[],"proved_optimal":true,"stats":{}})")
                .find("objective"),
            std::string::npos);
  EXPECT_NE(message_for(R"({"kind":"scp","objective":1,"columns":[],"proved_optimal":true,)"
                        R"("stats":{"nodes":1}})")
                .find("stats.lp_solves"),
            std::string::npos);
  EXPECT_NE(message_for(R"({"kind":"scp","objective":"x"})").find("objective"),
            std::string::npos);
  EXPECT_NE(message_for("[1,").find("invalid JSON"), std::string::npos);
}

TEST(LedgerJson, RoundTripWithInfiniteBound) {
  presolve::FixingLedger ledger;
  ledger.record({3, 0, presolve::FixRule::RC0, 1.5, 1.0, -1});
  ledger.record({5, 1, presolve::FixRule::SF1, std::numeric_limits<double>::infinity(), 1.0, 2});
  const presolve::FixingLedger back = io::ledger_from_json(io::to_json(ledger));
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back.value(3), 0);
  EXPECT_EQ(back.find(5)->rule, presolve::FixRule::SF1);
  EXPECT_TRUE(std::isinf(back.find(5)->bound));
  EXPECT_EQ(back.find(5)->source, 2);
  EXPECT_EQ(io::to_json(back), io::to_json(ledger));
}

// ---- SVG ----

TEST(Svg, ChosenSitesAreHighlighted) {
  const Cp1Instance inst = generate_repaired({30, 4, 0.11, 0.19, 0.05}, 3);
  const std::vector<int> chosen{2, 5, 11, 17};
  const std::string doc = svg::render_cover(inst, chosen);
  EXPECT_EQ(count_occurrences(doc, "class=\"disk chosen\""), 4);
  EXPECT_EQ(count_occurrences(doc, "class=\"disk\""), 30);
  EXPECT_EQ(count_occurrences(doc, "class=\"edge\""), static_cast<int>(inst.edges.size()));
  EXPECT_NE(doc.find("viewBox=\"0 0 1 1\""), std::string::npos);
  EXPECT_EQ(doc, svg::render_cover(inst, chosen));
  EXPECT_THROW(svg::render_cover(inst, std::vector<int>{30}), std::out_of_range);
}

TEST(Svg, LocationCentersInsideBoxes) {
  const auto tiny = families::tiny_cp2(3);
  for (const auto& t : tiny) {
    const cp2::Cp2Solution sol = cp2::solve_cp2(cp2::build_cp2_model(t.inst));
    const std::string doc = svg::render_location(t.base, t.inst.ell, sol);
    EXPECT_EQ(count_occurrences(doc, "class=\"disk chosen\""),
              static_cast<int>(sol.sites.size()));
    const std::regex center_re(R"re(<circle class="center" cx="([-0-9.]+)" cy="([-0-9.]+)")re");
    std::vector<Point2> centers;
    for (auto it = std::sregex_iterator(doc.begin(), doc.end(), center_re);
         it != std::sregex_iterator(); ++it) {
      centers.push_back({std::stod((*it)[1]), std::stod((*it)[2])});
    }
    ASSERT_EQ(centers.size(), sol.sites.size());
    for (std::size_t k = 0; k < centers.size(); ++k) {
      // Coordinates are printed with six decimals.
      EXPECT_TRUE(t.inst.boxes[sol.sites[k]].contains(centers[k], 1e-6)) << "seed " << t.seed;
    }
    EXPECT_EQ(doc, svg::render_location(t.base, t.inst.ell, sol));
  }
}

// ---- configuration ----

TEST(RunConfig, SeedRanges) {
  EXPECT_EQ(cli::parse_seed_range("7").first, 7u);
  const cli::SeedRange r = cli::parse_seed_range("3-12");
  EXPECT_EQ(r.first, 3u);
  EXPECT_EQ(r.last, 12u);
  EXPECT_THROW(cli::parse_seed_range("9-2"), cli::ConfigError);
  EXPECT_THROW(cli::parse_seed_range("x"), cli::ConfigError);
  EXPECT_THROW(cli::parse_seed_range(""), cli::ConfigError);
}

TEST(RunConfig, JsonKeysMatchFlags) {
  cli::RunConfig c;
  cli::apply_config_json(c, R"({"mode":"cp2","presolve":"rc","sf_budget":0.4,
      "sf_strategy":"bestz","time_limit":30,"output_dir":"out","seeds":"1-5","jobs":2})");
  EXPECT_EQ(c.mode, cli::Mode::Cp2);
  EXPECT_EQ(c.presolve, scp::PresolveLevel::ReducedCost);
  EXPECT_EQ(c.sf_budget, 0.4);
  EXPECT_EQ(c.sf_strategy, presolve::Strategy::BestZ);
  EXPECT_EQ(c.time_limit, 30.0);
  EXPECT_EQ(c.output_dir, fs::path("out"));
  EXPECT_EQ(c.seeds.last, 5u);
  EXPECT_EQ(c.jobs, 2);
}

TEST(RunConfig, InvalidJsonNamesTheKey) {
  const auto message_for = [](const std::string& text) {
    cli::RunConfig c;
    try {
      cli::apply_config_json(c, text);
    } catch (const cli::ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_NE(message_for(R"({"sf_bugdet":0.4})").find("'sf_bugdet'"), std::string::npos);
  EXPECT_NE(message_for(R"({"time_limit":"long"})").find("'time_limit'"), std::string::npos);
  EXPECT_NE(message_for(R"({"presolve":"fast"})").find("'presolve'"), std::string::npos);
  EXPECT_NE(message_for("{").find("invalid JSON"), std::string::npos);
}

TEST(RunConfig, Validation) {
  cli::RunConfig c;
  c.command = "solve";
  EXPECT_THROW(c.validate(), cli::ConfigError);  // no instances
  c.instances = {"a.json"};
  EXPECT_NO_THROW(c.validate());
  c.sf_budget = 1.5;
  EXPECT_THROW(c.validate(), cli::ConfigError);
  c.command = "generate";
  c.n = 20;
  EXPECT_NO_THROW(c.validate());
  c.r_max = 0.25;
  EXPECT_THROW(c.validate(), cli::ConfigError);
}

TEST(RunConfig, FamilyDefaults) {
  cli::RunConfig c;
  c.n = 500;
  EXPECT_EQ(c.resolved_nu(), 15);
  EXPECT_EQ(c.resolved_ell(), 0.0);
  c.family = "cp2";
  c.n = 20;
  EXPECT_EQ(c.resolved_nu(), 10);
  EXPECT_EQ(c.resolved_ell(), 0.05);
  c.nu = 4;
  EXPECT_EQ(c.resolved_nu(), 4);
}

// ---- driver ----

TEST(Driver, ScpModeMatchesEnumeration) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Cp1Instance inst = generate_repaired({14, 3, 0.11, 0.19, 0.05}, seed);
    const ScpInstance scp_inst = to_scp(inst);
    const oracle::ScpEnumeration best = oracle::enumerate_scp(scp_inst.matrix, scp_inst.weights);
    cli::RunConfig c;
    const cli::SolveOutcome out = cli::solve_instance(inst, "s" + std::to_string(seed), c);
    ASSERT_EQ(out.exit_code, cli::kProved);
    EXPECT_NEAR(out.record.objective, best.optimum, 1e-9) << "seed " << seed;
    EXPECT_NO_THROW(out.record.validate());
    const scp::CoverSolution sol = io::cover_solution_from_json(out.solution_json);
    EXPECT_TRUE(scp_inst.matrix.covers_all(sol.columns));
    EXPECT_NO_THROW(io::ledger_from_json(out.ledger_json));
  }
}

TEST(Driver, LocationModeWithPointBoxesMatchesCovering) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const Cp1Instance inst = generate_repaired(families::matched_params(12, 0.0), seed);
    cli::RunConfig c;
    const cli::SolveOutcome covering = cli::solve_instance(inst, "a", c);
    c.mode = cli::Mode::Cp2;
    c.ell = 0.0;
    const cli::SolveOutcome location = cli::solve_instance(inst, "a", c);
    ASSERT_EQ(location.exit_code, cli::kProved);
    EXPECT_NEAR(location.record.objective, covering.record.objective, 1e-7) << "seed " << seed;
    EXPECT_NEAR(*location.record.opt_scp, covering.record.objective, 1e-9);
    EXPECT_NO_THROW(location.record.validate());
  }
}

TEST(Driver, InfeasibleInstance) {
  cli::RunConfig c;
  EXPECT_EQ(cli::solve_instance(uncoverable_instance(), "x", c).exit_code, cli::kInfeasible);
  c.mode = cli::Mode::Cp2;
  EXPECT_EQ(cli::solve_instance(uncoverable_instance(), "x", c).exit_code, cli::kInfeasible);
}

TEST(Driver, ExitCodeOrder) {
  EXPECT_EQ(cli::combine_exit_codes(cli::kProved, cli::kLimitHit), cli::kLimitHit);
  EXPECT_EQ(cli::combine_exit_codes(cli::kInfeasible, cli::kLimitHit), cli::kInfeasible);
  EXPECT_EQ(cli::combine_exit_codes(cli::kInfeasible, cli::kInputError), cli::kInputError);
}

// ---- the executable ----

TEST(CliBinary, GenerateIsDeterministic) {
  REQUIRE_CLI();
  const fs::path a = scratch_dir("gen_a");
  const fs::path b = scratch_dir("gen_b");
  for (const fs::path& d : {a, b}) {
    const CliRun r = run_cli("generate --n 60 --nu 4 --seeds 1-3 --out " + d.string());
    ASSERT_EQ(r.status, 0) << r.output;
  }
  int files = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    ++files;
    EXPECT_EQ(slurp(entry.path()), slurp(b / entry.path().filename()));
  }
  EXPECT_EQ(files, 3);
  EXPECT_TRUE(fs::exists(a / "inst_n60_nu4_s2.json"));
}

TEST(CliBinary, EnvironmentSetsOutputDirectory) {
  REQUIRE_CLI();
  const fs::path d = scratch_dir("env");
  const CliRun r = run_cli("generate --n 20 --family cp2 --seeds 4", "SLSCOVER_OUTPUT_DIR=" + d.string());
  ASSERT_EQ(r.status, 0) << r.output;
  ASSERT_TRUE(fs::exists(d / "inst_n20_nu10_s4.json"));
  EXPECT_EQ(read_instance(d / "inst_n20_nu10_s4.json").params.ell, 0.05);
}

TEST(CliBinary, SolveWritesArtifacts) {
  REQUIRE_CLI();
  const fs::path d = scratch_dir("solve");
  ASSERT_EQ(run_cli("generate --n 14 --nu 3 --seeds 1-2 --out " + d.string()).status, 0);
  const std::string files =
      (d / "inst_n14_nu3_s1.json").string() + " " + (d / "inst_n14_nu3_s2.json").string();
  const CliRun r = run_cli("solve " + files + " --mode scp --presolve strong --sf-strategy jaccard "
                        "--sf-budget 0.5 --compare --jobs 2 --out " + d.string());
  ASSERT_EQ(r.status, 0) << r.output;
  for (int s : {1, 2}) {
    const std::string stem = "inst_n14_nu3_s" + std::to_string(s);
    const Cp1Instance inst = read_instance(d / (stem + ".json"));
    const ScpInstance scp_inst = to_scp(inst);
    const scp::CoverSolution sol =
        io::cover_solution_from_json(slurp(d / (stem + ".scp.solution.json")));
    EXPECT_NEAR(sol.objective, oracle::enumerate_scp(scp_inst.matrix, scp_inst.weights).optimum,
                1e-9);
    EXPECT_NO_THROW(io::ledger_from_json(slurp(d / (stem + ".scp.ledger.json"))));
  }
  const auto records = report::parse_csv(slurp(d / "records.scp.csv"));
  ASSERT_EQ(records.size(), 2u);
  EXPECT_EQ(records[0].instance, "inst_n14_nu3_s1");
  EXPECT_TRUE(records[0].original_time.has_value());

  const CliRun rep = run_cli("report " + (d / "records.scp.csv").string());
  ASSERT_EQ(rep.status, 0) << rep.output;
  EXPECT_NE(rep.output.find("time-reduction factor"), std::string::npos);
}

TEST(CliBinary, LocationModeAndPlot) {
  REQUIRE_CLI();
  const fs::path d = scratch_dir("cp2");
  ASSERT_EQ(run_cli("generate --n 8 --family cp2 --seeds 5 --out " + d.string()).status, 0);
  const fs::path inst = d / "inst_n8_nu4_s5.json";
  const CliRun r = run_cli("solve " + inst.string() + " --mode cp2 --out " + d.string());
  ASSERT_EQ(r.status, 0) << r.output;
  const fs::path sol = d / "inst_n8_nu4_s5.cp2.solution.json";
  ASSERT_TRUE(fs::exists(sol));
  const CliRun p = run_cli("plot " + inst.string() + " --solution " + sol.string() + " -o " +
                        (d / "p.svg").string());
  ASSERT_EQ(p.status, 0) << p.output;
  const std::string doc = slurp(d / "p.svg");
  const Cp1Instance base = read_instance(inst);
  const cp2::Cp2Solution s =
      io::cp2_solution_from_json(slurp(sol), to_cp2(base, base.params.ell));
  EXPECT_EQ(count_occurrences(doc, "class=\"center\""), static_cast<int>(s.sites.size()));
  ASSERT_EQ(run_cli("plot " + inst.string() + " --solution " + sol.string() + " -o " +
                    (d / "q.svg").string())
                .status,
            0);
  EXPECT_EQ(slurp(d / "q.svg"), doc);
}

TEST(CliBinary, ExitCodes) {
  REQUIRE_CLI();
  const fs::path d = scratch_dir("codes");
  // Input error: instance JSON missing a key; the message names it.
  spit(d / "broken.json", R"({"version":1,"seed":1})");
  CliRun r = run_cli("solve " + (d / "broken.json").string() + " --out " + d.string());
  EXPECT_EQ(r.status, 4);
  EXPECT_NE(r.output.find("'params'"), std::string::npos) << r.output;

  // Input error: config file with an unknown key.
  spit(d / "config.json", R"({"mode":"scp","sf_bugdet":0.5})");
  r = run_cli("solve x.json --config " + (d / "config.json").string());
  EXPECT_EQ(r.status, 4);
  EXPECT_NE(r.output.find("'sf_bugdet'"), std::string::npos) << r.output;

  r = run_cli("solve x.json --mode lp");
  EXPECT_EQ(r.status, 4);

  // Infeasible: an edge no disk can cover.
  write_instance(d / "uncoverable.json", uncoverable_instance());
  r = run_cli("solve " + (d / "uncoverable.json").string() + " --out " + d.string());
  EXPECT_EQ(r.status, 3) << r.output;

  // Limit hit: the root relaxation is fractional and the limit expires after it.
  ASSERT_EQ(run_cli("generate --n 1000 --nu 30 --seeds 1 --out " + d.string()).status, 0);
  r = run_cli("solve " + (d / "inst_n1000_nu30_s1.json").string() +
              " --presolve none --time-limit 1e-9 --out " + d.string());
  EXPECT_EQ(r.status, 2) << r.output;
  const auto records = report::parse_csv(slurp(d / "records.scp.csv"));
  ASSERT_EQ(records.size(), 1u);
  EXPECT_FALSE(records[0].proved_optimal);
}

TEST(CliBinary, ConfigFileAndFlagPrecedence) {
  REQUIRE_CLI();
  const fs::path d = scratch_dir("config");
  ASSERT_EQ(run_cli("generate --n 14 --nu 3 --seeds 3 --out " + d.string()).status, 0);
  spit(d / "config.json", "{\"mode\":\"cp2\",\"presolve\":\"none\",\"output_dir\":\"" +
                              (d / "from_config").string() + "\"}");
  // The flag overrides the mode from the file; the directory comes from the file.
  const CliRun r = run_cli("solve " + (d / "inst_n14_nu3_s3.json").string() + " --config " +
                        (d / "config.json").string() + " --mode scp");
  ASSERT_EQ(r.status, 0) << r.output;
  EXPECT_TRUE(fs::exists(d / "from_config" / "inst_n14_nu3_s3.scp.solution.json"));
  const auto records = report::parse_csv(slurp(d / "from_config" / "records.scp.csv"));
  ASSERT_EQ(records.size(), 1u);
  EXPECT_EQ(records[0].reduction.n0_sf, 0);  // presolve none
}
