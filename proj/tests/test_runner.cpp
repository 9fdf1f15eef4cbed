#include "wg/runner.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "wg/cli.hpp"

using wg::RunConfig;

TEST(ParseConfig, DefaultsMatchTheLedger) {
  const RunConfig config = wg::parse_run_config({});
  EXPECT_EQ(config.test, "test1");
  EXPECT_EQ(config.family, wg::ElementKind::standard);
  EXPECT_EQ(config.degree, 1);
  EXPECT_FALSE(config.per_element);
  EXPECT_EQ(config.subdomain_grid, 2);
  EXPECT_EQ(config.beta, 8.0);
  EXPECT_EQ(config.level_begin, 1);
  EXPECT_EQ(config.level_end, 4);
  EXPECT_EQ(config.mode, wg::SolverMode::dd_iter);
  EXPECT_EQ(config.stop, wg::StopMode::oracle);
}

TEST(ParseConfig, PaperPairingOverrides) {
  const RunConfig config = wg::parse_run_config({"--beta", "19", "--degree", "5"});
  EXPECT_EQ(config.degree, 5);
  EXPECT_EQ(config.beta, 19.0);
  // and without --beta the degree-5 default is 19 as in the experiments
  const RunConfig d5 = wg::parse_run_config({"--degree", "5"});
  EXPECT_EQ(d5.beta, 19.0);
  const RunConfig d4 = wg::parse_run_config({"--degree", "4"});
  EXPECT_EQ(d4.beta, 32.0);
  const RunConfig sc = wg::parse_run_config({"--family", "superconvergent", "--degree", "2"});
  EXPECT_EQ(sc.beta, 4.0);
}

TEST(ParseConfig, RejectsInvalidInput) {
  EXPECT_THROW(wg::parse_run_config({"--degree", "9"}), wg::UsageError);
  EXPECT_THROW(wg::parse_run_config({"--degree", "0"}), wg::UsageError);
  EXPECT_THROW(wg::parse_run_config({"--bogus-flag", "1"}), wg::UsageError);
  EXPECT_THROW(wg::parse_run_config({"--beta", "-3"}), wg::UsageError);
  EXPECT_THROW(wg::parse_run_config({"--levels", "4..2"}), wg::UsageError);
  EXPECT_THROW(wg::parse_run_config({"--levels", "one..two"}), wg::UsageError);
  EXPECT_THROW(wg::parse_run_config({"--test", "test9"}), wg::UsageError);
  EXPECT_THROW(wg::parse_run_config({"--subdomains", "grid"}), wg::UsageError);
  EXPECT_THROW(wg::parse_run_config({"--mode", "direct"}), wg::UsageError);
  // the superconvergent element has no polygonal gradient space
  EXPECT_THROW(wg::parse_run_config({"--family", "superconvergent", "--levels", "1..1",
                                     "--mesh-file", "foo.msh"}),
               wg::UsageError);
  // one mesh file per level
  EXPECT_THROW(wg::parse_run_config({"--levels", "1..3", "--mesh-file", "foo.msh"}),
               wg::UsageError);
}

TEST(ParseConfig, PerElementAndLevelForms) {
  const RunConfig pe = wg::parse_run_config({"--subdomains", "per-element"});
  EXPECT_TRUE(pe.per_element);
  const RunConfig single = wg::parse_run_config({"--levels", "3"});
  EXPECT_EQ(single.level_begin, 3);
  EXPECT_EQ(single.level_end, 3);
}

TEST(ParseConfig, ConfigFileWithCommandLineOverride) {
  const auto path = std::filesystem::temp_directory_path() / "wg_runner_config_test.ini";
  {
    std::ofstream out(path);
    out << "degree = 2\n"
        << "beta = 16\n"
        << "levels = 2..3\n"
        << "stop = residual\n";
  }
  const RunConfig config =
      wg::parse_run_config({"--config", path.string(), "--beta", "32"});
  std::filesystem::remove(path);
  EXPECT_EQ(config.degree, 2);
  EXPECT_EQ(config.beta, 32.0);  // flag wins over file
  EXPECT_EQ(config.level_begin, 2);
  EXPECT_EQ(config.level_end, 3);
  EXPECT_EQ(config.stop, wg::StopMode::residual);
}

TEST(RunLevels, ManufacturedSolutionComesOutExact) {
  RunConfig config;
  config.test = "manufactured";
  config.degree = 1;
  config.level_begin = 1;
  config.level_end = 2;
  config.mode = wg::SolverMode::dd_iter;
  config.stop = wg::StopMode::oracle;
  const wg::RunResult result = wg::run_levels(config);
  ASSERT_TRUE(result.all_converged);
  for (const wg::TableRow& row : result.table.rows) {
    EXPECT_LT(row.l2, 1e-10);
    EXPECT_LT(row.energy, 1e-10);
  }
}

TEST(RunLevels, CoarseLevelCapsTheBlockCount) {
  // 16 subdomains requested on the level-1 grid (only 4 squares): the run
  // must clamp rather than fail, as in the reported level-1 experiments
  RunConfig config;
  config.test = "test1";
  config.degree = 1;
  config.subdomain_grid = 4;
  config.level_begin = 1;
  config.level_end = 1;
  config.stop = wg::StopMode::residual;
  config.tol = 1e-8;
  config.max_iters = 500;
  const wg::RunResult result = wg::run_levels(config);
  EXPECT_TRUE(result.all_converged);
}

TEST(RunLevels, ByteIdenticalAcrossRunsAndWorkerCounts) {
  RunConfig config;
  config.test = "test3";
  config.degree = 2;
  config.level_begin = 1;
  config.level_end = 2;
  config.stop = wg::StopMode::oracle;
  config.format = wg::TableFormat::csv;

  const auto emit = [&] {
    std::ostringstream iters;
    const wg::RunResult result = wg::run_levels(config, &iters);
    return wg::emit_table(result.table, config.format) + "\n" + iters.str();
  };
  wg::set_worker_count(1);
  const std::string serial = emit();
  const std::string serial2 = emit();
  wg::set_worker_count(4);
  const std::string threaded = emit();
  wg::set_worker_count(std::thread::hardware_concurrency());
  EXPECT_EQ(serial, serial2);
  EXPECT_EQ(serial, threaded);
}

TEST(RunLevels, ResidualModeReportsNonConvergence) {
  RunConfig config;
  config.test = "test1";
  config.degree = 1;
  config.level_begin = 2;
  config.level_end = 2;
  config.stop = wg::StopMode::residual;
  config.tol = 1e-14;
  config.max_iters = 3;  // certainly not enough
  const wg::RunResult result = wg::run_levels(config);
  EXPECT_FALSE(result.all_converged);
  EXPECT_FALSE(result.levels[0].converged);
  EXPECT_GT(result.levels[0].log.final_residual, 0.0);
}

#ifdef WG_SOLVE_BIN

namespace {
int run_cli(const std::string& args) {
  const int status =
      std::system((std::string(WG_SOLVE_BIN) + " " + args + " > /dev/null 2>&1").c_str());
  return WEXITSTATUS(status);
}
}  // namespace

TEST(CliBinary, ExitCodes) {
  EXPECT_EQ(run_cli("--test manufactured --levels 1..1 --mode monolithic"), 0);
  EXPECT_EQ(run_cli("--degree 9"), 1);                              // usage
  EXPECT_EQ(run_cli("--levels 1..1 --mesh-file /nonexistent.msh"), 1);
  EXPECT_EQ(run_cli("--test test1 --levels 2..2 --stop residual --tol 1e-14 --max-iters 2"),
            3);  // non-convergence

  // malformed mesh content surfaces as a solver-input failure
  const auto bad = std::filesystem::temp_directory_path() / "wg_bad_mesh.msh";
  {
    std::ofstream out(bad);
    out << "wgmesh 1\nvertices 4\n0 0\n1 0\n1 1\n0 1\ncells 1\n4 0 3 2 1\n";
  }
  EXPECT_EQ(run_cli("--levels 1..1 --mesh-file " + bad.string()), 2);
  std::filesystem::remove(bad);
}

TEST(CliBinary, WritesTableIterationLogAndDiagnostics) {
  const auto dir = std::filesystem::temp_directory_path();
  const auto table = (dir / "wg_cli_table.csv").string();
  const int code = run_cli(
      "--test test1 --degree 1 --subdomains 2 --levels 2..2 --stop oracle --diagnostics "
      "--format csv --out " +
      table);
  ASSERT_EQ(code, 0);
  std::ifstream tf(table), itf(table + ".iters.txt"), df(table + ".diag.txt");
  ASSERT_TRUE(tf.good());
  ASSERT_TRUE(itf.good());
  ASSERT_TRUE(df.good());
  std::string header;
  std::getline(tf, header);
  EXPECT_EQ(header, "level,l2_err,l2_rate,energy_err,energy_rate,iters");
  std::string line;
  int diag_rows = 0;
  while (std::getline(df, line))
    if (!line.empty() && line[0] != '#') ++diag_rows;
  EXPECT_GT(diag_rows, 2);
  std::filesystem::remove(table);
  std::filesystem::remove(table + ".iters.txt");
  std::filesystem::remove(table + ".diag.txt");
}

#endif  // WG_SOLVE_BIN
