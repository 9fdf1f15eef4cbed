// Command-line and config-file front end for the batch driver.
#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wg/runner.hpp"

namespace wg {

/// Options that need post-parse interpretation.
struct CliOptions {
  std::string family = "standard";
  std::string subdomains = "2";
  std::string levels = "1..4";
  std::string mode = "dd-iter";
  std::string stop = "oracle";
  std::string format = "markdown";
};

inline void attach_cli(CLI::App& app, RunConfig& config, CliOptions& raw) {
  app.set_config("--config", "", "config file with plain `key = value` lines");
  app.add_option("--test", config.test, "test case: test1|test2|test3|manufactured")
      ->capture_default_str();
  app.add_option("--family", raw.family, "element family: standard|superconvergent")
      ->capture_default_str();
  app.add_option("--degree", config.degree, "polynomial degree k, 1..6")->capture_default_str();
  app.add_option("--subdomains", raw.subdomains,
                 "m for an m x m block partition (M = m^2 subdomains), or 'per-element'")
      ->capture_default_str();
  app.add_option("--beta", config.beta,
                 "Robin transmission parameter; 0 picks the family/degree default");
  app.add_option("--levels", raw.levels, "refinement level range, e.g. 1..4")
      ->capture_default_str();
  app.add_option("--mode", raw.mode, "monolithic|dd-iter|hybrid-direct")->capture_default_str();
  app.add_option("--stop", raw.stop, "dd-iter stopping rule: oracle|residual")
      ->capture_default_str();
  app.add_option("--tol", config.tol, "residual-mode stopping tolerance")->capture_default_str();
  app.add_option("--max-iters", config.max_iters, "iteration cap")->capture_default_str();
  app.add_option("--out", config.out, "write the table here instead of stdout");
  app.add_flag("--diagnostics", config.diagnostics,
               "log the energy functional and the dissipation identity residuals");
  app.add_option("--mesh-file", config.mesh_files,
                 "mesh file per level, in level order (polygonal runs)");
  app.add_option("--format", raw.format, "table format: csv|markdown")->capture_default_str();
}

inline void apply_cli_options(const CliOptions& raw, RunConfig& config) {
  if (raw.family == "standard") config.family = ElementKind::standard;
  else if (raw.family == "superconvergent") config.family = ElementKind::superconvergent;
  else throw UsageError("unknown family '" + raw.family + "'");

  if (raw.subdomains == "per-element") {
    config.per_element = true;
  } else {
    config.per_element = false;
    try {
      std::size_t used = 0;
      config.subdomain_grid = std::stoi(raw.subdomains, &used);
      if (used != raw.subdomains.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw UsageError("--subdomains expects a positive integer or 'per-element'");
    }
  }

  const auto dots = raw.levels.find("..");
  try {
    if (dots == std::string::npos) {
      config.level_begin = config.level_end = std::stoi(raw.levels);
    } else {
      config.level_begin = std::stoi(raw.levels.substr(0, dots));
      config.level_end = std::stoi(raw.levels.substr(dots + 2));
    }
  } catch (const std::exception&) {
    throw UsageError("--levels expects A..B with integer levels");
  }

  if (raw.mode == "monolithic") config.mode = SolverMode::monolithic;
  else if (raw.mode == "dd-iter") config.mode = SolverMode::dd_iter;
  else if (raw.mode == "hybrid-direct") config.mode = SolverMode::hybrid_direct;
  else throw UsageError("unknown mode '" + raw.mode + "'");

  if (raw.stop == "oracle") config.stop = StopMode::oracle;
  else if (raw.stop == "residual") config.stop = StopMode::residual;
  else throw UsageError("unknown stop rule '" + raw.stop + "'");

  if (raw.format == "csv") config.format = TableFormat::csv;
  else if (raw.format == "markdown") config.format = TableFormat::markdown;
  else throw UsageError("unknown format '" + raw.format + "'");
}

/// Parse flags (and an optional config file) into a validated RunConfig.
/// Flags given on the command line override config-file values.
inline RunConfig parse_run_config(std::vector<std::string> args) {
  CLI::App app{"weak Galerkin solver with domain-decomposition iteration"};
  RunConfig config;
  CliOptions raw;
  attach_cli(app, config, raw);
  std::reverse(args.begin(), args.end());
  try {
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }
  apply_cli_options(raw, config);
  validate(config);
  return config;
}

}  // namespace wg
