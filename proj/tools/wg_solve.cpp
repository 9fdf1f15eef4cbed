// Batch driver: pick a test case, element family, degree, partition and beta,
// run the monolithic or domain-decomposition solver over a level range, and
// emit convergence tables plus iteration logs.
//
// Exit codes: 0 success, 1 usage error, 2 solver failure, 3 non-convergence.

#include <fstream>
#include <iostream>

#include "wg/cli.hpp"
#include "wg/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"weak Galerkin solver with domain-decomposition iteration"};
  wg::RunConfig config;
  wg::CliOptions raw;
  wg::attach_cli(app, config, raw);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    wg::apply_cli_options(raw, config);
    wg::validate(config);
  } catch (const wg::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    std::ofstream table_file, iter_file, diag_file;
    std::ostream* table_out = &std::cout;
    std::ostream* iter_out = nullptr;
    std::ostream* diag_out = nullptr;
    if (!config.out.empty()) {
      table_file.open(config.out);
      if (!table_file) throw wg::UsageError("cannot open output file '" + config.out + "'");
      table_out = &table_file;
    }
    if (config.mode == wg::SolverMode::dd_iter) {
      if (config.out.empty()) {
        iter_out = &std::cout;
      } else {
        iter_file.open(config.out + ".iters.txt");
        iter_out = &iter_file;
      }
    }
    if (config.diagnostics && config.mode == wg::SolverMode::dd_iter) {
      if (config.out.empty()) {
        diag_out = &std::cout;
      } else {
        diag_file.open(config.out + ".diag.txt");
        diag_out = &diag_file;
      }
    }

    std::ostringstream iter_buf, diag_buf;
    wg::RunResult result =
        wg::run_levels(config, iter_out ? &iter_buf : nullptr, diag_out ? &diag_buf : nullptr);
    *table_out << wg::emit_table(result.table, config.format);
    if (iter_out && !iter_buf.str().empty()) {
      if (iter_out == &std::cout) *iter_out << "\n";
      *iter_out << iter_buf.str();
    }
    if (diag_out && !diag_buf.str().empty()) {
      if (diag_out == &std::cout) *diag_out << "\n";
      *diag_out << diag_buf.str();
    }
    if (!result.all_converged) {
      std::cerr << "error: the iteration did not reach the stopping rule on every level\n";
      return 3;
    }
  } catch (const wg::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
