// Batch driver: run a test case across refinement levels in monolithic,
// hybrid-direct or iterative DD mode and emit the convergence table,
// iteration logs and dissipation diagnostics.
#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "wg/assembly.hpp"
#include "wg/ddsolver.hpp"
#include "wg/errors.hpp"
#include "wg/exceptions.hpp"
#include "wg/mesh.hpp"
#include "wg/problems.hpp"

namespace wg {

enum class SolverMode { monolithic, dd_iter, hybrid_direct };
enum class StopMode { oracle, residual };

struct RunConfig {
  std::string test = "test1";
  ElementKind family = ElementKind::standard;
  int degree = 1;
  bool per_element = false;
  int subdomain_grid = 2;  // m: an m x m block partition, M = m^2
  double beta = 0.0;       // 0 = family/degree default
  int level_begin = 1;
  int level_end = 4;
  SolverMode mode = SolverMode::dd_iter;
  StopMode stop = StopMode::oracle;
  double tol = 1e-10;
  int max_iters = 2000;
  std::string out;  // empty = stdout
  bool diagnostics = false;
  std::vector<std::string> mesh_files;  // one per level; triangles if empty
  TableFormat format = TableFormat::markdown;
};

/// beta defaults from the reported experiments: 8 for k <= 3, 32 for k = 4,
/// 19 for k = 5, 32 for k = 6 on the standard element; 4 on the
/// superconvergent element.
inline double default_beta(ElementKind kind, int degree) {
  if (kind == ElementKind::superconvergent) return 4.0;
  switch (degree) {
    case 4: return 32.0;
    case 5: return 19.0;
    case 6: return 32.0;
    default: return 8.0;
  }
}

inline void validate(RunConfig& config) {
  if (config.degree < 1 || config.degree > 6)
    throw UsageError("degree must be between 1 and 6");
  if (config.level_begin < 1 || config.level_end < config.level_begin)
    throw UsageError("invalid level range");
  if (config.beta == 0.0) config.beta = default_beta(config.family, config.degree);
  if (config.beta <= 0.0) throw UsageError("beta must be positive");
  if (config.tol <= 0.0) throw UsageError("tol must be positive");
  if (config.max_iters < 1) throw UsageError("max-iters must be positive");
  if (!config.per_element && config.subdomain_grid < 1)
    throw UsageError("subdomain grid count must be positive");
  if (!config.mesh_files.empty() &&
      config.mesh_files.size() !=
          static_cast<std::size_t>(config.level_end - config.level_begin + 1))
    throw UsageError("need one --mesh-file per level");
  if (config.family == ElementKind::superconvergent && !config.mesh_files.empty())
    throw UsageError("the superconvergent element requires triangular grids");
  problem_by_name(config.test);  // throws on unknown test id
}

struct LevelResult {
  TableRow row;
  IterationLog log;
  bool converged = true;
};

struct RunResult {
  ConvergenceTable table;
  std::vector<LevelResult> levels;
  bool all_converged = true;
};

namespace detail {

inline Mesh mesh_for_level(const RunConfig& config, int level) {
  if (config.mesh_files.empty()) return build_uniform_triangle_mesh(1 << level);
  const std::string& path = config.mesh_files[level - config.level_begin];
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open mesh file '" + path + "'");
  return load_mesh(in);
}

inline SubdomainPartition partition_for(const RunConfig& config, const Mesh& mesh, int level) {
  if (config.per_element) return partition_per_element(mesh);
  int m = config.subdomain_grid;
  if (config.mesh_files.empty()) m = std::min(m, 1 << level);  // coarse grids cap the blocks
  return partition_grid(mesh, m);
}

}  // namespace detail

/// Run all levels. Iteration logs go to `iter_out` (dd-iter mode) and
/// dissipation diagnostics to `diag_out` when enabled.
inline RunResult run_levels(RunConfig config, std::ostream* iter_out = nullptr,
                            std::ostream* diag_out = nullptr) {
  validate(config);
  const Problem prob = problem_by_name(config.test);
  const ElementFamily family{config.family, config.degree};
  if (config.stop == StopMode::oracle && config.mode == SolverMode::dd_iter && !prob.exact)
    throw UsageError("oracle stopping needs a test case with a known exact solution");

  RunResult result;
  result.table.test = config.test;
  result.table.family =
      config.family == ElementKind::standard
          ? "P" + std::to_string(config.degree) + ",P" + std::to_string(config.degree - 1)
          : "P" + std::to_string(config.degree) + ",P" + std::to_string(config.degree) + " (RT)";
  result.table.degree = config.degree;
  result.table.beta = config.beta;
  result.table.mode = config.mode == SolverMode::monolithic      ? "monolithic"
                      : config.mode == SolverMode::hybrid_direct ? "hybrid-direct"
                                                                 : "dd-iter";
  result.table.partition =
      config.mode == SolverMode::monolithic
          ? "no partition"
          : (config.per_element ? std::string("per-element subdomains")
                                : std::to_string(config.subdomain_grid * config.subdomain_grid) +
                                      " subdomains");

  for (int level = config.level_begin; level <= config.level_end; ++level) {
    const Mesh mesh = detail::mesh_for_level(config, level);
    const WgOperators ops = build_operators(mesh, family, prob.a, prob.c, prob.f);
    const ExactProjection proj = project_exact(mesh, family, prob.exact);

    LevelResult lev;
    lev.row.level = level;

    if (config.mode == SolverMode::monolithic) {
      const GlobalSystem sys = assemble(mesh, ops, prob.g);
      const WeakFunction u = solve(sys);
      const SolutionView v = make_view(mesh, u);
      lev.row.l2 = l2_error(mesh, ops, proj, v);
      lev.row.energy = energy_error(mesh, ops, proj, v);
    } else {
      const SubdomainPartition part = detail::partition_for(config, mesh, level);
      const DdSolver dd(mesh, part, ops, prob.g, config.beta);
      if (config.mode == SolverMode::hybrid_direct) {
        const InterfaceState state = dd.hybrid_direct();
        const SolutionView v = dd.view(state);
        lev.row.l2 = l2_error(mesh, ops, proj, v);
        lev.row.energy = energy_error(mesh, ops, proj, v);
      } else {
        StopRule stop;
        stop.max_iters = config.max_iters;
        if (config.stop == StopMode::residual) {
          stop.mode = StopRule::Mode::residual;
          stop.tol = config.tol;
        } else {
          stop.mode = StopRule::Mode::oracle;
          const GlobalSystem sys = assemble(mesh, ops, prob.g);
          const WeakFunction mono = solve(sys);
          const SolutionView mono_view = make_view(mesh, mono);
          stop.metrics.resize(2);
          stop.metrics[0].target = energy_error(mesh, ops, proj, mono_view);
          stop.metrics[0].value = [&](const InterfaceState& s) {
            return energy_error(mesh, ops, proj, dd.view(s));
          };
          stop.metrics[1].target = l2_error(mesh, ops, proj, mono_view);
          stop.metrics[1].value = [&](const InterfaceState& s) {
            return l2_error(mesh, ops, proj, dd.view(s));
          };
        }
        std::optional<InterfaceState> reference;
        if (config.diagnostics) reference = dd.hybrid_direct();
        auto [state, log] =
            dd.run(dd.initial_state(), stop, reference ? &*reference : nullptr);
        lev.log = log;
        lev.converged = log.converged;
        const SolutionView v = dd.view(state);
        lev.row.l2 = l2_error(mesh, ops, proj, v);
        lev.row.energy = energy_error(mesh, ops, proj, v);
        lev.row.iterations = log.iterations();

        if (iter_out) {
          *iter_out << "# level " << level << " (" << part.count << " subdomains)\n";
          for (const IterationRecord& rec : log.records) {
            *iter_out << level << " " << rec.iteration << " " << format_scientific(rec.residual);
            if (config.stop == StopMode::oracle)
              *iter_out << " " << format_scientific(rec.metric);
            *iter_out << "\n";
          }
          if (!log.converged)
            *iter_out << "# level " << level << " did not converge within " << config.max_iters
                      << " iterations, final residual " << format_scientific(log.final_residual)
                      << "\n";
        }
        if (diag_out && reference) {
          *diag_out << "# level " << level << ": E^(n), |dE - 4*beta*energy|, |E - sum(beta*e+mu)^2|\n";
          for (const IterationRecord& rec : log.records)
            *diag_out << level << " " << rec.iteration << " " << format_scientific(rec.energy)
                      << " " << format_scientific(rec.decrement_gap) << " "
                      << format_scientific(rec.identity_gap) << "\n";
        }
      }
    }
    result.all_converged = result.all_converged && lev.converged;
    result.table.rows.push_back(lev.row);
    result.levels.push_back(std::move(lev));
  }
  compute_rates(result.table);
  return result;
}

}  // namespace wg
