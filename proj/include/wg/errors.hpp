// Error norms against projected exact solutions, the subdomain triple norm,
// convergence rates, and table emission in the paper's numeric style.
#pragma once

#include <cstdio>
#include <iomanip>
#include <sstream>
#include <string>

#include "wg/element.hpp"
#include "wg/mesh.hpp"

namespace wg {

/// Coefficients of one cell: interior vector and the trace vector of each
/// edge in cell_edges order, as seen from that cell's side.
struct CellSolution {
  Eigen::VectorXd v0;
  std::vector<Eigen::VectorXd> vb;
};

using SolutionView = std::function<CellSolution(int cell)>;

inline SolutionView make_view(const Mesh& mesh, const WeakFunction& u) {
  return [&mesh, &u](int c) {
    CellSolution s;
    s.v0 = u.cell[c];
    for (int e : mesh.cell_edges[c]) s.vb.push_back(u.edge[e]);
    return s;
  };
}

/// Q_h u = {Q_0 u, Q_b u}: per-cell and per-edge projections of a field.
struct ExactProjection {
  std::vector<Eigen::VectorXd> cell;
  std::vector<Eigen::VectorXd> edge;
};

inline ExactProjection project_exact(const Mesh& mesh, const ElementFamily& family,
                                     const ScalarField& u) {
  ExactProjection p;
  p.cell.resize(mesh.cell_count());
  p.edge.resize(mesh.edge_count());
  parallel_for(mesh.cell_count(), [&](std::size_t c) {
    p.cell[c] = project_onto_cell(mesh, static_cast<int>(c), family.degree, u);
  });
  parallel_for(mesh.edge_count(), [&](std::size_t e) {
    p.edge[e] = project_onto_edge(mesh, static_cast<int>(e), family.trace_degree(), u);
  });
  return p;
}

/// || Q_0 u - u_0 ||_0 over the whole mesh.
inline double l2_error(const Mesh& mesh, const WgOperators& ops, const ExactProjection& proj,
                       const SolutionView& view) {
  double err2 = 0.0;
  for (int c = 0; c < mesh.cell_count(); ++c) {
    const Eigen::VectorXd d = proj.cell[c] - view(c).v0;
    err2 += d.dot(ops.cell_ops[c].M0 * d);
  }
  return std::sqrt(err2);
}

/// || grad_w (Q_h u - u_h) ||_0, evaluated cell-wise through G_T.
inline double energy_error(const Mesh& mesh, const WgOperators& ops, const ExactProjection& proj,
                           const SolutionView& view) {
  double err2 = 0.0;
  for (int c = 0; c < mesh.cell_count(); ++c) {
    const LocalOperators& lo = ops.cell_ops[c];
    const CellSolution s = view(c);
    Eigen::VectorXd d(lo.local_dim());
    d.head(lo.n0) = proj.cell[c] - s.v0;
    for (int slot = 0; slot < lo.nedges; ++slot)
      d.segment(lo.edge_offset(slot), lo.nb) = proj.edge[mesh.cell_edges[c][slot]] - s.vb[slot];
    const Eigen::VectorXd g = lo.G * d;
    err2 += g.dot(lo.Mg * g);
  }
  return std::sqrt(err2);
}

inline double l2_error(const Mesh& mesh, const WgOperators& ops, const ScalarField& exact,
                       const SolutionView& view) {
  return l2_error(mesh, ops, project_exact(mesh, ops.family, exact), view);
}

inline double energy_error(const Mesh& mesh, const WgOperators& ops, const ScalarField& exact,
                           const SolutionView& view) {
  return energy_error(mesh, ops, project_exact(mesh, ops.family, exact), view);
}

/// Interior-gradient stiffness of one cell, (w grad v0, grad v0)_T.
inline Eigen::MatrixXd interior_gradient_stiffness(const Mesh& mesh, int cell, int degree,
                                                   const ScalarField& weight) {
  const CellBasis basis(mesh, cell, degree);
  const QuadratureRule rule = cell_rule(mesh.cell_vertices(cell), 2 * degree + 2);
  const int n = basis.size();
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    Eigen::MatrixXd Gr(2, n);
    for (int i = 0; i < n; ++i) {
      const Point g = basis.gradient(i, rule.points[q]);
      Gr(0, i) = g.x;
      Gr(1, i) = g.y;
    }
    K.noalias() += rule.weights[q] * weight(rule.points[q]) * Gr.transpose() * Gr;
  }
  return K;
}

/// Subdomain triple norm
///   |||v|||^2 = sum_T (a grad v0, grad v0)_T + s_j(v,v) + ||v_b||^2 on the
/// subdomain boundary; the penalty form is included for both element
/// families since this is a diagnostic norm, not part of the scheme.
inline double triple_norm(const Mesh& mesh, const ElementFamily& family, const ScalarField& a,
                          const SubdomainPartition& part, int j, const SolutionView& view) {
  double n2 = 0.0;
  for (int c : part.subdomain_cells[j]) {
    const CellSolution s = view(c);
    const Eigen::MatrixXd K = interior_gradient_stiffness(mesh, c, family.degree, a);
    n2 += s.v0.dot(K * s.v0);
    const Eigen::MatrixXd S = stabilizer_form(mesh, c, family.degree, family.trace_degree());
    Eigen::VectorXd local(S.rows());
    const int n0 = static_cast<int>(s.v0.size());
    const int nb = family.trace_size();
    local.head(n0) = s.v0;
    for (std::size_t slot = 0; slot < s.vb.size(); ++slot)
      local.segment(n0 + static_cast<int>(slot) * nb, nb) = s.vb[slot];
    n2 += local.dot(S * local);
    for (std::size_t slot = 0; slot < s.vb.size(); ++slot) {
      const int e = mesh.cell_edges[c][static_cast<int>(slot)];
      const bool on_subdomain_boundary =
          mesh.is_boundary_edge(e) ||
          part.cell_subdomain[mesh.edges[e].left] != part.cell_subdomain[mesh.edges[e].right];
      if (!on_subdomain_boundary) continue;
      const EdgeBasis trace(mesh, e, family.trace_degree());
      const QuadratureRule rule =
          edge_rule(mesh.vertices[mesh.edges[e].v0], mesh.vertices[mesh.edges[e].v1],
                    family.edge_quadrature_degree());
      const Eigen::MatrixXd Me = gram_matrix(trace, rule);
      n2 += s.vb[slot].dot(Me * s.vb[slot]);
    }
  }
  return std::sqrt(n2);
}

// ---------------------------------------------------------------------------
// Convergence tables
// ---------------------------------------------------------------------------

struct TableRow {
  int level = 0;
  double l2 = 0.0;
  double energy = 0.0;
  int iterations = 0;
  double l2_rate = 0.0;
  double energy_rate = 0.0;
  bool l2_rate_defined = false;      // false renders as 0.0 (first row) or ---
  bool energy_rate_defined = false;
  bool l2_floor = false;             // below round-off floor: rate prints ---
  bool energy_floor = false;
};

struct ConvergenceTable {
  std::string test;
  std::string family;
  int degree = 1;
  double beta = 0.0;
  std::string partition;  // e.g. "4 subdomains", "per-element", "none"
  std::string mode;
  std::vector<TableRow> rows;
};

/// rate_l = log2(err_{l-1} / err_l); the first row shows 0.0; rates of
/// entries at or below the round-off floor print "---".
inline void compute_rates(ConvergenceTable& table, double floor = 1e-8) {
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    TableRow& row = table.rows[i];
    row.l2_floor = row.l2 < floor;
    row.energy_floor = row.energy < floor;
    if (i == 0) continue;
    const TableRow& prev = table.rows[i - 1];
    if (!row.l2_floor && row.l2 > 0.0) {
      row.l2_rate = std::log2(prev.l2 / row.l2);
      row.l2_rate_defined = true;
    }
    if (!row.energy_floor && row.energy > 0.0) {
      row.energy_rate = std::log2(prev.energy / row.energy);
      row.energy_rate_defined = true;
    }
  }
}

/// Fortran-style scientific notation with three significant digits and a
/// mantissa in [0.1, 1), e.g. 0.0684 -> "0.684E-01".
inline std::string format_scientific(double v) {
  if (v == 0.0) return "0.000E+00";
  const double av = std::abs(v);
  int e = static_cast<int>(std::ceil(std::log10(av)));
  double m = av / std::pow(10.0, e);
  if (m >= 1.0) {
    m /= 10.0;
    ++e;
  }
  long digits = std::lround(m * 1000.0);
  if (digits >= 1000) {  // mantissa rounded up to 1.0
    digits = 100;
    ++e;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%s0.%03ldE%+03d", v < 0.0 ? "-" : "", digits, e);
  return buf;
}

inline std::string format_rate(double rate, bool defined, bool floored, bool first_row) {
  if (floored && !first_row) return "---";
  if (first_row || !defined) return "0.0";
  char buf[24];
  std::snprintf(buf, sizeof buf, "%.1f", rate);
  return buf;
}

enum class TableFormat { csv, markdown };

inline std::string emit_table(const ConvergenceTable& table, TableFormat format) {
  std::ostringstream out;
  if (format == TableFormat::csv) {
    out << "level,l2_err,l2_rate,energy_err,energy_rate,iters\n";
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
      const TableRow& r = table.rows[i];
      out << r.level << "," << format_scientific(r.l2) << ","
          << format_rate(r.l2_rate, r.l2_rate_defined, r.l2_floor, i == 0) << ","
          << format_scientific(r.energy) << ","
          << format_rate(r.energy_rate, r.energy_rate_defined, r.energy_floor, i == 0) << ","
          << r.iterations << "\n";
    }
    return out.str();
  }
  out << "# " << table.test << ", {" << table.family << "} degree " << table.degree << ", "
      << table.partition << ", beta = " << table.beta << ", " << table.mode << "\n";
  out << "| level | l2 error | rate | energy error | rate | iters |\n";
  out << "|------:|---------:|-----:|-------------:|-----:|------:|\n";
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const TableRow& r = table.rows[i];
    out << "| " << std::setw(5) << r.level << " | " << format_scientific(r.l2) << " | "
        << std::setw(4) << format_rate(r.l2_rate, r.l2_rate_defined, r.l2_floor, i == 0) << " | "
        << "   " << format_scientific(r.energy) << " | " << std::setw(4)
        << format_rate(r.energy_rate, r.energy_rate_defined, r.energy_floor, i == 0) << " | "
        << std::setw(5) << r.iterations << " |\n";
  }
  return out.str();
}

}  // namespace wg
