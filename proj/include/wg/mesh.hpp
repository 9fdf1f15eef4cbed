// Conforming 2D polygonal meshes with derived edge adjacency, uniform
// triangle refinement, a plain-text file format, and subdomain partitions
// whose interfaces align with mesh edges.
#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "wg/geometry.hpp"

namespace wg {

struct Edge {
  int v0 = -1, v1 = -1;    // vertex ids, v0 < v1 (canonical orientation)
  int left = -1, right = -1;  // incident cells; right = -1 on the boundary
};

class Mesh {
 public:
  std::vector<Point> vertices;
  std::vector<std::vector<int>> cells;       // CCW vertex loops
  std::vector<Edge> edges;
  std::vector<std::vector<int>> cell_edges;  // edge ids, loop order: slot i joins loop vertex i to i+1
  std::vector<double> cell_diameter;
  double h = 0.0;

  int cell_count() const { return static_cast<int>(cells.size()); }
  int edge_count() const { return static_cast<int>(edges.size()); }
  int vertex_count() const { return static_cast<int>(vertices.size()); }

  bool is_boundary_edge(int e) const { return edges[e].right < 0; }

  std::vector<Point> cell_vertices(int c) const {
    std::vector<Point> pts;
    pts.reserve(cells[c].size());
    for (int v : cells[c]) pts.push_back(vertices[v]);
    return pts;
  }

  double cell_area(int c) const {
    const auto pts = cell_vertices(c);
    return signed_area(pts);
  }

  Point cell_centroid(int c) const {
    const auto pts = cell_vertices(c);
    return centroid(pts);
  }

  double edge_length(int e) const { return distance(vertices[edges[e].v0], vertices[edges[e].v1]); }

  Point edge_midpoint(int e) const {
    return 0.5 * (vertices[edges[e].v0] + vertices[edges[e].v1]);
  }

  /// Unit tangent in the canonical (v0 -> v1) direction.
  Point edge_tangent(int e) const {
    const Point d = vertices[edges[e].v1] - vertices[edges[e].v0];
    return (1.0 / norm(d)) * d;
  }

  /// +1 if cell c walks edge e in canonical direction, -1 otherwise.
  int edge_orientation(int c, int slot) const {
    const int e = cell_edges[c][slot];
    const auto& loop = cells[c];
    const int a = loop[slot];
    return a == edges[e].v0 ? 1 : -1;
  }

  /// Outward unit normal of cell c on its slot-th edge.
  Point outward_normal(int c, int slot) const {
    const int e = cell_edges[c][slot];
    return static_cast<double>(edge_orientation(c, slot)) * rotate_cw(edge_tangent(e));
  }

  /// Rebuild edges, adjacency and size metadata from vertices+cells.
  /// Validates the connectivity invariants; `context` tags error messages.
  void finalize(const std::string& context = "mesh") {
    edges.clear();
    cell_edges.assign(cells.size(), {});
    std::map<std::pair<int, int>, int> index;
    for (int c = 0; c < cell_count(); ++c) {
      const auto& loop = cells[c];
      if (loop.size() < 3) throw std::runtime_error(context + ": cell " + std::to_string(c) + " has fewer than 3 vertices");
      for (std::size_t i = 0; i < loop.size(); ++i) {
        const int a = loop[i], b = loop[(i + 1) % loop.size()];
        if (a == b) throw std::runtime_error(context + ": cell " + std::to_string(c) + " repeats a vertex");
        const auto key = std::minmax(a, b);
        auto [it, inserted] = index.try_emplace(key, edge_count());
        if (inserted) edges.push_back({key.first, key.second, c, -1});
        else {
          Edge& ed = edges[it->second];
          if (ed.right >= 0)
            throw std::runtime_error(context + ": edge (" + std::to_string(a) + "," +
                                     std::to_string(b) + ") used by more than two cells");
          ed.right = c;
        }
        cell_edges[c].push_back(it->second);
      }
    }
    cell_diameter.resize(cells.size());
    h = 0.0;
    for (int c = 0; c < cell_count(); ++c) {
      const auto pts = cell_vertices(c);
      if (signed_area(pts) <= 0.0)
        throw std::runtime_error(context + ": cell " + std::to_string(c) +
                                 " is not counter-clockwise with positive area");
      cell_diameter[c] = diameter(pts);
      h = std::max(h, cell_diameter[c]);
    }
  }

  /// Shape regularity: diameter over inscribed-circle diameter, bounded.
  void check_shape_regularity(double limit, const std::string& context = "mesh") const {
    for (int c = 0; c < cell_count(); ++c) {
      const auto pts = cell_vertices(c);
      const double inradius = min_boundary_distance(pts, centroid(pts));
      if (cell_diameter[c] > limit * 2.0 * inradius)
        throw std::runtime_error(context + ": cell " + std::to_string(c) +
                                 " violates shape regularity (ratio " +
                                 std::to_string(cell_diameter[c] / (2.0 * inradius)) + " > " +
                                 std::to_string(limit) + ")");
    }
  }
};

/// Uniform triangulation of (0,1)^2: n x n squares, each split by the
/// diagonal from lower-left to upper-right. 2n^2 cells, h = sqrt(2)/n.
inline Mesh build_uniform_triangle_mesh(int n) {
  if (n < 1) throw std::runtime_error("build_uniform_triangle_mesh: n must be positive");
  Mesh mesh;
  const auto vid = [n](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      mesh.vertices.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const int ll = vid(i, j), lr = vid(i + 1, j), ur = vid(i + 1, j + 1), ul = vid(i, j + 1);
      mesh.cells.push_back({ll, lr, ur});
      mesh.cells.push_back({ll, ur, ul});
    }
  mesh.finalize("build_uniform_triangle_mesh");
  return mesh;
}

/// Midpoint subdivision of an all-triangle mesh: every triangle becomes four
/// congruent children and h halves exactly.
inline Mesh refine_uniform(const Mesh& mesh) {
  for (const auto& loop : mesh.cells)
    if (loop.size() != 3)
      throw std::runtime_error("refine_uniform: unsupported refinement of a non-triangular cell");
  Mesh fine;
  fine.vertices = mesh.vertices;
  std::vector<int> edge_mid(mesh.edge_count());
  for (int e = 0; e < mesh.edge_count(); ++e) {
    edge_mid[e] = fine.vertex_count();
    fine.vertices.push_back(mesh.edge_midpoint(e));
  }
  for (int c = 0; c < mesh.cell_count(); ++c) {
    const auto& v = mesh.cells[c];
    const int m01 = edge_mid[mesh.cell_edges[c][0]];
    const int m12 = edge_mid[mesh.cell_edges[c][1]];
    const int m20 = edge_mid[mesh.cell_edges[c][2]];
    fine.cells.push_back({v[0], m01, m20});
    fine.cells.push_back({m01, v[1], m12});
    fine.cells.push_back({m20, m12, v[2]});
    fine.cells.push_back({m01, m12, m20});
  }
  fine.finalize("refine_uniform");
  return fine;
}

/// Plain-text format:
///   wgmesh 1
///   vertices N
///   x y            (N lines)
///   cells M
///   p i1 ... ip    (M lines, 0-based CCW vertex ids)
inline Mesh load_mesh(std::istream& in, double shape_regularity_limit = 10.0) {
  Mesh mesh;
  int line_no = 0;
  std::string line;
  const auto next_line = [&](const char* what) -> std::istringstream {
    while (std::getline(in, line)) {
      ++line_no;
      const auto pos = line.find_first_not_of(" \t\r");
      if (pos == std::string::npos || line[pos] == '#') continue;
      return std::istringstream(line);
    }
    throw std::runtime_error("load_mesh: unexpected end of stream while reading " +
                             std::string(what));
  };
  const auto fail = [&](const std::string& msg) -> std::runtime_error {
    return std::runtime_error("load_mesh: line " + std::to_string(line_no) + ": " + msg);
  };

  {
    auto s = next_line("header");
    std::string magic;
    int version = 0;
    if (!(s >> magic >> version) || magic != "wgmesh" || version != 1)
      throw fail("expected header 'wgmesh 1'");
  }
  int nv = 0;
  {
    auto s = next_line("vertex count");
    std::string kw;
    if (!(s >> kw >> nv) || kw != "vertices" || nv < 3) throw fail("expected 'vertices N'");
  }
  mesh.vertices.reserve(nv);
  for (int i = 0; i < nv; ++i) {
    auto s = next_line("vertex");
    double x, y;
    if (!(s >> x >> y)) throw fail("malformed vertex line");
    mesh.vertices.push_back({x, y});
  }
  int nc = 0;
  {
    auto s = next_line("cell count");
    std::string kw;
    if (!(s >> kw >> nc) || kw != "cells" || nc < 1) throw fail("expected 'cells M'");
  }
  mesh.cells.reserve(nc);
  for (int i = 0; i < nc; ++i) {
    auto s = next_line("cell");
    int p = 0;
    if (!(s >> p) || p < 3) throw fail("malformed cell line");
    std::vector<int> loop(p);
    for (int j = 0; j < p; ++j) {
      if (!(s >> loop[j]) || loop[j] < 0 || loop[j] >= nv)
        throw fail("cell references invalid vertex");
    }
    std::vector<Point> pts;
    for (int v : loop) pts.push_back(mesh.vertices[v]);
    if (signed_area(pts) <= 0.0) throw fail("cell is not counter-clockwise");
    mesh.cells.push_back(std::move(loop));
  }
  mesh.finalize("load_mesh");
  mesh.check_shape_regularity(shape_regularity_limit, "load_mesh");
  return mesh;
}

inline void save_mesh(const Mesh& mesh, std::ostream& out) {
  out << "wgmesh 1\n";
  out << "vertices " << mesh.vertex_count() << "\n";
  out.precision(17);
  for (const Point& p : mesh.vertices) out << p.x << " " << p.y << "\n";
  out << "cells " << mesh.cell_count() << "\n";
  for (const auto& loop : mesh.cells) {
    out << loop.size();
    for (int v : loop) out << " " << v;
    out << "\n";
  }
}

/// One undirected interface between two subdomains, j < k. The same edge list
/// serves Gamma_jk and Gamma_kj.
struct InterfacePair {
  int j = -1, k = -1;
  std::vector<int> edges;
};

class SubdomainPartition {
 public:
  int count = 0;                              // M
  std::vector<int> cell_subdomain;            // cell -> subdomain id
  std::vector<std::vector<int>> subdomain_cells;
  std::vector<InterfacePair> interfaces;      // nonempty pairs only
  std::vector<std::vector<int>> outer_edges;  // Gamma_j: edges on the domain boundary
  std::vector<std::vector<int>> inner_edges;  // B_j = boundary of Omega_j minus Gamma_j
  std::vector<int> edge_pair;                 // edge -> index in `interfaces`, or -1

  /// Interface edge list as seen from the ordered pair (j,k); empty if none.
  std::vector<int> gamma(int j, int k) const {
    for (const auto& p : interfaces)
      if ((p.j == j && p.k == k) || (p.j == k && p.k == j)) return p.edges;
    return {};
  }

  /// Derive interface structure from the cell->subdomain map.
  void build_interfaces(const Mesh& mesh) {
    subdomain_cells.assign(count, {});
    for (int c = 0; c < mesh.cell_count(); ++c) subdomain_cells[cell_subdomain[c]].push_back(c);
    outer_edges.assign(count, {});
    inner_edges.assign(count, {});
    edge_pair.assign(mesh.edge_count(), -1);
    std::map<std::pair<int, int>, int> pair_index;
    interfaces.clear();
    for (int e = 0; e < mesh.edge_count(); ++e) {
      const Edge& ed = mesh.edges[e];
      if (ed.right < 0) {
        outer_edges[cell_subdomain[ed.left]].push_back(e);
        continue;
      }
      const int j = cell_subdomain[ed.left], k = cell_subdomain[ed.right];
      if (j == k) continue;
      const auto key = std::minmax(j, k);
      auto [it, inserted] = pair_index.try_emplace(key, static_cast<int>(interfaces.size()));
      if (inserted) interfaces.push_back({key.first, key.second, {}});
      interfaces[it->second].edges.push_back(e);
      edge_pair[e] = it->second;
      inner_edges[j].push_back(e);
      inner_edges[k].push_back(e);
    }
  }
};

/// Assign cells to the m x m congruent blocks of (0,1)^2 by centroid. Every
/// cell must sit strictly inside one block; a straddling cell (one with an
/// edge crossing a block boundary) is an alignment error.
inline SubdomainPartition partition_grid(const Mesh& mesh, int m) {
  if (m < 1) throw std::runtime_error("partition_grid: m must be positive");
  SubdomainPartition part;
  part.count = m * m;
  part.cell_subdomain.resize(mesh.cell_count());
  const double tol = 1e-12;
  for (int c = 0; c < mesh.cell_count(); ++c) {
    const Point g = mesh.cell_centroid(c);
    const int bx = static_cast<int>(g.x * m), by = static_cast<int>(g.y * m);
    if (bx < 0 || bx >= m || by < 0 || by >= m)
      throw std::runtime_error("partition_grid: centroid of cell " + std::to_string(c) +
                               " outside the unit square");
    // strict interior: every vertex of the cell inside the closed block
    for (const Point& p : mesh.cell_vertices(c)) {
      if (p.x < static_cast<double>(bx) / m - tol || p.x > static_cast<double>(bx + 1) / m + tol ||
          p.y < static_cast<double>(by) / m - tol || p.y > static_cast<double>(by + 1) / m + tol)
        throw std::runtime_error("partition_grid: cell " + std::to_string(c) +
                                 " straddles a subdomain boundary");
    }
    part.cell_subdomain[c] = by * m + bx;
  }
  part.build_interfaces(mesh);
  return part;
}

/// Every cell its own subdomain; all interior edges become interfaces.
inline SubdomainPartition partition_per_element(const Mesh& mesh) {
  SubdomainPartition part;
  part.count = mesh.cell_count();
  part.cell_subdomain.resize(mesh.cell_count());
  for (int c = 0; c < mesh.cell_count(); ++c) part.cell_subdomain[c] = c;
  part.build_interfaces(mesh);
  return part;
}

}  // namespace wg
