// Generator for the shipped quad/pentagon mesh family. Each n x n grid square
// is cut from its bottom edge midpoint to its top edge midpoint: a straight
// cut on even squares (two quadrilaterals), a kinked cut on odd squares (two
// pentagons). All cuts run bottom-to-top, so horizontal grid edges split at
// midpoints consistently on both sides and the mesh stays conforming; the
// grid lines x,y = i/m remain covered by mesh edges whenever m divides n.
#pragma once

#include <map>

#include "wg/mesh.hpp"

namespace wg {

inline Mesh build_quad_pentagon_mesh(int n, double kink = 0.1) {
  if (n < 1) throw std::runtime_error("build_quad_pentagon_mesh: n must be positive");
  Mesh mesh;
  std::map<std::pair<long, long>, int> ids;
  // all coordinates are multiples of 1/(10n); key on that lattice
  const auto vertex = [&](long tx, long ty) {
    auto [it, inserted] = ids.try_emplace({tx, ty}, mesh.vertex_count());
    if (inserted)
      mesh.vertices.push_back({static_cast<double>(tx) / (10.0 * n),
                               static_cast<double>(ty) / (10.0 * n)});
    return it->second;
  };
  const long dk = std::lround(kink * 10.0);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const long x0 = 10L * i, x1 = 10L * (i + 1), xm = 10L * i + 5;
      const long y0 = 10L * j, y1 = 10L * (j + 1), ym = 10L * j + 5;
      const int ll = vertex(x0, y0), lr = vertex(x1, y0);
      const int ur = vertex(x1, y1), ul = vertex(x0, y1);
      const int mb = vertex(xm, y0), mt = vertex(xm, y1);
      if ((i + j) % 2 == 0) {
        mesh.cells.push_back({ll, mb, mt, ul});
        mesh.cells.push_back({mb, lr, ur, mt});
      } else {
        const int kk = vertex(xm + dk, ym);
        mesh.cells.push_back({ll, mb, kk, mt, ul});
        mesh.cells.push_back({mb, lr, ur, mt, kk});
      }
    }
  mesh.finalize("build_quad_pentagon_mesh");
  mesh.check_shape_regularity(10.0, "build_quad_pentagon_mesh");
  return mesh;
}

/// The level-l member of the shipped polygonal family: n = 4 * 2^(l-1), so
/// h halves per level and both 4- and 16-subdomain partitions align.
inline Mesh build_quad_pentagon_level(int level) {
  if (level < 1) throw std::runtime_error("build_quad_pentagon_level: level must be >= 1");
  return build_quad_pentagon_mesh(4 << (level - 1));
}

}  // namespace wg
