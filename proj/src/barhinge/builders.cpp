#include "prc/barhinge/builders.hpp"

#include <map>
#include <utility>

#include "prc/barhinge/kernels.hpp"

namespace prc {

Geometry from_triangles(const NodeMatrixd& positions, const std::vector<std::array<Index, 3>>& triangles,
                        const SheetMaterial& m) {
  Geometry g;
  for (Index n = 0; n < positions.rows(); ++n) g.add_node(positions.row(n).transpose(), m.mass);

  // edge (lo, hi) -> wing nodes of the triangles that contain it
  std::map<std::pair<Index, Index>, std::vector<Index>> edges;
  for (const auto& tri : triangles)
    for (int k = 0; k < 3; ++k) {
      const Index a = tri[static_cast<std::size_t>(k)], b = tri[static_cast<std::size_t>((k + 1) % 3)];
      const Index c = tri[static_cast<std::size_t>((k + 2) % 3)];
      edges[{std::min(a, b), std::max(a, b)}].push_back(c);
    }
  for (const auto& [edge, wings] : edges) g.add_bar(edge.first, edge.second, m.bar_stiffness, std::nan(""),
                                                    m.bar_damping, m.rigid_bars);
  for (const auto& [edge, wings] : edges) {
    if (wings.size() != 2) continue;
    const std::array<Index, 4> nodes{edge.first, edge.second, wings[0], wings[1]};
    auto p = [&](Index i) -> Eigen::Vector3d { return positions.row(i).transpose(); };
    const double theta = dihedral<double>(p(nodes[0]), p(nodes[1]), p(nodes[2]), p(nodes[3])).theta;
    g.add_hinge(nodes, m.hinge_stiffness, theta);
  }
  return g;
}

Geometry miura_sheet(int cells_x, int cells_y, double a, double b, double height, double shear,
                     const SheetMaterial& material) {
  const Index nx = cells_x + 1, ny = cells_y + 1;
  NodeMatrixd P(nx * ny, 3);
  auto id = [&](Index i, Index j) { return j * nx + i; };
  for (Index j = 0; j < ny; ++j)
    for (Index i = 0; i < nx; ++i)
      P.row(id(i, j)) << static_cast<double>(i) * a + (j % 2 ? shear : 0.0), static_cast<double>(j) * b,
          (i % 2 ? height : 0.0);
  std::vector<std::array<Index, 3>> tris;
  for (Index j = 0; j + 1 < ny; ++j)
    for (Index i = 0; i + 1 < nx; ++i) {
      tris.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      tris.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  return from_triangles(P, tris, material);
}

}  // namespace prc
