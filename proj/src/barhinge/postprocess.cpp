#include "prc/barhinge/postprocess.hpp"

#include "prc/barhinge/forces.hpp"

namespace prc {

TrajectoryRecord postprocess(TrajectoryRecord r, const Geometry& g) {
  const Index T = r.sample_count();
  if (r.node_count != g.node_count())
    throw ShapeError("record has " + std::to_string(r.node_count) + " nodes, geometry " +
                     std::to_string(g.node_count()));
  r.bar_strains.resize(T, g.bar_count());
  r.hinge_angles.resize(T, g.hinge_count());
  r.energies.resize(T, 3);
  if (r.velocities.rows() != T) r.velocities = RowMatrixd::Zero(T, 3 * r.node_count);
  for (Index t = 0; t < T; ++t) {
    const NodeMatrixd P = r.frame(t);
    const NodeMatrixd V = r.velocity_frame(t);
    auto frame_tag = [&](const std::string& element) { return element + " at frame " + std::to_string(t); };
    for (Index b = 0; b < g.bar_count(); ++b) {
      const auto& bar = g.bars[static_cast<std::size_t>(b)];
      const double l = (P.row(bar.i) - P.row(bar.j)).norm();
      if (!(l > 1e-12)) {
        const auto tag = frame_tag("bar[" + std::to_string(b) + "]");
        throw SingularConfiguration(tag, tag + ": bar length collapsed to zero");
      }
      r.bar_strains(t, b) = (l - bar.rest_length) / bar.rest_length;
    }
    for (Index h = 0; h < g.hinge_count(); ++h) {
      const auto& hinge = g.hinges[static_cast<std::size_t>(h)];
      try {
        r.hinge_angles(t, h) = dihedral<double>(P.row(hinge.nodes[0]).transpose(), P.row(hinge.nodes[1]).transpose(),
                                                P.row(hinge.nodes[2]).transpose(), P.row(hinge.nodes[3]).transpose())
                                   .theta;
      } catch (const SingularConfiguration& e) {
        const auto tag = frame_tag("hinge[" + std::to_string(h) + "]");
        throw SingularConfiguration(tag, tag + ": " + e.what());
      }
    }
    r.energies.row(t) = system_energies(P, V, g).transpose();
  }
  return r;
}

}  // namespace prc
