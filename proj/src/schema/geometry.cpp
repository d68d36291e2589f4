#include "prc/schema/geometry.hpp"

#include "prc/schema/compare.hpp"

namespace prc {

Index Geometry::add_node(const Eigen::Vector3d& position, double mass) {
  const Index n = node_count();
  positions.conservativeResize(n + 1, Eigen::NoChange);
  positions.row(n) = position.transpose();
  masses.conservativeResize(n + 1);
  masses(n) = mass;
  return n;
}

Index Geometry::add_bar(Index i, Index j, double stiffness, double rest_length, double damping, bool rigid) {
  if (std::isnan(rest_length)) rest_length = (positions.row(i) - positions.row(j)).norm();
  bars.push_back(Bar{i, j, stiffness, rest_length, damping, rigid});
  return bar_count() - 1;
}

Index Geometry::add_hinge(const std::array<Index, 4>& nodes, double stiffness, double rest_angle, bool rigid) {
  hinges.push_back(Hinge{nodes, stiffness, rest_angle, rigid});
  return hinge_count() - 1;
}

Eigen::VectorXd Geometry::bar_lengths(const NodeMatrixd& at) const {
  Eigen::VectorXd out(bar_count());
  for (Index b = 0; b < bar_count(); ++b) {
    const auto& bar = bars[static_cast<std::size_t>(b)];
    out(b) = (at.row(bar.i) - at.row(bar.j)).norm();
  }
  return out;
}

bool operator==(const Bar& a, const Bar& b) {
  return a.i == b.i && a.j == b.j && bit_equal(a.stiffness, b.stiffness) && bit_equal(a.rest_length, b.rest_length) &&
         bit_equal(a.damping, b.damping) && a.rigid == b.rigid;
}

bool operator==(const Hinge& a, const Hinge& b) {
  return a.nodes == b.nodes && bit_equal(a.stiffness, b.stiffness) && bit_equal(a.rest_angle, b.rest_angle) &&
         a.rigid == b.rigid;
}

bool operator==(const Geometry& a, const Geometry& b) {
  return bit_equal(a.positions, b.positions) && bit_equal(a.masses, b.masses) && a.bars == b.bars &&
         a.hinges == b.hinges;
}

}  // namespace prc
