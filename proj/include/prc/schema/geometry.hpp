#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "prc/schema/types.hpp"

namespace prc {

/// Mass value that marks a pinned (immovable) node. Any positive infinity is
/// read as infinite mass: the node is skipped by integration and never moved
/// by constraint projection.
inline constexpr double kPinnedMass = std::numeric_limits<double>::infinity();

inline bool is_pinned(double mass) { return std::isinf(mass) && mass > 0; }

/// Inverse mass with the pinned sentinel mapped to zero.
inline double inverse_mass(double mass) { return is_pinned(mass) ? 0.0 : 1.0 / mass; }

/// Per-bar damping ratio left unset; the simulation falls back to the
/// configured default ratio.
inline constexpr double kInheritDamping = std::numeric_limits<double>::quiet_NaN();

struct Bar {
  Index i = 0;
  Index j = 0;
  double stiffness = 0.0;    // k_axial, force / length
  double rest_length = 0.0;  // l0
  double damping = kInheritDamping;  // damping ratio zeta
  bool rigid = false;

  bool inherits_damping() const { return std::isnan(damping); }
};

/// Four-node dihedral element. nodes[0]–nodes[1] is the shared edge,
/// nodes[2] and nodes[3] are the wing tips of the two faces.
struct Hinge {
  std::array<Index, 4> nodes{};
  double stiffness = 0.0;   // k_hinge, energy / rad^2
  double rest_angle = 0.0;  // theta0 in (0, 2*pi), flat = pi
  bool rigid = false;
};

struct Geometry {
  NodeMatrixd positions;  // N×3
  Eigen::VectorXd masses;  // N
  std::vector<Bar> bars;
  std::vector<Hinge> hinges;

  Index node_count() const { return positions.rows(); }
  Index bar_count() const { return static_cast<Index>(bars.size()); }
  Index hinge_count() const { return static_cast<Index>(hinges.size()); }

  /// Appends a node and returns its index.
  Index add_node(const Eigen::Vector3d& position, double mass);
  /// Appends a bar. A NaN rest length is replaced by the current distance.
  Index add_bar(Index i, Index j, double stiffness, double rest_length = std::numeric_limits<double>::quiet_NaN(),
                double damping = kInheritDamping, bool rigid = false);
  Index add_hinge(const std::array<Index, 4>& nodes, double stiffness, double rest_angle, bool rigid = false);

  /// Current length of every bar evaluated on `positions`.
  Eigen::VectorXd bar_lengths(const NodeMatrixd& at) const;
};

bool operator==(const Bar& a, const Bar& b);
bool operator==(const Hinge& a, const Hinge& b);
bool operator==(const Geometry& a, const Geometry& b);

}  // namespace prc
