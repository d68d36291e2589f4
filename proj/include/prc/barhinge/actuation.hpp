#pragma once

#include <vector>

#include "prc/schema/config.hpp"
#include "prc/schema/geometry.hpp"
#include "prc/schema/signals.hpp"

namespace prc {

/// Resolved actuator wiring. Signals are linearly interpolated to the
/// requested time. Position-mode DOFs are prescribed as displacement from
/// their initial coordinate, with velocity equal to the slope of the
/// interpolant; force-mode DOFs add the signal value to the accumulator.
class Actuation {
 public:
  Actuation(const Geometry& geometry, const SignalSet& signals, const SimConfig& config);

  /// Imposes prescribed positions/velocities at time t.
  void constrain(double t, NodeMatrixd& P, NodeMatrixd& V) const;
  /// Adds actuator forces at time t.
  void add_forces(double t, NodeMatrixd& F) const;
  /// Zeroes the inverse mass of every position-driven DOF.
  void freeze(NodeMatrixd& inv_mass) const;

  bool has_position_drives() const { return !position_.empty(); }

 private:
  struct Drive {
    Index node;
    int dof;
    const RowMatrixd* values;
    Index column;
    double origin;
  };
  double value(const Drive& d, double t) const;
  double slope(const Drive& d, double t) const;

  double dt_;
  std::vector<Drive> position_, force_;
};

}  // namespace prc
