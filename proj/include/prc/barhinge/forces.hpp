#pragma once

#include "prc/barhinge/backend.hpp"
#include "prc/barhinge/kernels.hpp"
#include "prc/schema/geometry.hpp"

namespace prc {

struct SystemState {
  NodeMatrixd positions;
  NodeMatrixd velocities;
  double time = 0.0;
};

/// Elastic plus viscous forces of all soft bars. Bars whose damping is unset
/// use `default_damping`. Rigid bars are skipped (PBD owns them).
NodeMatrixd axial_and_damping_forces(const SystemState& state, const Geometry& geometry, double default_damping = 0.0,
                                     const Backend& backend = default_backend());

/// Restoring forces of all soft hinges.
NodeMatrixd hinge_forces(const SystemState& state, const Geometry& geometry,
                         const Backend& backend = default_backend());

Dihedral<double> dihedral_angle_and_gradient(const Eigen::Vector3d& p0, const Eigen::Vector3d& p1,
                                             const Eigen::Vector3d& p2, const Eigen::Vector3d& p3);

/// Precomputed soft-force evaluator for the integrator. Element contributions
/// are computed in parallel into per-element slots and scattered into nodes
/// in element order, so the sum is bit-reproducible for any thread count.
class ForceModel {
 public:
  ForceModel(const Geometry& geometry, double default_damping, const Eigen::Vector3d& gravity, double global_damping,
             const Backend& backend = default_backend());

  /// Overwrites F with bar + hinge + gravity + global drag forces.
  void evaluate(const NodeMatrixd& P, const NodeMatrixd& V, NodeMatrixd& F) const;

 private:
  void bar_terms(const NodeMatrixd& P, const NodeMatrixd& V, bool with_damping) const;
  void hinge_terms(const NodeMatrixd& P) const;
  friend NodeMatrixd axial_and_damping_forces(const SystemState&, const Geometry&, double, const Backend&);
  friend NodeMatrixd hinge_forces(const SystemState&, const Geometry&, const Backend&);

  const Geometry& geometry_;
  const Backend& backend_;
  Eigen::Vector3d gravity_;
  double global_damping_;
  Eigen::VectorXd inv_mass_;
  Eigen::VectorXd mass_finite_;  // 0 for pinned nodes
  Eigen::VectorXd zeta_;         // resolved per-bar damping ratio
  std::vector<Index> soft_bars_, soft_hinges_;
  mutable std::vector<Eigen::Vector3d> bar_slots_;
  mutable std::vector<Eigen::Matrix<double, 4, 3>> hinge_slots_;
};

/// Kinetic, bar-elastic and hinge-elastic energy of a state. Pinned nodes
/// carry no kinetic energy; rigid elements carry no elastic energy.
Eigen::Vector3d system_energies(const NodeMatrixd& P, const NodeMatrixd& V, const Geometry& geometry);

}  // namespace prc
