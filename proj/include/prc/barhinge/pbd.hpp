#pragma once

#include "prc/schema/geometry.hpp"

namespace prc {

struct SolverConfig {
  double dt = 1e-3;
  double tolerance = 1e-6;        // rigid bar |l - l0|
  double angle_tolerance = 1e-6;  // rigid hinge |θ - θ0|, radians
  int max_iterations = 200;
  bool deterministic = true;
};

struct PbdDiagnostic {
  bool converged = true;
  int iterations = 0;
  double worst_bar_residual = 0.0;
  double worst_hinge_residual = 0.0;
};

/// Gauss-Seidel projection of rigid bars and hinges, swept in index order.
/// Corrections are weighted by per-DOF inverse mass `inv_mass` (N×3; zero for
/// pinned nodes and position-driven DOFs). Iterates until every residual is
/// within tolerance or max_iterations sweeps have run.
PbdDiagnostic pbd_project(NodeMatrixd& positions, const Geometry& geometry, const SolverConfig& config,
                          const NodeMatrixd& inv_mass);

/// Projection followed by the velocity correction
/// V += (P_projected - P_before) / dt.
PbdDiagnostic pbd_project(NodeMatrixd& positions, NodeMatrixd& velocities, const Geometry& geometry,
                          const SolverConfig& config, const NodeMatrixd& inv_mass);

/// Per-DOF inverse masses of a geometry (pinned rows are zero).
NodeMatrixd dof_inverse_mass(const Geometry& geometry);

bool has_rigid_elements(const Geometry& geometry);

}  // namespace prc
