#pragma once

#include "prc/schema/records.hpp"

namespace prc {

/// Fills bar_strains, hinge_angles and energies from positions and
/// velocities. Strain is (l - l0) / l0; energies follow system_energies.
TrajectoryRecord postprocess(TrajectoryRecord record, const Geometry& geometry);

}  // namespace prc
