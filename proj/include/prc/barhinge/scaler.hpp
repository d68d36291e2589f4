#pragma once

#include "prc/schema/bundle.hpp"
#include "prc/schema/records.hpp"

namespace prc {

/// Characteristic length, mass and time used to nondimensionalize a bundle.
struct ScalerParams {
  double length = 1.0;
  double mass = 1.0;
  double time = 1.0;
};

/// L* = mean bar rest length, M* = mean finite node mass, T* = sqrt(M*/k̄)
/// with k̄ the mean bar stiffness, each rounded to the nearest power of two so
/// that scaling and unscaling are exact in floating point.
ScalerParams default_scales(const Geometry& geometry);

/// Rewrites every dimensional quantity in units of (L*, M*, T*). Position
/// signals scale as lengths and force signals as forces; damping ratios and
/// angles are dimensionless.
Bundle scale_bundle(const Bundle& bundle, const ScalerParams& params);
Bundle unscale_bundle(const Bundle& bundle, const ScalerParams& params);
TrajectoryRecord scale_record(const TrajectoryRecord& record, const ScalerParams& params);
TrajectoryRecord unscale_record(const TrajectoryRecord& record, const ScalerParams& params);

}  // namespace prc
