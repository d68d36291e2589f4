#pragma once

#include <optional>
#include <string>

#include "prc/barhinge/backend.hpp"
#include "prc/barhinge/pbd.hpp"
#include "prc/barhinge/scaler.hpp"
#include "prc/schema/bundle.hpp"
#include "prc/schema/records.hpp"

namespace prc {

struct SimulationResult {
  TrajectoryRecord record;  // partial when `diverged`
  bool diverged = false;
  double failure_time = 0.0;
  std::string failure;
  Index pbd_unconverged_steps = 0;
  double worst_pbd_residual = 0.0;
  std::optional<ScalerParams> scales;  // set when the scaler was applied
};

SolverConfig solver_config(const SimConfig& config);

/// Hybrid integration: per step, actuate, advance soft forces + gravity +
/// global drag with RK4, then project rigid elements. The state is sampled
/// every save_interval starting at t = 0. Throws ValidationError if the
/// bundle does not validate; divergence is reported through the result.
SimulationResult run_simulation(const Bundle& bundle, const Backend& backend = default_backend());

/// run_simulation that raises DivergenceError instead of returning a partial
/// record.
TrajectoryRecord simulate(const Bundle& bundle, const Backend& backend = default_backend());

}  // namespace prc
