#include "prc/barhinge/engine.hpp"

#include <cmath>

#include "prc/barhinge/actuation.hpp"
#include "prc/barhinge/forces.hpp"
#include "prc/barhinge/postprocess.hpp"
#include "prc/error.hpp"
#include "prc/schema/validate.hpp"

namespace prc {

SolverConfig solver_config(const SimConfig& c) {
  SolverConfig s;
  s.dt = c.dt;
  s.tolerance = c.pbd_tolerance;
  s.angle_tolerance = c.pbd_angle_tolerance;
  s.max_iterations = c.pbd_max_iterations;
  s.deterministic = c.deterministic;
  return s;
}

namespace {

SimulationResult integrate(const Bundle& b, const Backend& backend) {
  const auto& g = b.geometry;
  const auto& c = b.config;
  const Index N = g.node_count();
  const Index samples = c.sample_count();
  const Index last_step = static_cast<Index>(std::llround(static_cast<double>(samples - 1) * c.save_interval / c.dt));
  auto sample_step = [&](Index k) {
    return static_cast<Index>(std::llround(static_cast<double>(k) * c.save_interval / c.dt));
  };

  const ForceModel model(g, c.damping, c.gravity, c.global_damping, backend);
  const Actuation actuation(g, b.signals, c);
  NodeMatrixd W = dof_inverse_mass(g);
  actuation.freeze(W);
  const SolverConfig solver = solver_config(c);
  const bool rigid = has_rigid_elements(g);

  NodeMatrixd P = g.positions;
  NodeMatrixd V = NodeMatrixd::Zero(N, 3);
  actuation.constrain(0.0, P, V);

  SimulationResult result;
  TrajectoryRecord& rec = result.record;
  rec = TrajectoryRecord::allocate(samples, N, g.bar_count(), g.hinge_count());
  rec.dt = c.save_interval;
  rec.provenance = Provenance::Simulated;
  auto save = [&](Index k) {
    rec.positions.row(k) = Eigen::Map<const Eigen::RowVectorXd>(P.data(), 3 * N);
    rec.velocities.row(k) = Eigen::Map<const Eigen::RowVectorXd>(V.data(), 3 * N);
  };
  save(0);

  auto force = [&](double t, const NodeMatrixd& Ps, const NodeMatrixd& Vs, NodeMatrixd& F) {
    model.evaluate(Ps, Vs, F);
    actuation.add_forces(t, F);
  };
  auto constrain = [&](double t, NodeMatrixd& Ps, NodeMatrixd& Vs) { actuation.constrain(t, Ps, Vs); };

  Index saved = 1;
  Index next = samples > 1 ? sample_step(1) : last_step + 1;
  try {
    for (Index step = 1; step <= last_step; ++step) {
      const double t0 = static_cast<double>(step - 1) * c.dt;
      rk4_advance<double>(P, V, t0, c.dt, W, force, constrain);
      if (rigid) {
        const auto diag = pbd_project(P, V, g, solver, W);
        if (!diag.converged) ++result.pbd_unconverged_steps;
        result.worst_pbd_residual =
            std::max({result.worst_pbd_residual, diag.worst_bar_residual, diag.worst_hinge_residual});
        if (!P.allFinite() || !V.allFinite())
          throw DivergenceError(static_cast<double>(step) * c.dt, "non-finite state after constraint projection");
      }
      while (saved < samples && step == next) {
        save(saved++);
        next = saved < samples ? sample_step(saved) : last_step + 1;
      }
    }
  } catch (const DivergenceError& e) {
    result.diverged = true;
    result.failure_time = e.time();
    result.failure = e.what();
  } catch (const SingularConfiguration& e) {
    result.diverged = true;
    result.failure_time = static_cast<double>(saved) * c.save_interval;
    result.failure = e.what();
  }
  if (result.diverged) {
    rec.positions.conservativeResize(saved, Eigen::NoChange);
    rec.velocities.conservativeResize(saved, Eigen::NoChange);
    rec.partial = true;
  }
  try {
    rec = postprocess(std::move(rec), g);
  } catch (const SingularConfiguration& e) {
    // Only a diverged run can end in a collapsed element; keep raw channels.
    if (!result.diverged) throw;
    rec.bar_strains = RowMatrixd::Constant(rec.sample_count(), g.bar_count(), std::nan(""));
    rec.hinge_angles = RowMatrixd::Constant(rec.sample_count(), g.hinge_count(), std::nan(""));
    rec.energies = RowMatrixd::Constant(rec.sample_count(), 3, std::nan(""));
  }
  return result;
}

}  // namespace

SimulationResult run_simulation(const Bundle& bundle, const Backend& backend) {
  const auto report = validate_bundle(bundle.geometry, bundle.signals, bundle.config);
  if (!report.ok()) throw ValidationError("bundle failed validation:\n" + report.summary());

  SimulationResult result;
  if (bundle.config.use_scaler) {
    const ScalerParams scales = default_scales(bundle.geometry);
    result = integrate(scale_bundle(bundle, scales), backend);
    result.record = unscale_record(result.record, scales);
    result.worst_pbd_residual *= scales.length;
    result.failure_time *= scales.time;
    result.scales = scales;
  } else {
    result = integrate(bundle, backend);
  }
  result.record.geometry = bundle.geometry;
  result.record.signals = bundle.signals;
  result.record.config = bundle.config;
  return result;
}

TrajectoryRecord simulate(const Bundle& bundle, const Backend& backend) {
  auto result = run_simulation(bundle, backend);
  if (result.diverged) throw DivergenceError(result.failure_time, result.failure);
  return std::move(result.record);
}

}  // namespace prc
