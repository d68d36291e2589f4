#include "prc/barhinge/scaler.hpp"

#include <cmath>
#include <set>

#include "prc/error.hpp"

namespace prc {

namespace {

double nearest_power_of_two(double x) { return std::exp2(std::round(std::log2(x))); }

void check(const ScalerParams& p) {
  if (!(p.length > 0) || !(p.mass > 0) || !(p.time > 0) || !std::isfinite(p.length) || !std::isfinite(p.mass) ||
      !std::isfinite(p.time))
    throw ParameterError("characteristic scales must be finite and > 0");
}

// Multipliers taking physical values to scaled ones; `inverse` flips them.
struct Factors {
  double length, mass, time, stiffness, hinge_stiffness, force, velocity, energy, accel;
  Factors(const ScalerParams& p, bool inverse) {
    // Each factor is formed from the base scales directly (not by inverting
    // a composite) so powers of two stay exact.
    const double L = p.length, M = p.mass, T = p.time;
    length = inverse ? L : 1.0 / L;
    mass = inverse ? M : 1.0 / M;
    time = inverse ? T : 1.0 / T;
    stiffness = inverse ? M / (T * T) : (T * T) / M;
    hinge_stiffness = inverse ? (M * L * L) / (T * T) : (T * T) / (M * L * L);
    force = inverse ? (M * L) / (T * T) : (T * T) / (M * L);
    velocity = inverse ? L / T : T / L;
    energy = hinge_stiffness;
    accel = inverse ? L / (T * T) : (T * T) / L;
  }
};

Bundle transform(const Bundle& in, const ScalerParams& p, bool inverse) {
  check(p);
  const Factors k(p, inverse);
  Bundle out = in;
  out.geometry.positions *= k.length;
  for (Index n = 0; n < out.geometry.masses.size(); ++n)
    if (!is_pinned(out.geometry.masses(n))) out.geometry.masses(n) *= k.mass;
  for (auto& bar : out.geometry.bars) {
    bar.stiffness *= k.stiffness;
    bar.rest_length *= k.length;
  }
  for (auto& hinge : out.geometry.hinges) hinge.stiffness *= k.hinge_stiffness;

  std::set<std::string> as_position, as_force;
  for (const auto& act : in.config.actuators)
    (act.mode == ActuationMode::Position ? as_position : as_force).insert(act.signal);
  for (const auto& name : as_position)
    if (as_force.count(name)) throw ParameterError("signal '" + name + "' drives both position and force actuators");
  out.signals.dt *= k.time;
  for (auto& [name, values] : out.signals.signals) {
    if (as_position.count(name)) values *= k.length;
    if (as_force.count(name)) values *= k.force;
  }

  auto& c = out.config;
  c.duration *= k.time;
  c.dt *= k.time;
  c.save_interval *= k.time;
  c.gravity *= k.accel;
  c.global_damping /= k.time;
  c.pbd_tolerance *= k.length;
  return out;
}

RowMatrixd scaled(const RowMatrixd& m, double f) { return m * f; }

TrajectoryRecord transform(const TrajectoryRecord& in, const ScalerParams& p, bool inverse) {
  check(p);
  const Factors k(p, inverse);
  TrajectoryRecord out = in;
  out.positions = scaled(in.positions, k.length);
  out.velocities = scaled(in.velocities, k.velocity);
  out.energies = scaled(in.energies, k.energy);
  out.dt = in.dt * k.time;
  if (in.geometry && in.signals && in.config) {
    const Bundle b = transform(Bundle{*in.geometry, *in.signals, *in.config}, p, inverse);
    out.geometry = b.geometry;
    out.signals = b.signals;
    out.config = b.config;
  }
  return out;
}

}  // namespace

ScalerParams default_scales(const Geometry& g) {
  ScalerParams p;
  double l_sum = 0.0, k_sum = 0.0, m_sum = 0.0;
  Index m_count = 0;
  for (const auto& bar : g.bars) {
    l_sum += bar.rest_length;
    k_sum += bar.stiffness;
  }
  for (Index n = 0; n < g.masses.size(); ++n)
    if (!is_pinned(g.masses(n))) {
      m_sum += g.masses(n);
      ++m_count;
    }
  if (!g.bars.empty() && l_sum > 0) p.length = nearest_power_of_two(l_sum / static_cast<double>(g.bars.size()));
  if (m_count > 0 && m_sum > 0) p.mass = nearest_power_of_two(m_sum / static_cast<double>(m_count));
  if (!g.bars.empty() && k_sum > 0)
    p.time = nearest_power_of_two(std::sqrt((m_count > 0 ? m_sum / static_cast<double>(m_count) : 1.0) /
                                            (k_sum / static_cast<double>(g.bars.size()))));
  return p;
}

Bundle scale_bundle(const Bundle& bundle, const ScalerParams& params) { return transform(bundle, params, false); }
Bundle unscale_bundle(const Bundle& bundle, const ScalerParams& params) { return transform(bundle, params, true); }
TrajectoryRecord scale_record(const TrajectoryRecord& r, const ScalerParams& p) { return transform(r, p, false); }
TrajectoryRecord unscale_record(const TrajectoryRecord& r, const ScalerParams& p) { return transform(r, p, true); }

}  // namespace prc
