#include "prc/schema/validate.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

namespace prc {

bool ValidationReport::mentions(const std::string& text) const {
  for (const auto& e : entries)
    if (e.message.find(text) != std::string::npos || e.location.find(text) != std::string::npos) return true;
  return false;
}

std::string ValidationReport::summary() const {
  std::ostringstream out;
  for (const auto& e : entries) out << e.location << ": " << e.message << "\n";
  return out.str();
}

namespace {

std::string at(const std::string& base, std::size_t i, const std::string& field = "") {
  std::string s = base + "[" + std::to_string(i) + "]";
  return field.empty() ? s : s + "." + field;
}

}  // namespace

ValidationReport validate_bundle(const Geometry& g, const SignalSet& s, const SimConfig& c) {
  ValidationReport report;
  auto add = [&](std::string location, std::string message) {
    report.entries.push_back({std::move(location), std::move(message)});
  };
  const Index N = g.node_count();
  constexpr double two_pi = 2.0 * std::numbers::pi;

  if (g.masses.size() != N) add("geometry.masses", "mass count differs from node count");
  for (Index n = 0; n < N; ++n) {
    if (!g.positions.row(n).allFinite()) add(at("nodes", static_cast<std::size_t>(n), "position"), "non-finite coordinate");
    if (n < g.masses.size()) {
      const double m = g.masses(n);
      if (!is_pinned(m) && !(m > 0 && std::isfinite(m)))
        add(at("nodes", static_cast<std::size_t>(n), "mass"), "mass must be positive or the pinned sentinel");
    }
  }
  auto in_range = [&](Index i) { return i >= 0 && i < N; };

  for (std::size_t b = 0; b < g.bars.size(); ++b) {
    const auto& bar = g.bars[b];
    if (!in_range(bar.i) || !in_range(bar.j))
      add(at("bars", b), "bar endpoint out of range");
    else if (bar.i == bar.j)
      add(at("bars", b), "bar endpoints must be distinct");
    if (!(bar.rest_length > 0) || !std::isfinite(bar.rest_length)) add(at("bars", b, "rest_length"), "rest length must be > 0");
    if (!(bar.stiffness >= 0) || !std::isfinite(bar.stiffness)) add(at("bars", b, "stiffness"), "stiffness must be finite and >= 0");
    if (!bar.inherits_damping() && !(bar.damping >= 0 && std::isfinite(bar.damping)))
      add(at("bars", b, "damping"), "damping ratio must be finite and >= 0");
  }
  for (std::size_t h = 0; h < g.hinges.size(); ++h) {
    const auto& hinge = g.hinges[h];
    bool indices_ok = true;
    for (Index n : hinge.nodes)
      if (!in_range(n)) indices_ok = false;
    if (!indices_ok) add(at("hinges", h), "hinge node out of range");
    if (std::set<Index>(hinge.nodes.begin(), hinge.nodes.end()).size() != 4)
      add(at("hinges", h), "hinge nodes must be distinct");
    if (!(hinge.rest_angle > 0 && hinge.rest_angle < two_pi))
      add(at("hinges", h, "rest_angle"), "rest angle must lie in (0, 2*pi)");
    if (!(hinge.stiffness >= 0) || !std::isfinite(hinge.stiffness))
      add(at("hinges", h, "stiffness"), "stiffness must be finite and >= 0");
  }

  if (!(s.dt > 0) || !std::isfinite(s.dt)) add("signals.dt", "signal timestep must be > 0");
  for (const auto& [name, values] : s.signals)
    if (!values.allFinite()) add("signals." + name, "signal contains non-finite samples");

  bool timing_ok = true;
  if (!(c.dt > 0) || !std::isfinite(c.dt)) add("config.dt", "dt must be > 0"), timing_ok = false;
  if (!(c.save_interval >= c.dt) || !std::isfinite(c.save_interval))
    add("config.save_interval", "save_interval must be >= dt"), timing_ok = false;
  if (!(c.duration >= c.save_interval) || !std::isfinite(c.duration))
    add("config.duration", "duration must be >= save_interval"), timing_ok = false;
  if (!c.gravity.allFinite()) add("config.gravity", "gravity must be finite");
  if (!(c.damping >= 0) || !std::isfinite(c.damping)) add("config.damping", "damping must be finite and >= 0");
  if (!(c.global_damping >= 0) || !std::isfinite(c.global_damping))
    add("config.global_damping", "global damping must be finite and >= 0");
  if (!(c.pbd_tolerance > 0) || !(c.pbd_angle_tolerance > 0)) add("config.pbd", "PBD tolerances must be > 0");
  if (c.pbd_max_iterations < 1) add("config.pbd.max_iterations", "PBD needs at least one iteration");

  for (std::size_t a = 0; a < c.actuators.size(); ++a) {
    const auto& act = c.actuators[a];
    if (!in_range(act.node)) add(at("actuators", a, "node"), "actuated node out of range");
    if (act.dof_count() == 0) add(at("actuators", a, "dof"), "actuator selects no degree of freedom");
    if (!s.contains(act.signal)) {
      add(at("actuators", a, "signal"), "signal '" + act.signal + "' not found");
      continue;
    }
    const auto& values = s.at(act.signal);
    if (values.cols() != 1 && values.cols() != act.dof_count())
      add(at("actuators", a, "signal"), "signal width does not match the selected dofs");
    if (values.rows() < 1) {
      add(at("actuators", a, "signal"), "signal is empty");
    } else if (timing_ok && s.dt > 0 && s.span(act.signal) + 1e-9 * std::max(1.0, c.duration) < c.duration) {
      add(at("actuators", a, "signal"), "signal shorter than duration");
    }
  }
  if (timing_ok) report.sample_count = c.sample_count();
  return report;
}

std::vector<ValidationEntry> validate_record(const TrajectoryRecord& r) {
  std::vector<ValidationEntry> out;
  const Index T = r.sample_count();
  if (r.positions.cols() != 3 * r.node_count || r.velocities.rows() != T || r.velocities.cols() != 3 * r.node_count ||
      r.bar_strains.rows() != T || r.hinge_angles.rows() != T || r.energies.rows() != T || r.energies.cols() != 3)
    out.push_back({"record", "leading dimensions disagree"});
  if (!r.bar_strains.allFinite()) out.push_back({"bar_strains", "non-finite strain"});
  constexpr double two_pi = 2.0 * std::numbers::pi;
  if ((r.hinge_angles.array() <= 0).any() || (r.hinge_angles.array() >= two_pi).any())
    out.push_back({"hinge_angles", "angle outside (0, 2*pi)"});
  if (!(r.dt > 0)) out.push_back({"dt", "sample timestep must be > 0"});
  return out;
}

}  // namespace prc
