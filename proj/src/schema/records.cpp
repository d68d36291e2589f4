#include "prc/schema/records.hpp"

#include "prc/error.hpp"
#include "prc/schema/compare.hpp"

namespace prc {

std::string to_string(Provenance p) { return p == Provenance::Simulated ? "simulated" : "tracked"; }

Provenance provenance_from_string(const std::string& s) {
  if (s == "simulated") return Provenance::Simulated;
  if (s == "tracked") return Provenance::Tracked;
  throw SchemaError("provenance", "schema violation: unknown provenance '" + s + "'");
}

TrajectoryRecord TrajectoryRecord::allocate(Index samples, Index nodes, Index bars, Index hinges) {
  TrajectoryRecord r;
  r.node_count = nodes;
  r.positions = RowMatrixd::Zero(samples, 3 * nodes);
  r.velocities = RowMatrixd::Zero(samples, 3 * nodes);
  r.bar_strains = RowMatrixd::Zero(samples, bars);
  r.hinge_angles = RowMatrixd::Zero(samples, hinges);
  r.energies = RowMatrixd::Zero(samples, 3);
  return r;
}

Eigen::VectorXd TrajectoryRecord::actuation_signal(std::size_t index, int dof) const {
  if (!signals || !config) throw CapabilityError("record carries no actuation signals");
  if (index >= config->actuators.size())
    throw ParameterError("actuator index " + std::to_string(index) + " out of range (" +
                         std::to_string(config->actuators.size()) + " actuators)");
  const auto& act = config->actuators[index];
  // Column of the signal that drives `dof`.
  Index column = -1, k = 0;
  for (int d = 0; d < 3; ++d) {
    if (!act.dofs[static_cast<std::size_t>(d)]) continue;
    if (dof < 0 || d == dof) {
      column = k;
      break;
    }
    ++k;
  }
  if (column < 0) throw ParameterError("actuator " + std::to_string(index) + " does not drive dof " + std::to_string(dof));
  const auto& values = signals->at(act.signal);
  const Index usable = std::min<Index>(sample_count(), stable_floor(signals->span(act.signal) / dt) + 1);
  if (column >= values.cols()) throw ParameterError("signal '" + act.signal + "' has too few columns");
  return signals->resample(act.signal, column, dt, usable);
}

namespace {
template <typename T>
bool optional_equal(const std::optional<T>& a, const std::optional<T>& b) {
  if (a.has_value() != b.has_value()) return false;
  return !a || *a == *b;
}
}  // namespace

bool operator==(const TrajectoryRecord& a, const TrajectoryRecord& b) {
  return a.node_count == b.node_count && bit_equal(a.positions, b.positions) &&
         bit_equal(a.velocities, b.velocities) && bit_equal(a.bar_strains, b.bar_strains) &&
         bit_equal(a.hinge_angles, b.hinge_angles) && bit_equal(a.energies, b.energies) && bit_equal(a.dt, b.dt) &&
         a.provenance == b.provenance && a.partial == b.partial && optional_equal(a.geometry, b.geometry) &&
         optional_equal(a.signals, b.signals) && optional_equal(a.config, b.config);
}

bool operator==(const ReadoutRecord& a, const ReadoutRecord& b) {
  return a.task == b.task && bit_equal(a.weights, b.weights) && a.bias == b.bias && bit_equal(a.ridge, b.ridge) &&
         a.feature_labels == b.feature_labels && bit_equal(a.predictions, b.predictions) &&
         bit_equal(a.targets, b.targets) && bit_equal(a.dt, b.dt) && a.washout_end == b.washout_end &&
         a.train_end == b.train_end && a.test_end == b.test_end && bit_equal(a.nmse_train, b.nmse_train) &&
         bit_equal(a.nmse_test, b.nmse_test) && bit_equal(a.nrmse_train, b.nrmse_train) &&
         bit_equal(a.nrmse_test, b.nrmse_test);
}

bool operator==(const CapacityTable& a, const CapacityTable& b) {
  return a.exponents == b.exponents && bit_equal(a.degree, b.degree) && bit_equal(a.c_raw, b.c_raw) &&
         bit_equal(a.c, b.c) && bit_equal(a.mc_lin, b.mc_lin) && bit_equal(a.mc_nonlin, b.mc_nonlin) &&
         bit_equal(a.ipc_tot, b.ipc_tot) && a.tau_s == b.tau_s && a.n_s == b.n_s && a.k_delay == b.k_delay &&
         bit_equal(a.epsilon, b.epsilon) && bit_equal(a.ridge, b.ridge);
}

bool operator==(const MetricsRecord& a, const MetricsRecord& b) {
  auto maps_equal = [](const std::map<std::string, double>& x, const std::map<std::string, double>& y) {
    if (x.size() != y.size()) return false;
    for (const auto& [k, v] : x) {
      auto it = y.find(k);
      if (it == y.end() || !bit_equal(v, it->second)) return false;
    }
    return true;
  };
  if (a.arrays.size() != b.arrays.size()) return false;
  for (const auto& [k, v] : a.arrays) {
    auto it = b.arrays.find(k);
    if (it == b.arrays.end() || !bit_equal(v, it->second)) return false;
  }
  return a.group == b.group && maps_equal(a.scalars, b.scalars) && maps_equal(a.parameters, b.parameters) &&
         a.notes == b.notes && bit_equal(a.mc_delays, b.mc_delays) && bit_equal(a.mc_profile, b.mc_profile) &&
         optional_equal(a.capacity, b.capacity);
}

}  // namespace prc
