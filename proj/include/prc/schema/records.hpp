#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "prc/schema/config.hpp"
#include "prc/schema/geometry.hpp"
#include "prc/schema/signals.hpp"
#include "prc/schema/types.hpp"

namespace prc {

inline constexpr std::int64_t kSchemaVersion = 1;

enum class Provenance { Simulated, Tracked };

std::string to_string(Provenance p);
Provenance provenance_from_string(const std::string& s);

/// Time-indexed nodal state, the common currency between the simulator, the
/// video tracker and everything downstream.
///
/// Nodal arrays are stored T_s×3N row-major, i.e. exactly the [T_s, N, 3]
/// tensor layout; frame(t) views one sample as N×3.
struct TrajectoryRecord {
  Index node_count = 0;
  RowMatrixd positions;     // T_s × 3N
  RowMatrixd velocities;    // T_s × 3N
  RowMatrixd bar_strains;   // T_s × M
  RowMatrixd hinge_angles;  // T_s × K
  RowMatrixd energies;      // T_s × 3 (kinetic, bar elastic, hinge elastic)
  double dt = 0.0;          // sample timestep
  Provenance provenance = Provenance::Simulated;
  bool partial = false;     // set when a run aborted before the full horizon

  // Context carried along for downstream consumers (bar features, actuation
  // signals). Absent on tracked records unless supplied separately.
  std::optional<Geometry> geometry;
  std::optional<SignalSet> signals;
  std::optional<SimConfig> config;

  Index sample_count() const { return positions.rows(); }
  double duration() const { return sample_count() > 0 ? static_cast<double>(sample_count() - 1) * dt : 0.0; }

  Eigen::Map<const NodeMatrixd> frame(Index t) const {
    return {positions.row(t).data(), node_count, 3};
  }
  Eigen::Map<const NodeMatrixd> velocity_frame(Index t) const {
    return {velocities.row(t).data(), node_count, 3};
  }

  /// Allocates all channels for T samples of N nodes, M bars and K hinges.
  static TrajectoryRecord allocate(Index samples, Index nodes, Index bars, Index hinges);

  /// Actuation signal of actuator `index` along `dof`, resampled at the
  /// record's sample times. Requires signals and config.
  Eigen::VectorXd actuation_signal(std::size_t index = 0, int dof = -1) const;
};

/// Fitted linear readout and its predictions over the washout-free span
/// [washout_end, test_end) of the source record.
struct ReadoutRecord {
  std::string task;
  RowMatrixd weights;  // D×O, or (D+1)×O with the intercept in the last row
  bool bias = true;
  double ridge = 0.0;
  std::vector<std::string> feature_labels;
  RowMatrixd predictions;  // rows cover [washout_end, test_end)
  RowMatrixd targets;
  double dt = 0.0;
  Index washout_end = 0;
  Index train_end = 0;
  Index test_end = 0;
  Eigen::VectorXd nmse_train, nmse_test, nrmse_train, nrmse_test;  // per output
};

/// Per-basis-function capacities of a truncated IPC sweep.
struct CapacityTable {
  RowMatrixi exponents;     // R × (tau_s + 1), exponent per lag slot
  Eigen::VectorXd degree;   // R
  Eigen::VectorXd c_raw;    // R, unclipped test-window quotient
  Eigen::VectorXd c;        // R, clipped and thresholded
  double mc_lin = 0.0;
  double mc_nonlin = 0.0;
  double ipc_tot = 0.0;
  Index tau_s = 0;
  Index n_s = 0;
  Index k_delay = 1;
  double epsilon = 0.0;
  double ridge = 0.0;

  Index rows() const { return exponents.rows(); }
  /// Lag (in samples) of slot j.
  Index lag(Index slot) const { return slot * k_delay; }
};

/// One benchmark group of a metrics file.
struct MetricsRecord {
  std::string group;
  std::map<std::string, double> scalars;
  std::map<std::string, double> parameters;
  std::map<std::string, std::string> notes;
  Eigen::VectorXd mc_delays;   // memory-capacity profile: delay (samples)
  Eigen::VectorXd mc_profile;  //                          capacity
  std::map<std::string, RowMatrixd> arrays;
  std::optional<CapacityTable> capacity;
};

bool operator==(const TrajectoryRecord& a, const TrajectoryRecord& b);
bool operator==(const ReadoutRecord& a, const ReadoutRecord& b);
bool operator==(const CapacityTable& a, const CapacityTable& b);
bool operator==(const MetricsRecord& a, const MetricsRecord& b);

}  // namespace prc
