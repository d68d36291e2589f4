#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "prc/schema/types.hpp"

namespace prc {

enum class ActuationMode { Position, Force };

/// Wires one signal to one node. The signal's columns feed the selected
/// degrees of freedom in x, y, z order, so a scalar signal drives one axis.
/// Position mode prescribes a displacement from the node's initial
/// coordinate; force mode adds the value to the node's force accumulator.
struct Actuator {
  Index node = 0;
  std::string signal;
  ActuationMode mode = ActuationMode::Position;
  std::array<bool, 3> dofs{false, false, true};

  int dof_count() const { return int(dofs[0]) + int(dofs[1]) + int(dofs[2]); }
};

struct SimConfig {
  double duration = 0.0;
  double dt = 0.0;
  double save_interval = 0.0;
  Eigen::Vector3d gravity = Eigen::Vector3d::Zero();
  // Default damping ratio for bars that do not set their own.
  double damping = 0.0;
  // Mass-proportional viscous drag coefficient (1/time), F = -c m v.
  double global_damping = 0.0;
  std::vector<Actuator> actuators;
  double pbd_tolerance = 1e-6;        // length units, rigid bars
  double pbd_angle_tolerance = 1e-6;  // radians, rigid hinges
  int pbd_max_iterations = 200;
  bool use_scaler = false;
  bool deterministic = true;

  /// Saved sample count T_s = floor(duration / save_interval) + 1.
  Index sample_count() const;
  /// Integrator step count round(duration / dt).
  Index step_count() const;
};

bool operator==(const Actuator& a, const Actuator& b);
bool operator==(const SimConfig& a, const SimConfig& b);

std::string to_json(const SimConfig& config);
SimConfig config_from_json(const std::string& text);
void save_config(const SimConfig& config, const std::filesystem::path& path);
SimConfig load_config(const std::filesystem::path& path);

/// floor(x) tolerant of quotients like 10.0 / 0.01 landing a hair below an
/// integer.
Index stable_floor(double x);

}  // namespace prc
