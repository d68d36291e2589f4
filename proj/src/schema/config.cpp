#include "prc/schema/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "prc/error.hpp"
#include "prc/schema/compare.hpp"

namespace prc {

using nlohmann::json;

Index stable_floor(double x) { return static_cast<Index>(std::floor(x + 1e-9 * std::max(1.0, std::abs(x)))); }

Index SimConfig::sample_count() const {
  if (!(save_interval > 0) || !(duration >= 0)) return 0;
  return stable_floor(duration / save_interval) + 1;
}

Index SimConfig::step_count() const {
  if (!(dt > 0)) return 0;
  return static_cast<Index>(std::llround(duration / dt));
}

bool operator==(const Actuator& a, const Actuator& b) {
  return a.node == b.node && a.signal == b.signal && a.mode == b.mode && a.dofs == b.dofs;
}

bool operator==(const SimConfig& a, const SimConfig& b) {
  return bit_equal(a.duration, b.duration) && bit_equal(a.dt, b.dt) && bit_equal(a.save_interval, b.save_interval) &&
         bit_equal(a.gravity, b.gravity) && bit_equal(a.damping, b.damping) &&
         bit_equal(a.global_damping, b.global_damping) && a.actuators == b.actuators &&
         bit_equal(a.pbd_tolerance, b.pbd_tolerance) && bit_equal(a.pbd_angle_tolerance, b.pbd_angle_tolerance) &&
         a.pbd_max_iterations == b.pbd_max_iterations && a.use_scaler == b.use_scaler &&
         a.deterministic == b.deterministic;
}

std::string to_json(const SimConfig& c) {
  json j;
  j["schema_version"] = 1;
  j["duration"] = c.duration;
  j["dt"] = c.dt;
  j["save_interval"] = c.save_interval;
  j["gravity"] = {c.gravity.x(), c.gravity.y(), c.gravity.z()};
  j["damping"] = c.damping;
  j["global_damping"] = c.global_damping;
  j["pbd"] = {{"tolerance", c.pbd_tolerance},
              {"angle_tolerance", c.pbd_angle_tolerance},
              {"max_iterations", c.pbd_max_iterations}};
  j["scaler"] = c.use_scaler;
  j["deterministic"] = c.deterministic;
  j["actuators"] = json::array();
  for (const auto& a : c.actuators) {
    json dofs = json::array();
    for (int d = 0; d < 3; ++d)
      if (a.dofs[static_cast<std::size_t>(d)]) dofs.push_back(d);
    j["actuators"].push_back({{"node", a.node},
                              {"signal", a.signal},
                              {"type", a.mode == ActuationMode::Position ? "position" : "force"},
                              {"dof", dofs}});
  }
  return j.dump(2);
}

namespace {

Eigen::Vector3d read_gravity(const json& g) {
  // A bare number is the magnitude of gravity along -z.
  if (g.is_number()) return {0.0, 0.0, -g.get<double>()};
  if (g.is_array() && g.size() == 3) return {g[0].get<double>(), g[1].get<double>(), g[2].get<double>()};
  throw ConfigurationError("config: 'gravity' must be a number or a 3-element array");
}

std::array<bool, 3> read_dofs(const json& d) {
  std::array<bool, 3> dofs{false, false, false};
  auto set = [&](const json& v) {
    const int k = v.get<int>();
    if (k < 0 || k > 2) throw ConfigurationError("config: actuator dof must be 0, 1 or 2");
    dofs[static_cast<std::size_t>(k)] = true;
  };
  if (d.is_array())
    for (const auto& v : d) set(v);
  else
    set(d);
  return dofs;
}

}  // namespace

SimConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigurationError(std::string("config: invalid JSON: ") + e.what());
  }
  SimConfig c;
  try {
    for (const char* key : {"duration", "dt", "save_interval"})
      if (!j.contains(key)) throw ConfigurationError(std::string("config: missing required key '") + key + "'");
    c.duration = j.at("duration").get<double>();
    c.dt = j.at("dt").get<double>();
    c.save_interval = j.at("save_interval").get<double>();
    if (j.contains("gravity")) c.gravity = read_gravity(j.at("gravity"));
    c.damping = j.value("damping", 0.0);
    c.global_damping = j.value("global_damping", 0.0);
    if (j.contains("pbd")) {
      const auto& p = j.at("pbd");
      c.pbd_tolerance = p.value("tolerance", c.pbd_tolerance);
      c.pbd_angle_tolerance = p.value("angle_tolerance", c.pbd_angle_tolerance);
      c.pbd_max_iterations = p.value("max_iterations", c.pbd_max_iterations);
    }
    c.use_scaler = j.value("scaler", false);
    c.deterministic = j.value("deterministic", true);
    if (j.contains("actuators")) {
      for (const auto& a : j.at("actuators")) {
        Actuator act;
        act.node = a.at("node").get<Index>();
        act.signal = a.at("signal").get<std::string>();
        const auto type = a.value("type", std::string("position"));
        if (type == "position")
          act.mode = ActuationMode::Position;
        else if (type == "force")
          act.mode = ActuationMode::Force;
        else
          throw ConfigurationError("config: actuator type must be 'position' or 'force', got '" + type + "'");
        if (a.contains("dof")) act.dofs = read_dofs(a.at("dof"));
        c.actuators.push_back(act);
      }
    }
  } catch (const json::exception& e) {
    throw ConfigurationError(std::string("config: ") + e.what());
  }
  return c;
}

void save_config(const SimConfig& config, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << to_json(config) << "\n";
}

SimConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

}  // namespace prc
