#include "prc/schema/signals.hpp"

#include <algorithm>
#include <cmath>

#include "prc/error.hpp"
#include "prc/schema/compare.hpp"

namespace prc {

const RowMatrixd& SignalSet::at(const std::string& name) const {
  auto it = signals.find(name);
  if (it == signals.end()) throw ParameterError("unknown signal '" + name + "'");
  return it->second;
}

double SignalSet::span(const std::string& name) const {
  const auto rows = at(name).rows();
  return rows > 0 ? static_cast<double>(rows - 1) * dt : 0.0;
}

Eigen::VectorXd SignalSet::sample(const std::string& name, double t) const {
  const auto& values = at(name);
  const Index n = values.rows();
  if (n == 0) throw ParameterError("signal '" + name + "' is empty");
  const double pos = t / dt;
  // Allow round-off past the final sample.
  if (pos < -1e-9 || pos > static_cast<double>(n - 1) + 1e-6)
    throw ParameterError("signal '" + name + "' does not cover t=" + std::to_string(t));
  const double clamped = std::clamp(pos, 0.0, static_cast<double>(n - 1));
  const Index k = std::min<Index>(static_cast<Index>(std::floor(clamped)), n - 1);
  if (k == n - 1) return values.row(k).transpose();
  const double w = clamped - static_cast<double>(k);
  return ((1.0 - w) * values.row(k) + w * values.row(k + 1)).transpose();
}

Eigen::VectorXd SignalSet::resample(const std::string& name, Index column, double step, Index count) const {
  Eigen::VectorXd out(count);
  for (Index k = 0; k < count; ++k) out(k) = sample(name, static_cast<double>(k) * step)(column);
  return out;
}

bool operator==(const SignalSet& a, const SignalSet& b) {
  if (!bit_equal(a.dt, b.dt) || a.signals.size() != b.signals.size()) return false;
  for (const auto& [name, values] : a.signals) {
    auto it = b.signals.find(name);
    if (it == b.signals.end() || !bit_equal(values, it->second)) return false;
  }
  return true;
}

}  // namespace prc
