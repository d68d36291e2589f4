#include "prc/barhinge/actuation.hpp"

#include <algorithm>
#include <cmath>

#include "prc/error.hpp"

namespace prc {

Actuation::Actuation(const Geometry& geometry, const SignalSet& signals, const SimConfig& config) : dt_(signals.dt) {
  for (const auto& act : config.actuators) {
    const auto& values = signals.at(act.signal);
    if (values.rows() == 0) throw ParameterError("signal '" + act.signal + "' is empty");
    Index column = 0;
    for (int d = 0; d < 3; ++d) {
      if (!act.dofs[static_cast<std::size_t>(d)]) continue;
      const Index c = values.cols() == 1 ? 0 : column;
      if (c >= values.cols()) throw ParameterError("signal '" + act.signal + "' has too few columns");
      Drive drive{act.node, d, &values, c, geometry.positions(act.node, d)};
      (act.mode == ActuationMode::Position ? position_ : force_).push_back(drive);
      ++column;
    }
  }
}

double Actuation::value(const Drive& d, double t) const {
  const Index n = d.values->rows();
  const double pos = std::clamp(t / dt_, 0.0, static_cast<double>(n - 1));
  const Index k = std::min<Index>(static_cast<Index>(std::floor(pos)), n - 1);
  if (k == n - 1) return (*d.values)(k, d.column);
  const double w = pos - static_cast<double>(k);
  return (1.0 - w) * (*d.values)(k, d.column) + w * (*d.values)(k + 1, d.column);
}

double Actuation::slope(const Drive& d, double t) const {
  const Index n = d.values->rows();
  if (n < 2) return 0.0;
  const double pos = std::clamp(t / dt_, 0.0, static_cast<double>(n - 1));
  const Index k = std::min<Index>(static_cast<Index>(std::floor(pos)), n - 2);
  return ((*d.values)(k + 1, d.column) - (*d.values)(k, d.column)) / dt_;
}

void Actuation::constrain(double t, NodeMatrixd& P, NodeMatrixd& V) const {
  for (const auto& d : position_) {
    P(d.node, d.dof) = d.origin + value(d, t);
    V(d.node, d.dof) = slope(d, t);
  }
}

void Actuation::add_forces(double t, NodeMatrixd& F) const {
  for (const auto& d : force_) F(d.node, d.dof) += value(d, t);
}

void Actuation::freeze(NodeMatrixd& inv_mass) const {
  for (const auto& d : position_) inv_mass(d.node, d.dof) = 0.0;
}

}  // namespace prc
