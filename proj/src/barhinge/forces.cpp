#include "prc/barhinge/forces.hpp"

#include <string>

namespace prc {

namespace {

Eigen::Vector3d row(const NodeMatrixd& m, Index i) { return m.row(i).transpose(); }

[[noreturn]] void rethrow_named(const SingularConfiguration& e, const char* kind, Index index) {
  const std::string element = std::string(kind) + "[" + std::to_string(index) + "]";
  throw SingularConfiguration(element, element + ": " + e.what());
}

}  // namespace

ForceModel::ForceModel(const Geometry& geometry, double default_damping, const Eigen::Vector3d& gravity,
                       double global_damping, const Backend& backend)
    : geometry_(geometry), backend_(backend), gravity_(gravity), global_damping_(global_damping) {
  const Index N = geometry.node_count();
  inv_mass_.resize(N);
  mass_finite_.resize(N);
  for (Index n = 0; n < N; ++n) {
    inv_mass_(n) = inverse_mass(geometry.masses(n));
    mass_finite_(n) = is_pinned(geometry.masses(n)) ? 0.0 : geometry.masses(n);
  }
  zeta_.resize(geometry.bar_count());
  for (Index b = 0; b < geometry.bar_count(); ++b) {
    const auto& bar = geometry.bars[static_cast<std::size_t>(b)];
    zeta_(b) = bar.inherits_damping() ? default_damping : bar.damping;
    if (!bar.rigid) soft_bars_.push_back(b);
  }
  for (Index h = 0; h < geometry.hinge_count(); ++h)
    if (!geometry.hinges[static_cast<std::size_t>(h)].rigid) soft_hinges_.push_back(h);
  bar_slots_.resize(soft_bars_.size());
  hinge_slots_.resize(soft_hinges_.size());
}

void ForceModel::bar_terms(const NodeMatrixd& P, const NodeMatrixd& V, bool with_damping) const {
  backend_.parallel_for(static_cast<Index>(soft_bars_.size()), [&](Index begin, Index end) {
    for (Index s = begin; s < end; ++s) {
      const Index b = soft_bars_[static_cast<std::size_t>(s)];
      const auto& bar = geometry_.bars[static_cast<std::size_t>(b)];
      Eigen::Vector3d f;
      try {
        f = bar_elastic_force<double>(row(P, bar.i), row(P, bar.j), bar.stiffness, bar.rest_length);
      } catch (const SingularConfiguration& e) {
        rethrow_named(e, "bar", b);
      }
      if (with_damping)
        f += bar_damping_force<double>(row(V, bar.i), row(V, bar.j), bar.stiffness, zeta_(b), inv_mass_(bar.i),
                                       inv_mass_(bar.j));
      bar_slots_[static_cast<std::size_t>(s)] = f;
    }
  });
}

void ForceModel::hinge_terms(const NodeMatrixd& P) const {
  backend_.parallel_for(static_cast<Index>(soft_hinges_.size()), [&](Index begin, Index end) {
    for (Index s = begin; s < end; ++s) {
      const Index h = soft_hinges_[static_cast<std::size_t>(s)];
      const auto& hinge = geometry_.hinges[static_cast<std::size_t>(h)];
      try {
        const auto d = dihedral<double>(row(P, hinge.nodes[0]), row(P, hinge.nodes[1]), row(P, hinge.nodes[2]),
                                        row(P, hinge.nodes[3]));
        hinge_slots_[static_cast<std::size_t>(s)] = hinge_element_forces(d, hinge.stiffness, hinge.rest_angle);
      } catch (const SingularConfiguration& e) {
        rethrow_named(e, "hinge", h);
      }
    }
  });
}

void ForceModel::evaluate(const NodeMatrixd& P, const NodeMatrixd& V, NodeMatrixd& F) const {
  bar_terms(P, V, true);
  hinge_terms(P);
  const Index N = P.rows();
  for (Index n = 0; n < N; ++n)
    F.row(n) = (mass_finite_(n) * gravity_ - global_damping_ * mass_finite_(n) * row(V, n)).transpose();
  for (std::size_t s = 0; s < soft_bars_.size(); ++s) {
    const auto& bar = geometry_.bars[static_cast<std::size_t>(soft_bars_[s])];
    F.row(bar.i) += bar_slots_[s].transpose();
    F.row(bar.j) -= bar_slots_[s].transpose();
  }
  for (std::size_t s = 0; s < soft_hinges_.size(); ++s) {
    const auto& hinge = geometry_.hinges[static_cast<std::size_t>(soft_hinges_[s])];
    for (int k = 0; k < 4; ++k) F.row(hinge.nodes[static_cast<std::size_t>(k)]) += hinge_slots_[s].row(k);
  }
}

NodeMatrixd axial_and_damping_forces(const SystemState& state, const Geometry& geometry, double default_damping,
                                     const Backend& backend) {
  ForceModel model(geometry, default_damping, Eigen::Vector3d::Zero(), 0.0, backend);
  NodeMatrixd V = state.velocities.size() ? state.velocities : NodeMatrixd::Zero(state.positions.rows(), 3);
  model.bar_terms(state.positions, V, true);
  NodeMatrixd F = NodeMatrixd::Zero(state.positions.rows(), 3);
  for (std::size_t s = 0; s < model.soft_bars_.size(); ++s) {
    const auto& bar = geometry.bars[static_cast<std::size_t>(model.soft_bars_[s])];
    F.row(bar.i) += model.bar_slots_[s].transpose();
    F.row(bar.j) -= model.bar_slots_[s].transpose();
  }
  return F;
}

NodeMatrixd hinge_forces(const SystemState& state, const Geometry& geometry, const Backend& backend) {
  ForceModel model(geometry, 0.0, Eigen::Vector3d::Zero(), 0.0, backend);
  model.hinge_terms(state.positions);
  NodeMatrixd F = NodeMatrixd::Zero(state.positions.rows(), 3);
  for (std::size_t s = 0; s < model.soft_hinges_.size(); ++s) {
    const auto& hinge = geometry.hinges[static_cast<std::size_t>(model.soft_hinges_[s])];
    for (int k = 0; k < 4; ++k) F.row(hinge.nodes[static_cast<std::size_t>(k)]) += model.hinge_slots_[s].row(k);
  }
  return F;
}

Dihedral<double> dihedral_angle_and_gradient(const Eigen::Vector3d& p0, const Eigen::Vector3d& p1,
                                             const Eigen::Vector3d& p2, const Eigen::Vector3d& p3) {
  return dihedral<double>(p0, p1, p2, p3);
}

Eigen::Vector3d system_energies(const NodeMatrixd& P, const NodeMatrixd& V, const Geometry& g) {
  Eigen::Vector3d e = Eigen::Vector3d::Zero();
  for (Index n = 0; n < P.rows(); ++n)
    if (!is_pinned(g.masses(n))) e(0) += 0.5 * g.masses(n) * V.row(n).squaredNorm();
  for (const auto& bar : g.bars) {
    if (bar.rigid) continue;
    const double dl = (P.row(bar.i) - P.row(bar.j)).norm() - bar.rest_length;
    e(1) += 0.5 * bar.stiffness * dl * dl;
  }
  for (std::size_t h = 0; h < g.hinges.size(); ++h) {
    const auto& hinge = g.hinges[h];
    if (hinge.rigid) continue;
    Dihedral<double> d;
    try {
      d = dihedral<double>(row(P, hinge.nodes[0]), row(P, hinge.nodes[1]), row(P, hinge.nodes[2]),
                           row(P, hinge.nodes[3]));
    } catch (const SingularConfiguration& err) {
      rethrow_named(err, "hinge", static_cast<Index>(h));
    }
    const double dth = d.theta - hinge.rest_angle;
    e(2) += 0.5 * hinge.stiffness * dth * dth;
  }
  return e;
}

}  // namespace prc
