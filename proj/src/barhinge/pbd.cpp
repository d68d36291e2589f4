#include "prc/barhinge/pbd.hpp"

#include <algorithm>
#include <cmath>

#include "prc/barhinge/kernels.hpp"

namespace prc {

namespace {

Eigen::Vector3d row(const NodeMatrixd& m, Index i) { return m.row(i).transpose(); }

double bar_residual(const NodeMatrixd& P, const Bar& bar) {
  return std::abs((P.row(bar.i) - P.row(bar.j)).norm() - bar.rest_length);
}

double hinge_residual(const NodeMatrixd& P, const Hinge& h) {
  const auto d = dihedral<double>(row(P, h.nodes[0]), row(P, h.nodes[1]), row(P, h.nodes[2]), row(P, h.nodes[3]));
  return std::abs(d.theta - h.rest_angle);
}

}  // namespace

NodeMatrixd dof_inverse_mass(const Geometry& g) {
  NodeMatrixd w(g.node_count(), 3);
  for (Index n = 0; n < g.node_count(); ++n) w.row(n).setConstant(inverse_mass(g.masses(n)));
  return w;
}

bool has_rigid_elements(const Geometry& g) {
  return std::any_of(g.bars.begin(), g.bars.end(), [](const Bar& b) { return b.rigid; }) ||
         std::any_of(g.hinges.begin(), g.hinges.end(), [](const Hinge& h) { return h.rigid; });
}

PbdDiagnostic pbd_project(NodeMatrixd& P, const Geometry& g, const SolverConfig& cfg, const NodeMatrixd& W) {
  std::vector<const Bar*> bars;
  std::vector<const Hinge*> hinges;
  for (const auto& b : g.bars)
    if (b.rigid) bars.push_back(&b);
  for (const auto& h : g.hinges)
    if (h.rigid) hinges.push_back(&h);

  PbdDiagnostic diag;
  auto measure = [&] {
    diag.worst_bar_residual = 0.0;
    diag.worst_hinge_residual = 0.0;
    for (const Bar* b : bars) diag.worst_bar_residual = std::max(diag.worst_bar_residual, bar_residual(P, *b));
    for (const Hinge* h : hinges) diag.worst_hinge_residual = std::max(diag.worst_hinge_residual, hinge_residual(P, *h));
    return diag.worst_bar_residual <= cfg.tolerance && diag.worst_hinge_residual <= cfg.angle_tolerance;
  };
  if (bars.empty() && hinges.empty()) return diag;
  if (measure()) return diag;

  for (int it = 1; it <= cfg.max_iterations; ++it) {
    for (const Bar* b : bars) {
      const Eigen::Vector3d r = row(P, b->i) - row(P, b->j);
      const double l = r.norm();
      if (!(l > 0)) throw SingularConfiguration("bar", "rigid bar collapsed to zero length");
      const Eigen::Vector3d n = r / l;
      const Eigen::Vector3d wi = row(W, b->i), wj = row(W, b->j);
      const double denom = n.cwiseAbs2().dot(wi + wj);
      if (denom <= 0) continue;
      const double lambda = -(l - b->rest_length) / denom;
      P.row(b->i) += (lambda * wi.cwiseProduct(n)).transpose();
      P.row(b->j) -= (lambda * wj.cwiseProduct(n)).transpose();
    }
    for (const Hinge* h : hinges) {
      const auto d = dihedral<double>(row(P, h->nodes[0]), row(P, h->nodes[1]), row(P, h->nodes[2]),
                                      row(P, h->nodes[3]));
      double denom = 0.0;
      for (int k = 0; k < 4; ++k) denom += d.grad.row(k).cwiseAbs2().dot(W.row(h->nodes[static_cast<std::size_t>(k)]));
      if (denom <= 0) continue;
      const double lambda = -(d.theta - h->rest_angle) / denom;
      for (int k = 0; k < 4; ++k) {
        const Index node = h->nodes[static_cast<std::size_t>(k)];
        P.row(node) += lambda * d.grad.row(k).cwiseProduct(W.row(node));
      }
    }
    diag.iterations = it;
    if (measure()) return diag;
  }
  diag.converged = false;
  return diag;
}

PbdDiagnostic pbd_project(NodeMatrixd& P, NodeMatrixd& V, const Geometry& g, const SolverConfig& cfg,
                          const NodeMatrixd& W) {
  const NodeMatrixd before = P;
  auto diag = pbd_project(P, g, cfg, W);
  if (diag.iterations > 0) V += (P - before) / cfg.dt;
  return diag;
}

}  // namespace prc
