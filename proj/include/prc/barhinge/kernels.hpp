#pragma once

// Element kernels of the bar-hinge model, templated on the scalar type so
// they can be evaluated in extended precision by reference tests.

#include <cmath>
#include <numbers>
#include <string>

#include "prc/error.hpp"
#include "prc/schema/types.hpp"

namespace prc {

template <typename Scalar>
using Vec3 = Eigen::Matrix<Scalar, 3, 1>;

/// Elastic force on node i of a bar (i, j); node j receives the negative.
/// r̂ points from j to i, so a stretched bar pulls its endpoints together.
template <typename Scalar>
Vec3<Scalar> bar_elastic_force(const Vec3<Scalar>& pi, const Vec3<Scalar>& pj, Scalar stiffness, Scalar rest_length,
                               Scalar min_length = Scalar(1e-12)) {
  const Vec3<Scalar> r = pi - pj;
  const Scalar l = r.norm();
  if (!(l > min_length)) throw SingularConfiguration("bar", "bar length collapsed to zero");
  return -stiffness * (l - rest_length) * (r / l);
}

/// Viscous force on node i: -c (v_i - v_j) with c = 2 ζ sqrt(m̄ k), where m̄
/// is the harmonic-mean mass 2 m_i m_j / (m_i + m_j) written through inverse
/// masses so pinned endpoints (w = 0) are handled.
template <typename Scalar>
Vec3<Scalar> bar_damping_force(const Vec3<Scalar>& vi, const Vec3<Scalar>& vj, Scalar stiffness, Scalar zeta,
                               Scalar wi, Scalar wj) {
  const Scalar wsum = wi + wj;
  if (wsum <= Scalar(0) || zeta == Scalar(0)) return Vec3<Scalar>::Zero();
  const Scalar c = Scalar(2) * zeta * std::sqrt(Scalar(2) / wsum * stiffness);
  return -c * (vi - vj);
}

template <typename Scalar>
struct Dihedral {
  Scalar theta;                      // [0, 2π), flat = π
  Eigen::Matrix<Scalar, 4, 3> grad;  // ∂θ/∂p_k, row k
};

/// Dihedral angle of the hinge (p0, p1 | p2, p3). p0→p1 is the shared edge
/// with unit direction ê; u_A and u_B are the components of p2 - p0 and
/// p3 - p0 orthogonal to ê. θ is the rotation about ê taking u_A to u_B,
/// θ = atan2((u_A × u_B)·ê, u_A·u_B) mapped into [0, 2π), so coplanar wings on
/// opposite sides of the edge give π.
template <typename Scalar>
Dihedral<Scalar> dihedral(const Vec3<Scalar>& p0, const Vec3<Scalar>& p1, const Vec3<Scalar>& p2,
                          const Vec3<Scalar>& p3, Scalar rel_eps = Scalar(1e-10)) {
  using std::atan2;
  const Vec3<Scalar> e = p1 - p0;
  const Scalar le = e.norm();
  if (!(le > Scalar(0))) throw SingularConfiguration("hinge", "hinge edge collapsed to zero length");
  const Vec3<Scalar> eh = e / le;
  const Vec3<Scalar> a = p2 - p0;
  const Vec3<Scalar> b = p3 - p0;
  const Scalar ta = a.dot(eh) / le;  // projection fractions along the edge
  const Scalar tb = b.dot(eh) / le;
  const Vec3<Scalar> ua = a - a.dot(eh) * eh;
  const Vec3<Scalar> ub = b - b.dot(eh) * eh;
  const Scalar ha2 = ua.squaredNorm();
  const Scalar hb2 = ub.squaredNorm();
  const Scalar floor2 = rel_eps * rel_eps * le * le;
  if (!(ha2 > floor2) || !(hb2 > floor2)) throw SingularConfiguration("hinge", "hinge face is degenerate");

  Dihedral<Scalar> out;
  Scalar theta = atan2(ua.cross(ub).dot(eh), ua.dot(ub));
  if (theta < Scalar(0)) theta += Scalar(2) * std::numbers::pi_v<Scalar>;
  out.theta = theta;
  const Vec3<Scalar> g2 = -eh.cross(ua) / ha2;
  const Vec3<Scalar> g3 = eh.cross(ub) / hb2;
  out.grad.row(0) = (-(Scalar(1) - ta) * g2 - (Scalar(1) - tb) * g3).transpose();
  out.grad.row(1) = (-ta * g2 - tb * g3).transpose();
  out.grad.row(2) = g2.transpose();
  out.grad.row(3) = g3.transpose();
  return out;
}

/// Nodal forces -k (θ - θ0) ∂θ/∂p of one hinge.
template <typename Scalar>
Eigen::Matrix<Scalar, 4, 3> hinge_element_forces(const Dihedral<Scalar>& d, Scalar stiffness, Scalar rest_angle) {
  return -stiffness * (d.theta - rest_angle) * d.grad;
}

/// One classical Runge-Kutta step of P'' = W ∘ F(t, P, P') for N×3 state.
/// `inv_mass` is per degree of freedom (zero freezes a DOF). `constrain` is
/// applied to every stage state and the result so prescribed DOFs follow their
/// drive exactly; `force` must fill its output completely.
template <typename Scalar, typename ForceFn, typename ConstrainFn>
void rk4_advance(NodeMatrix<Scalar>& P, NodeMatrix<Scalar>& V, Scalar t, Scalar dt, const NodeMatrix<Scalar>& inv_mass,
                 ForceFn&& force, ConstrainFn&& constrain) {
  using M = NodeMatrix<Scalar>;
  const Index n = P.rows();
  M F(n, 3);
  auto accel = [&](Scalar ts, const M& Ps, const M& Vs) -> M {
    force(ts, Ps, Vs, F);
    if (!F.allFinite()) throw DivergenceError(static_cast<double>(ts), "non-finite force during integration");
    return inv_mass.cwiseProduct(F);
  };
  const Scalar h2 = dt / Scalar(2);

  M P1 = P, V1 = V;
  constrain(t, P1, V1);
  const M k1v = accel(t, P1, V1);
  const M k1x = V1;

  M P2 = P1 + h2 * k1x, V2 = V1 + h2 * k1v;
  constrain(t + h2, P2, V2);
  const M k2v = accel(t + h2, P2, V2);
  const M k2x = V2;

  M P3 = P1 + h2 * k2x, V3 = V1 + h2 * k2v;
  constrain(t + h2, P3, V3);
  const M k3v = accel(t + h2, P3, V3);
  const M k3x = V3;

  M P4 = P1 + dt * k3x, V4 = V1 + dt * k3v;
  constrain(t + dt, P4, V4);
  const M k4v = accel(t + dt, P4, V4);
  const M k4x = V4;

  P = P1 + (dt / Scalar(6)) * (k1x + Scalar(2) * k2x + Scalar(2) * k3x + k4x);
  V = V1 + (dt / Scalar(6)) * (k1v + Scalar(2) * k2v + Scalar(2) * k3v + k4v);
  constrain(t + dt, P, V);
  if (!P.allFinite() || !V.allFinite())
    throw DivergenceError(static_cast<double>(t + dt), "non-finite state after integration step");
}

}  // namespace prc
