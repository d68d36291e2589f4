#pragma once

#include "prc/schema/types.hpp"

namespace prc {

/// √(2n+1) P_n(x), orthonormal under the uniform density on [−1, 1].
double normalized_legendre(int n, double x);

/// Every exponent vector over tau_s + 1 lag slots with total degree in
/// [1, n_s]. Rows are ordered by degree, then lexicographically by the
/// ascending list of slots they use, so degree 1 runs over slots 0..tau_s.
RowMatrixi exponent_basis(Index tau_s, Index n_s);

struct LegendreBasis {
  RowMatrixi exponents;    // R × (tau_s + 1)
  Eigen::VectorXd degree;  // R
  RowMatrixd targets;      // (T − offset) × R, row i is sample offset + i
  Index offset = 0;        // tau_s · k_delay, the first sample with full history
  Index tau_s = 0, n_s = 0, k_delay = 1;
};

/// Rescales u onto [−1, 1] and evaluates y_α(t) = Π_j P̃_{α_j}(u(t − j·k_delay))
/// for every α of exponent_basis. A constant u raises DegeneracyError.
LegendreBasis legendre_target_basis(const Eigen::VectorXd& u, Index tau_s, Index n_s, Index k_delay = 1);

}  // namespace prc
