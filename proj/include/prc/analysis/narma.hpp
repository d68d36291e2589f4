#pragma once

#include "prc/schema/types.hpp"

namespace prc {

/// 0.5 (u − min) / (max − min), mapping the raw signal onto [0, 0.5].
/// A constant signal raises DegeneracyError.
Eigen::VectorXd normalize_narma_input(const Eigen::VectorXd& u_raw);

/// NARMA target aligned with u. The recurrence runs from t = 0 with y(0) = 0
/// and zero history before it:
///   order 2:  y(t+1) = 0.4 y(t) + 0.4 y(t) y(t−1) + 0.6 u(t)³ + 0.1
///   order n:  y(t+1) = 0.3 y(t) + 0.05 y(t) Σ_{i<n} y(t−i) + 1.5 u(t−n+1) u(t) + 0.1
/// |y| > 10 raises StabilityError.
Eigen::VectorXd narma_target(const Eigen::VectorXd& u, int order = 2);

}  // namespace prc
