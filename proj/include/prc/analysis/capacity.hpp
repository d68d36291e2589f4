#pragma once

#include <optional>

#include "prc/reservoir/features.hpp"
#include "prc/reservoir/trainer.hpp"
#include "prc/schema/records.hpp"

namespace prc {

/// t with P(χ²(dof) >= t) = p; dof may be non-integer.
double chi2_isf(double p, double dof);

/// ε = 2 t / T_test with t = chi2_isf(p, n_eff).
double epsilon_threshold(double n_eff, Index t_test, double p = 1e-4);

struct CapacityScore {
  double raw = 0.0;  // 1 − SSE / SST, may be negative
  double c = 0.0;    // clip(raw, 0, 1) when that exceeds ε, else 0
};

/// Capacity of a prediction on one window. A constant target raises
/// DegeneracyError.
CapacityScore capacity_score(const Eigen::VectorXd& target, const Eigen::VectorXd& prediction, double epsilon);

/// The ε rule on an already computed quotient; idempotent.
double threshold_capacity(double raw, double epsilon);

enum class NeffMethod {
  SingularValues,    // entropy of the standardized features' singular values
  CorrelationEigen,  // entropy of the correlation-matrix eigenvalues
};

NeffMethod neff_method_from_string(const std::string& name);

struct MemoryParams {
  Index tau_s = 30;
  Index n_s = 2;
  Index k_delay = 1;
  double ridge = 1e-6;
  std::optional<double> epsilon;  // derived from N_eff and p when unset
  double p = 1e-4;
  NeffMethod neff = NeffMethod::SingularValues;
};

struct CapacityRun {
  CapacityTable table;
  double n_eff = 0.0;
  Split split;  // after raising the washout to the basis history if needed
};

/// Truncated IPC sweep. Features are standardized over the whole record, one
/// ridge readout per basis target is fitted on the train window and scored
/// on the test window. The washout is raised to tau_s·k_delay samples when
/// shorter, shifting both later windows by the same amount.
CapacityRun compute_capacity(const FeatureMatrix& features, const Eigen::VectorXd& u, const TrainerConfig& windows,
                             const MemoryParams& params);

}  // namespace prc
