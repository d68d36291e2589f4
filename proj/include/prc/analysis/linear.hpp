#pragma once

#include "prc/analysis/result.hpp"

namespace prc {

/// Two-sided p-value of a sample correlation r under the t transform with
/// `dof` degrees of freedom.
double correlation_p_value(double r, double dof);

/// Pearson r between u and every column of X, 1×N. Needs T >= 3.
CorrelationResult pearson_channels(const Eigen::VectorXd& u, const RowMatrixd& X);

/// CCF_i(τ) for τ in [-max_lag, max_lag], one row per lag. The numerator
/// sums over the overlap, the denominator uses the full-series sums, so the
/// τ = 0 row is Pearson r. A positive peak lag means the channel trails u.
/// Peaks are argmax |CCF| with ties going to the smallest |τ|, then to the
/// negative lag.
struct CrossCorrelation {
  CorrelationResult profile;
  Eigen::VectorXd peak_lag;
  Eigen::VectorXd peak_value;
};
CrossCorrelation cross_correlation(const Eigen::VectorXd& u, const RowMatrixd& X, Index max_lag);

/// ρ_ij = -P_ij / √(P_ii P_jj) with P the inverse covariance, unit diagonal.
/// Zero-variance channels get undefined rows and columns. Σ is inflated by
/// 1e-10·tr(Σ)/N when its condition number exceeds 1e12; a Σ that still
/// cannot be factorized raises RankDeficiency.
CorrelationResult partial_correlation(const RowMatrixd& X);

struct CanonicalCorrelation {
  double rho = kUndefined;
  Eigen::VectorXd weights;  // N, zero on constant channels
};

/// Largest correlation between u and X w, i.e. √R² of the least-squares
/// regression of u on X with an intercept.
CanonicalCorrelation cca_first(const Eigen::VectorXd& u, const RowMatrixd& X);

}  // namespace prc
