#pragma once

#include <vector>

#include "prc/analysis/result.hpp"

namespace prc {

/// Eigenvalues with |λ| at or below this are treated as exact zeros.
inline constexpr double kEigenFloor = 1e-10;

struct RedundancySummary {
  Eigen::VectorXd eigenvalues;    // descending, correlation matrix of the live channels
  double effective_rank = kUndefined;
  double condition_number = kUndefined;
  std::vector<Index> clusters;    // per channel, -1 for zero-variance channels
  Index cluster_count = 0;
  std::vector<std::string> notes;
};

/// exp of the Shannon entropy of a non-negative spectrum normalized to sum 1.
double spectral_effective_rank(const Eigen::VectorXd& spectrum);

/// Pearson correlation matrix over the channels with nonzero variance, whose
/// indices are returned in `kept`.
Eigen::MatrixXd correlation_matrix(const RowMatrixd& X, std::vector<Index>* kept = nullptr);

/// Effective rank from the correlation eigenvalues, κ = λmax / λmin with
/// λmin floored at kEigenFloor, and single-linkage clusters joining channels
/// whose |corr| >= cluster_threshold.
RedundancySummary redundancy(const RowMatrixd& X, double cluster_threshold = 0.95);

/// Effective rank of the column-standardized X from its singular values
/// normalized to sum 1. Constant columns standardize to zero.
double singular_effective_rank(const RowMatrixd& X);

/// Columns scaled to zero mean and unit population std; constant columns
/// become zero.
RowMatrixd standardize_columns(const RowMatrixd& X);

}  // namespace prc
