#pragma once

#include <cstdint>

#include "prc/analysis/result.hpp"

namespace prc {

/// Samples kept by dCor and HSIC. Longer series are strided deterministically
/// (every ceil(T / cap)-th sample) and the stride is reported.
inline constexpr Index kPairwiseSampleCap = 4000;

/// Average ranks, 1-based; ties share the mean of their positions.
Eigen::VectorXd average_ranks(const Eigen::VectorXd& v);

/// Kendall τ_b in O(T log T). Undefined when either input is constant.
double kendall_tau_b(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

struct RankDependence {
  CorrelationResult spearman;  // 1×N
  CorrelationResult kendall;   // 1×N
};
RankDependence rank_dependence(const Eigen::VectorXd& x, const RowMatrixd& Y);

struct PairwiseStatistic {
  double value = 0.0;
  Index stride = 1;   // subsampling stride applied to both inputs
  std::string note;   // set on degenerate input
};

/// Distance correlation in [0, 1] with O(T) memory. A constant input gives 0
/// with a note.
PairwiseStatistic distance_correlation(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

/// Median of |x_k − x_l| over k < l (mean of the two middle values when the
/// pair count is even). Exact, and never materializes the T² pairs.
double median_pairwise_distance(const Eigen::VectorXd& x);

/// (1/T²) tr(KHLH) with RBF kernels exp(−d²/2σ²) whose σ is each input's
/// median pairwise distance. A constant input (σ = 0) gives exactly 0.
PairwiseStatistic hsic(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

struct PermutationTest {
  double statistic = 0.0;
  double threshold = 0.0;  // `quantile` of the permutation null
  double p_value = 1.0;    // (1 + #null >= statistic) / (1 + shuffles)
  Eigen::VectorXd null;
};

/// HSIC against `shuffles` random permutations of y.
PermutationTest hsic_permutation_test(const Eigen::VectorXd& x, const Eigen::VectorXd& y, int shuffles = 200,
                                      std::uint64_t seed = 0, double quantile = 0.95);

/// Per-channel dCor and HSIC of x against every column of Y, 1×N.
CorrelationResult distance_correlation_channels(const Eigen::VectorXd& x, const RowMatrixd& Y);
CorrelationResult hsic_channels(const Eigen::VectorXd& x, const RowMatrixd& Y);

}  // namespace prc
