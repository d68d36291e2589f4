#pragma once

#include <limits>
#include <map>
#include <string>
#include <vector>

#include "prc/schema/types.hpp"

namespace prc {

/// Value reported for a statistic that is undefined on its input, e.g. a
/// correlation against a zero-variance channel. Never a silent zero.
inline constexpr double kUndefined = std::numeric_limits<double>::quiet_NaN();
inline bool is_undefined(double v) { return std::isnan(v); }

enum class Adjustment { Bonferroni, FdrBh };

Adjustment adjustment_from_string(const std::string& name);

/// Output of every correlation metric. Per-channel metrics are 1×N, lag
/// profiles L×N with one row per lag, pairwise metrics N×N.
struct CorrelationResult {
  std::string metric;
  RowMatrixd values;
  RowMatrixd p_values;  // same shape as values, empty where undefined
  Eigen::VectorXd lags;
  std::map<std::string, double> metadata;
  std::vector<std::string> notes;
  bool symmetric = false;  // pairwise matrix with value(i, j) == value(j, i)

  /// Flags of p-values surviving the correction at level alpha. For symmetric
  /// pairwise results only the strict upper triangle counts as hypotheses.
  RowMatrixi significant(Adjustment method, double alpha = 0.05) const;
};

struct Adjusted {
  Eigen::VectorXd p;          // adjusted p-values, NaN stays NaN
  std::vector<bool> significant;
};

/// Bonferroni (p·m capped at 1) or Benjamini–Hochberg step-up. NaN entries
/// are not hypotheses: they are excluded from m and never significant.
Adjusted significance_adjust(const Eigen::VectorXd& p, Adjustment method, double alpha = 0.05);

}  // namespace prc
