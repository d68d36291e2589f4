#pragma once

#include <string>

#include "prc/reservoir/features.hpp"
#include "prc/schema/records.hpp"

namespace prc {

struct TrainerConfig {
  double washout = 0.0;         // seconds
  double train_duration = 0.0;  // seconds
  double test_duration = 0.0;   // seconds
  double ridge = 1e-5;
  bool bias = true;

  void check() const;
};

/// Sample boundaries [0, washout_end) discarded, [washout_end, train_end)
/// fitted, [train_end, test_end) held out.
struct Split {
  Index washout_end = 0;
  Index train_end = 0;
  Index test_end = 0;
};

/// Each duration is converted with floor(duration / dt). Raises
/// ConfigurationError when the windows need more than `samples` rows.
Split split_windows(Index samples, double dt, const TrainerConfig& config);

struct WindowCache {
  Eigen::VectorXd time;
  RowMatrixd target;
  RowMatrixd prediction;
};

struct TrainResult {
  ReadoutRecord readout;
  WindowCache train;
  WindowCache test;

  /// "train" or "test".
  const WindowCache& cache(const std::string& window) const;
};

/// Per-column MSE / population variance of the target; a constant target
/// normalizes by 1.
Eigen::VectorXd nmse(const RowMatrixd& target, const RowMatrixd& prediction);
/// Per-column √MSE / population std of the target, same guard.
Eigen::VectorXd nrmse(const RowMatrixd& target, const RowMatrixd& prediction);

/// Fits a readout of `target` (T×O, aligned with the feature rows) on the
/// train window and evaluates it on both windows.
TrainResult train(const FeatureMatrix& features, const RowMatrixd& target, const TrainerConfig& config,
                  const std::string& task = "task");
TrainResult train(const TrajectoryRecord& record, const FeatureExtractor& extractor, const TrainerConfig& config,
                  const RowMatrixd& target, const std::string& task = "task");

}  // namespace prc
