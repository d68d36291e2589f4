#pragma once

#include <optional>
#include <string>
#include <vector>

#include "prc/schema/records.hpp"
#include "prc/vision/calibration.hpp"
#include "prc/vision/tracker.hpp"

namespace prc {

using MaskMatrix = Eigen::Array<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Calibrated feature trajectories. Missing samples hold NaN and are flagged
/// in `missing`; `interpolated` marks samples filled by gap interpolation.
struct TrajectorySet {
  RowMatrixd positions;  // T × 2F
  MaskMatrix missing;    // T × F
  MaskMatrix interpolated;
  std::vector<Index> feature_ids;  // column f came from tracker feature feature_ids[f]
  std::string units;
  double dt = 1.0;  // frame interval

  Index frames() const { return missing.rows(); }
  Index features() const { return missing.cols(); }
  Eigen::VectorXd track_ratios() const;
};

TrajectorySet calibrate_points(const TrackingResult& result, const Calibration& calibration, double frame_dt = 1.0);

struct PostprocessOptions {
  double min_track_ratio = 0.6;
  Index max_gap = 10;
  Index smooth_window = 5;  // odd; 1 disables smoothing
};

/// Drops sparse features, linearly fills interior gaps of at most max_gap
/// samples and applies a moving average that ignores missing samples and
/// shrinks its window at the ends.
TrajectorySet postprocess_trajectories(const TrajectorySet& set, const PostprocessOptions& options);

/// NaN-aware centred moving average of one series; NaN samples stay NaN.
Eigen::VectorXd nan_moving_average(const Eigen::VectorXd& series, Index window);

enum class SignalMode { X, Y, Magnitude, PathLength };
SignalMode signal_mode_from_string(const std::string& name);
std::string to_string(SignalMode mode);

/// T×F signal matrix. Magnitude is the distance from `reference`, or from each
/// feature's first valid position when no reference is given.
RowMatrixd to_signals(const TrajectorySet& set, SignalMode mode,
                      const std::optional<Eigen::Vector2d>& reference = std::nullopt);

/// Tracked record: positions (x, y, 0), finite-difference velocities, no bar
/// or hinge channels, NaN energies. Residual missing samples hold the nearest
/// earlier valid value (or the first valid one before it).
TrajectoryRecord export_record(const TrajectorySet& set);

}  // namespace prc
