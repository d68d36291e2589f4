#pragma once

#include <cstdint>
#include <vector>

#include "prc/vision/detect.hpp"
#include "prc/vision/klt.hpp"

namespace prc {

enum class TrackStatus : std::int64_t {
  Tracked = 0,
  Lost = 1,
  OutOfBounds = 2,
  Drift = 3,
  Interpolated = 4,
  Reference = 5,
};

using StatusMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct TrackingResult {
  RowMatrixd positions;  // T × 2F, (x, y) per feature; NaN where not tracked
  StatusMatrix status;   // T × F
  RowMatrixd fb_error;   // T × F forward-backward distance (NaN where not computed)
  Index width = 0, height = 0;

  Index frames() const { return status.rows(); }
  Index features() const { return status.cols(); }
  TrackStatus at(Index t, Index f) const { return static_cast<TrackStatus>(status(t, f)); }
  /// Fraction of frames in which each feature holds a position.
  Eigen::VectorXd track_ratios() const;
};

/// Frame-to-frame KLT with a backward check per pair. Per feature and frame:
/// leaving [0, W-1]×[0, H-1] gives OOB; a singular or non-settling forward
/// solve gives LOST for that frame (the feature resumes from its last known
/// position); a large forward residual, a failed backward solve or a
/// round-trip error above fb_threshold gives DRIFT. OOB and DRIFT absorb.
TrackingResult track_sequence(const FrameSource& frames, const FeatureMap& features, const KltConfig& config);

}  // namespace prc
