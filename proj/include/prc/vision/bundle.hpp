#pragma once

// End-to-end frame pipeline and its single-file HDF5 bundle: the schema
// TrajectoryRecord at the root plus `/feature_map`, `/tracking`,
// `/trajectory_set` and `/vision_signals`.

#include <filesystem>
#include <map>
#include <string>

#include "prc/vision/trajectory_set.hpp"

namespace prc {

struct VisionConfig {
  DetectorOptions detect;
  std::string detector = "min_eigen";
  KltConfig klt;
  Calibration calibration;  // normalized mode picks up the frame size
  PostprocessOptions post;
  double frame_dt = 1.0;
};

struct VisionOutput {
  FeatureMap features;
  TrackingResult tracking;
  TrajectorySet raw;
  TrajectorySet processed;
  std::map<std::string, RowMatrixd> signals;  // keyed by SignalMode name
  TrajectoryRecord record;
};

VisionOutput run_vision(const FrameSource& frames, const VisionConfig& config);

void save_vision_bundle(const VisionOutput& output, const std::filesystem::path& path);
VisionOutput load_vision_bundle(const std::filesystem::path& path);

}  // namespace prc
