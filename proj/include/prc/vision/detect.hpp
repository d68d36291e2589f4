#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "prc/vision/image.hpp"

namespace prc {

struct FeatureMap {
  RowMatrixd points;          // F×2 pixel coordinates (x, y)
  Eigen::VectorXd responses;  // F, non-increasing
  std::string detector;
  std::uint64_t frame_hash = 0;
  Index width = 0, height = 0;

  Index size() const { return points.rows(); }
};

struct DetectorOptions {
  double min_response = 1e-4;
  Index max_features = 200;
  int window_radius = 2;  // structure tensor summed over (2r+1)^2
  int nms_radius = 3;
};

using Detector = std::function<FeatureMap(const Image&, const DetectorOptions&)>;

/// Minimum-eigenvalue structure-tensor corners: local maxima above
/// min_response, refined to subpixel by per-axis parabola fits, strongest
/// max_features kept in descending response order.
FeatureMap detect_min_eigen(const Image& frame, const DetectorOptions& options);

/// Structure-tensor minimum eigenvalue at every pixel (0 near the border).
Image min_eigen_response(const Image& frame, int window_radius);

/// Registry of named detectors; "min_eigen" is built in. Registering an
/// existing name replaces it.
void register_detector(const std::string& name, Detector detector);
std::vector<std::string> registered_detectors();

FeatureMap detect_features(const Image& frame, const DetectorOptions& options = {},
                           const std::string& detector = "min_eigen");
inline FeatureMap detect_features(const Image& frame, double min_response, Index max_features) {
  DetectorOptions o;
  o.min_response = min_response;
  o.max_features = max_features;
  return detect_features(frame, o);
}

/// Single-entry feature map cache: reuses the stored map when the frame hash
/// and detector name match, otherwise recomputes and overwrites.
class FeatureMapCache {
 public:
  explicit FeatureMapCache(std::filesystem::path file) : file_(std::move(file)) {}
  FeatureMap get(const Image& frame, const DetectorOptions& options, const std::string& detector = "min_eigen");
  bool last_was_hit() const { return hit_; }

 private:
  std::filesystem::path file_;
  bool hit_ = false;
};

}  // namespace prc
