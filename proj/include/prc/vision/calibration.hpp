#pragma once

#include <array>
#include <string>

#include "prc/schema/types.hpp"

namespace prc {

struct Calibration {
  enum class Mode { Normalized, Pinhole };

  Mode mode = Mode::Normalized;
  Eigen::Matrix3d intrinsics = Eigen::Matrix3d::Identity();
  std::array<double, 5> distortion{};  // k1, k2, p1, p2, k3
  double scale = 1.0;                  // physical units per normalized camera unit
  std::string units = "normalized";
  Index width = 0, height = 0;         // frame size, used by normalized mode

  static Calibration normalized(Index width, Index height);
  /// Raises ParameterError unless K is finite and invertible.
  static Calibration pinhole(const Eigen::Matrix3d& K, const std::array<double, 5>& distortion, double scale,
                             std::string units);

  /// Pixel -> calibrated coordinates. Pinhole mode applies K^-1, removes lens
  /// distortion by fixed-point iteration (<= 20 rounds, 1e-9 tolerance) and
  /// then multiplies by `scale`.
  Eigen::Vector2d to_world(const Eigen::Vector2d& pixel) const;
  /// Calibrated coordinates -> pixel; exact inverse of to_world up to the
  /// undistortion tolerance.
  Eigen::Vector2d to_pixel(const Eigen::Vector2d& world) const;

  /// Brown-Conrady forward distortion of a normalized camera point.
  Eigen::Vector2d distort(const Eigen::Vector2d& xy) const;
  Eigen::Vector2d undistort(const Eigen::Vector2d& xy_distorted) const;
};

}  // namespace prc
