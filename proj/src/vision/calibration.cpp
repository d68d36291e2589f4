#include "prc/vision/calibration.hpp"

#include <cmath>

#include "prc/error.hpp"

namespace prc {

Calibration Calibration::normalized(Index width, Index height) {
  if (width <= 0 || height <= 0) throw ParameterError("normalized calibration needs positive frame dimensions");
  Calibration c;
  c.width = width;
  c.height = height;
  return c;
}

Calibration Calibration::pinhole(const Eigen::Matrix3d& K, const std::array<double, 5>& distortion, double scale,
                                 std::string units) {
  const double det = K.determinant();
  if (!K.allFinite() || !std::isfinite(det) || std::abs(det) <= 1e-12 * std::pow(K.norm(), 3))
    throw ParameterError("camera intrinsics are not invertible");
  if (!(scale > 0) || !std::isfinite(scale)) throw ParameterError("calibration scale must be > 0");
  Calibration c;
  c.mode = Mode::Pinhole;
  c.intrinsics = K;
  c.distortion = distortion;
  c.scale = scale;
  c.units = std::move(units);
  return c;
}

Eigen::Vector2d Calibration::distort(const Eigen::Vector2d& p) const {
  const auto [k1, k2, p1, p2, k3] = distortion;
  const double x = p.x(), y = p.y(), r2 = x * x + y * y;
  const double radial = 1 + r2 * (k1 + r2 * (k2 + r2 * k3));
  return {x * radial + 2 * p1 * x * y + p2 * (r2 + 2 * x * x), y * radial + p1 * (r2 + 2 * y * y) + 2 * p2 * x * y};
}

Eigen::Vector2d Calibration::undistort(const Eigen::Vector2d& d) const {
  const auto [k1, k2, p1, p2, k3] = distortion;
  Eigen::Vector2d p = d;
  for (int it = 0; it < 20; ++it) {
    const double x = p.x(), y = p.y(), r2 = x * x + y * y;
    const double radial = 1 + r2 * (k1 + r2 * (k2 + r2 * k3));
    const Eigen::Vector2d tangential(2 * p1 * x * y + p2 * (r2 + 2 * x * x), p1 * (r2 + 2 * y * y) + 2 * p2 * x * y);
    const Eigen::Vector2d next = (d - tangential) / radial;
    const double step = (next - p).norm();
    p = next;
    if (step < 1e-9) break;
  }
  return p;
}

Eigen::Vector2d Calibration::to_world(const Eigen::Vector2d& px) const {
  if (mode == Mode::Normalized)
    return {px.x() / static_cast<double>(width), px.y() / static_cast<double>(height)};
  const Eigen::Vector3d h = intrinsics.partialPivLu().solve(Eigen::Vector3d(px.x(), px.y(), 1.0));
  return scale * undistort(h.head<2>() / h.z());
}

Eigen::Vector2d Calibration::to_pixel(const Eigen::Vector2d& w) const {
  if (mode == Mode::Normalized)
    return {w.x() * static_cast<double>(width), w.y() * static_cast<double>(height)};
  const Eigen::Vector2d d = distort(w / scale);
  const Eigen::Vector3d h = intrinsics * Eigen::Vector3d(d.x(), d.y(), 1.0);
  return h.head<2>() / h.z();
}

}  // namespace prc
