#pragma once

#include <vector>

#include "prc/vision/image.hpp"

namespace prc {

struct KltConfig {
  int window = 21;  // odd, pixels per side
  int max_level = 3;
  int max_iterations = 30;
  double epsilon = 0.01;       // px, update norm that ends the iteration
  double fb_threshold = 1.0;   // px, forward-backward round-trip limit
  double min_eigen = 1e-6;     // floor on the normal-matrix eigenvalue / pixel
  double max_residual = 0.5;   // RMS residual relative to template contrast

  void check() const;
};

enum class KltFlag { Converged, Singular, MaxIterations, LargeResidual };

struct KltResult {
  RowMatrixd displacements;  // F×2
  std::vector<KltFlag> flags;
  Eigen::VectorXd residuals;  // normalized RMS residual at level 0

  bool converged(Index i) const { return flags[static_cast<std::size_t>(i)] == KltFlag::Converged; }
};

/// Pyramidal Lucas-Kanade: displacement of each point from I1 to I2,
/// estimated coarse to fine with bilinear subpixel sampling. A point is
/// flagged when its normal matrix is near singular, its iteration at the
/// finest level does not settle, or the final window residual is large.
KltResult klt_track_pair(const Image& I1, const Image& I2, const RowMatrixd& points, const KltConfig& config);

/// Variant reusing prebuilt pyramids (level 0 first).
KltResult klt_track_pair(const std::vector<Image>& P1, const std::vector<Image>& P2, const RowMatrixd& points,
                         const KltConfig& config);

}  // namespace prc
