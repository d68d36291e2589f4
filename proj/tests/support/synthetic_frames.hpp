#pragma once

// Analytic test frames. Every image is evaluated from a closed-form
// intensity function, so shifted copies are exact subpixel translations.

#include <cmath>
#include <random>
#include <vector>

#include "prc/vision/image.hpp"

namespace prc::fixtures {

struct Blob {
  double x, y, sigma, amplitude;
};

inline Image render_blobs(Index width, Index height, const std::vector<Blob>& blobs, double dx = 0.0,
                          double dy = 0.0, double background = 0.1) {
  Image img = Image::Constant(height, width, background);
  for (const auto& b : blobs) {
    const double cx = b.x + dx, cy = b.y + dy, s2 = 2 * b.sigma * b.sigma;
    const Index r = static_cast<Index>(std::ceil(4 * b.sigma));
    for (Index y = std::max<Index>(0, static_cast<Index>(cy) - r); y <= std::min(height - 1, static_cast<Index>(cy) + r); ++y)
      for (Index x = std::max<Index>(0, static_cast<Index>(cx) - r); x <= std::min(width - 1, static_cast<Index>(cx) + r); ++x)
        img(y, x) += b.amplitude * std::exp(-((x - cx) * (x - cx) + (y - cy) * (y - cy)) / s2);
  }
  return img;
}

/// Blobs on a jittered grid so neighbours never merge.
inline std::vector<Blob> blob_field(Index width, Index height, double spacing, std::uint64_t seed, double margin = 24) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-0.2 * spacing, 0.2 * spacing), amp(0.4, 0.8), sig(1.8, 2.6);
  std::vector<Blob> blobs;
  for (double y = margin; y <= static_cast<double>(height) - margin; y += spacing)
    for (double x = margin; x <= static_cast<double>(width) - margin; x += spacing)
      blobs.push_back({x + jitter(rng), y + jitter(rng), sig(rng), amp(rng)});
  return blobs;
}

inline Image checkerboard(Index width, Index height, Index square, Index origin_x, Index origin_y) {
  Image img(height, width);
  for (Index y = 0; y < height; ++y)
    for (Index x = 0; x < width; ++x) {
      const Index cx = (x - origin_x + 1000 * square) / square, cy = (y - origin_y + 1000 * square) / square;
      img(y, x) = ((cx + cy) % 2) ? 0.8 : 0.2;
    }
  return img;
}

}  // namespace prc::fixtures
