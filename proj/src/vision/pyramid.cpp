#include "prc/vision/pyramid.hpp"

#include <algorithm>

namespace prc {

Image blur5(const Image& img) {
  static constexpr double k[5] = {1.0 / 16, 4.0 / 16, 6.0 / 16, 4.0 / 16, 1.0 / 16};
  const Index H = img.rows(), W = img.cols();
  auto clampi = [](Index v, Index hi) { return std::clamp<Index>(v, 0, hi - 1); };
  Image tmp(H, W), out(H, W);
  for (Index y = 0; y < H; ++y)
    for (Index x = 0; x < W; ++x) {
      double s = 0;
      for (int d = -2; d <= 2; ++d) s += k[d + 2] * img(y, clampi(x + d, W));
      tmp(y, x) = s;
    }
  for (Index y = 0; y < H; ++y)
    for (Index x = 0; x < W; ++x) {
      double s = 0;
      for (int d = -2; d <= 2; ++d) s += k[d + 2] * tmp(clampi(y + d, H), x);
      out(y, x) = s;
    }
  return out;
}

Image downsample(const Image& img) {
  const Index H = (img.rows() + 1) / 2, W = (img.cols() + 1) / 2;
  Image out(H, W);
  for (Index y = 0; y < H; ++y)
    for (Index x = 0; x < W; ++x) out(y, x) = img(2 * y, 2 * x);
  return out;
}

std::vector<Image> build_pyramid(const Image& image, int max_level, Index min_size) {
  std::vector<Image> levels{image};
  for (int l = 1; l <= max_level; ++l) {
    const auto& prev = levels.back();
    if ((prev.rows() + 1) / 2 < min_size || (prev.cols() + 1) / 2 < min_size) break;
    levels.push_back(downsample(blur5(prev)));
  }
  return levels;
}

}  // namespace prc
