#pragma once

#include <vector>

#include "prc/vision/image.hpp"

namespace prc {

/// Gaussian pyramid: level 0 is the input, each further level is the previous
/// one blurred with the separable [1 4 6 4 1]/16 kernel and decimated by 2.
/// Stops early once a level would be smaller than `min_size` pixels per side.
std::vector<Image> build_pyramid(const Image& image, int max_level, Index min_size = 8);

Image blur5(const Image& image);
Image downsample(const Image& image);

}  // namespace prc
