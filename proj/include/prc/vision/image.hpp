#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <vector>

#include "prc/schema/types.hpp"

namespace prc {

/// Grayscale frame, H×W, intensities scaled to [0, 1]. Pixel (x, y) is
/// column x, row y; pixel centres sit on integer coordinates.
using Image = Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Binary (P5) or ASCII (P2) PGM, 8 or 16 bit.
Image read_pgm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const Image& image, int maxval = 255);

/// FNV-1a over the frame's dimensions and sample bits.
std::uint64_t frame_hash(const Image& image);

/// Bilinear sample with coordinates clamped to the image.
double sample_bilinear(const Image& image, double x, double y);

inline bool in_frame(const Image& image, double x, double y) {
  return x >= 0.0 && y >= 0.0 && x <= static_cast<double>(image.cols() - 1) &&
         y <= static_cast<double>(image.rows() - 1);
}

/// Ordered frame sequence.
class FrameSource {
 public:
  virtual ~FrameSource() = default;
  virtual Index size() const = 0;
  virtual Image frame(Index t) const = 0;
};

class MemoryFrames final : public FrameSource {
 public:
  explicit MemoryFrames(std::vector<Image> frames) : frames_(std::move(frames)) {}
  Index size() const override { return static_cast<Index>(frames_.size()); }
  Image frame(Index t) const override { return frames_.at(static_cast<std::size_t>(t)); }

 private:
  std::vector<Image> frames_;
};

/// `*.pgm` files of a directory in lexicographic order, read lazily.
class DirectoryFrames final : public FrameSource {
 public:
  explicit DirectoryFrames(const std::filesystem::path& dir);
  Index size() const override { return static_cast<Index>(paths_.size()); }
  Image frame(Index t) const override { return read_pgm(paths_.at(static_cast<std::size_t>(t))); }
  const std::vector<std::filesystem::path>& paths() const { return paths_; }

 private:
  std::vector<std::filesystem::path> paths_;
};

}  // namespace prc
