#include "prc/vision/image.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "prc/error.hpp"

namespace prc {

namespace {

// Next header token, skipping whitespace and '#' comments.
std::string token(std::istream& in) {
  std::string out;
  char c;
  while (in.get(c)) {
    if (c == '#') {
      std::string ignored;
      std::getline(in, ignored);
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      out += c;
      break;
    }
  }
  while (in.get(c) && !std::isspace(static_cast<unsigned char>(c))) out += c;
  return out;
}

long header_int(std::istream& in, const std::filesystem::path& path) {
  const auto t = token(in);
  try {
    return std::stol(t);
  } catch (...) {
    throw IoError("'" + path.string() + "': malformed PGM header");
  }
}

}  // namespace

Image read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read frame '" + path.string() + "'");
  const auto magic = token(in);
  if (magic != "P5" && magic != "P2") throw IoError("'" + path.string() + "' is not a PGM (P2/P5) image");
  const long w = header_int(in, path), h = header_int(in, path), maxval = header_int(in, path);
  if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 65535) throw IoError("'" + path.string() + "': bad PGM dimensions");
  Image img(h, w);
  const double scale = 1.0 / static_cast<double>(maxval);
  if (magic == "P2") {
    for (long i = 0; i < w * h; ++i) img.data()[i] = static_cast<double>(header_int(in, path)) * scale;
    return img;
  }
  const std::size_t bytes = maxval < 256 ? 1 : 2;
  std::vector<unsigned char> raw(static_cast<std::size_t>(w * h) * bytes);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (in.gcount() != static_cast<std::streamsize>(raw.size())) throw IoError("'" + path.string() + "': truncated PGM");
  for (long i = 0; i < w * h; ++i) {
    const auto k = static_cast<std::size_t>(i) * bytes;
    const unsigned v = bytes == 1 ? raw[k] : (static_cast<unsigned>(raw[k]) << 8 | raw[k + 1]);  // big-endian
    img.data()[i] = static_cast<double>(v) * scale;
  }
  return img;
}

void write_pgm(const std::filesystem::path& path, const Image& image, int maxval) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write frame '" + path.string() + "'");
  out << "P5\n" << image.cols() << " " << image.rows() << "\n" << maxval << "\n";
  for (Index i = 0; i < image.size(); ++i) {
    const auto v = static_cast<unsigned>(std::lround(std::clamp(image.data()[i], 0.0, 1.0) * maxval));
    if (maxval < 256) {
      out.put(static_cast<char>(v));
    } else {
      out.put(static_cast<char>(v >> 8));
      out.put(static_cast<char>(v & 0xff));
    }
  }
}

std::uint64_t frame_hash(const Image& image) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&](const void* p, std::size_t n) {
    const auto* b = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= b[i];
      h *= 1099511628211ull;
    }
  };
  const std::int64_t dims[2] = {image.rows(), image.cols()};
  mix(dims, sizeof dims);
  mix(image.data(), static_cast<std::size_t>(image.size()) * sizeof(double));
  return h;
}

double sample_bilinear(const Image& img, double x, double y) {
  const double maxx = static_cast<double>(img.cols() - 1), maxy = static_cast<double>(img.rows() - 1);
  x = std::clamp(x, 0.0, maxx);
  y = std::clamp(y, 0.0, maxy);
  const Index x0 = std::min<Index>(static_cast<Index>(x), img.cols() - 1);
  const Index y0 = std::min<Index>(static_cast<Index>(y), img.rows() - 1);
  const Index x1 = std::min<Index>(x0 + 1, img.cols() - 1);
  const Index y1 = std::min<Index>(y0 + 1, img.rows() - 1);
  const double ax = x - static_cast<double>(x0), ay = y - static_cast<double>(y0);
  return (1 - ay) * ((1 - ax) * img(y0, x0) + ax * img(y0, x1)) + ay * ((1 - ax) * img(y1, x0) + ax * img(y1, x1));
}

DirectoryFrames::DirectoryFrames(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw IoError("frame directory '" + dir.string() + "' not found");
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".pgm") paths_.push_back(entry.path());
  std::sort(paths_.begin(), paths_.end());
}

}  // namespace prc
