#include "prc/vision/detect.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>

#include "prc/error.hpp"
#include "prc/schema/h5.hpp"

namespace prc {

Image min_eigen_response(const Image& f, int r) {
  const Index H = f.rows(), W = f.cols();
  Image gx = Image::Zero(H, W), gy = Image::Zero(H, W);
  for (Index y = 1; y + 1 < H; ++y)
    for (Index x = 1; x + 1 < W; ++x) {
      gx(y, x) = 0.5 * (f(y, x + 1) - f(y, x - 1));
      gy(y, x) = 0.5 * (f(y + 1, x) - f(y - 1, x));
    }
  const Image xx = gx * gx, xy = gx * gy, yy = gy * gy;
  Image out = Image::Zero(H, W);
  const Index m = r + 1;
  const double area = static_cast<double>((2 * r + 1) * (2 * r + 1));
  for (Index y = m; y + m < H; ++y)
    for (Index x = m; x + m < W; ++x) {
      const double a = xx.block(y - r, x - r, 2 * r + 1, 2 * r + 1).sum() / area;
      const double b = xy.block(y - r, x - r, 2 * r + 1, 2 * r + 1).sum() / area;
      const double c = yy.block(y - r, x - r, 2 * r + 1, 2 * r + 1).sum() / area;
      const double half = 0.5 * (a - c);
      out(y, x) = std::max(0.0, 0.5 * (a + c) - std::sqrt(half * half + b * b));
    }
  return out;
}

FeatureMap detect_min_eigen(const Image& frame, const DetectorOptions& o) {
  if (frame.size() == 0) throw ShapeError("detect_features: empty frame");
  const Image R = min_eigen_response(frame, o.window_radius);
  const Index H = R.rows(), W = R.cols();
  const Index n = o.nms_radius;
  struct Candidate {
    double x, y, response;
  };
  std::vector<Candidate> found;
  for (Index y = 1; y + 1 < H; ++y)
    for (Index x = 1; x + 1 < W; ++x) {
      const double v = R(y, x);
      if (!(v > o.min_response)) continue;
      bool peak = true;
      for (Index dy = -n; dy <= n && peak; ++dy)
        for (Index dx = -n; dx <= n; ++dx) {
          const Index yy = y + dy, xx = x + dx;
          if ((dy == 0 && dx == 0) || yy < 0 || xx < 0 || yy >= H || xx >= W) continue;
          const double u = R(yy, xx);
          // Plateaus resolve to their first pixel in raster order.
          const bool earlier = dy < 0 || (dy == 0 && dx < 0);
          if (u > v || (earlier && u == v)) {
            peak = false;
            break;
          }
        }
      if (!peak) continue;
      auto offset = [](double a, double b, double c) {
        const double den = a - 2 * b + c;
        return den < 0 ? std::clamp(0.5 * (a - c) / den, -0.5, 0.5) : 0.0;
      };
      // A flat maximum (straight-edged corners) refines to the centroid of
      // its equal-valued pixels; a strict peak gets a parabola fit.
      double sx = 0, sy = 0, count = 0;
      for (Index dy = -n; dy <= n; ++dy)
        for (Index dx = -n; dx <= n; ++dx) {
          const Index yy = y + dy, xx = x + dx;
          if (yy < 0 || xx < 0 || yy >= H || xx >= W || R(yy, xx) < v * (1 - 1e-9)) continue;
          sx += static_cast<double>(xx);
          sy += static_cast<double>(yy);
          count += 1;
        }
      if (count > 1)
        found.push_back({sx / count, sy / count, v});
      else
        found.push_back({static_cast<double>(x) + offset(R(y, x - 1), v, R(y, x + 1)),
                         static_cast<double>(y) + offset(R(y - 1, x), v, R(y + 1, x)), v});
    }
  std::stable_sort(found.begin(), found.end(),
                   [](const Candidate& a, const Candidate& b) { return a.response > b.response; });
  if (o.max_features >= 0 && static_cast<Index>(found.size()) > o.max_features)
    found.resize(static_cast<std::size_t>(o.max_features));

  FeatureMap m;
  m.points.resize(static_cast<Index>(found.size()), 2);
  m.responses.resize(static_cast<Index>(found.size()));
  for (std::size_t i = 0; i < found.size(); ++i) {
    const auto r = static_cast<Index>(i);
    m.points(r, 0) = found[i].x;
    m.points(r, 1) = found[i].y;
    m.responses(r) = found[i].response;
  }
  m.detector = "min_eigen";
  m.frame_hash = frame_hash(frame);
  m.width = frame.cols();
  m.height = frame.rows();
  return m;
}

namespace {

std::mutex registry_mutex;

std::map<std::string, Detector>& registry() {
  static std::map<std::string, Detector> r{{"min_eigen", detect_min_eigen}};
  return r;
}

}  // namespace

void register_detector(const std::string& name, Detector detector) {
  std::lock_guard lock(registry_mutex);
  registry()[name] = std::move(detector);
}

std::vector<std::string> registered_detectors() {
  std::lock_guard lock(registry_mutex);
  std::vector<std::string> names;
  for (const auto& [name, _] : registry()) names.push_back(name);
  return names;
}

FeatureMap detect_features(const Image& frame, const DetectorOptions& options, const std::string& detector) {
  Detector fn;
  {
    std::lock_guard lock(registry_mutex);
    auto it = registry().find(detector);
    if (it == registry().end()) throw ParameterError("unknown detector '" + detector + "'");
    fn = it->second;
  }
  auto map = fn(frame, options);
  map.detector = detector;
  map.frame_hash = frame_hash(frame);
  return map;
}

FeatureMap FeatureMapCache::get(const Image& frame, const DetectorOptions& options, const std::string& detector) {
  const auto hash = frame_hash(frame);
  hit_ = false;
  if (std::filesystem::exists(file_)) {
    try {
      h5::File f(file_, h5::Mode::Read);
      if (static_cast<std::uint64_t>(f.attr_int("/", "frame_hash")) == hash && f.attr_string("/", "detector") == detector &&
          f.attr_double("/", "min_response") == options.min_response &&
          f.attr_int("/", "max_features") == options.max_features) {
        FeatureMap m;
        m.points = f.read_matrix("/points");
        m.responses = f.read_vector("/responses");
        m.detector = detector;
        m.frame_hash = hash;
        m.width = frame.cols();
        m.height = frame.rows();
        hit_ = true;
        return m;
      }
    } catch (const Error&) {
      // Unreadable cache: fall through and recompute.
    }
  }
  auto m = detect_features(frame, options, detector);
  h5::File f(file_, h5::Mode::Truncate);
  f.write_matrix("/points", m.points);
  f.write_vector("/responses", m.responses);
  f.set_attr("/", "frame_hash", static_cast<std::int64_t>(hash));
  f.set_attr("/", "detector", detector);
  f.set_attr("/", "min_response", options.min_response);
  f.set_attr("/", "max_features", static_cast<std::int64_t>(options.max_features));
  return m;
}

}  // namespace prc
