#include "prc/vision/tracker.hpp"

#include <cmath>

#include "prc/error.hpp"
#include "prc/vision/pyramid.hpp"

namespace prc {

Eigen::VectorXd TrackingResult::track_ratios() const {
  Eigen::VectorXd r(features());
  for (Index f = 0; f < features(); ++f) {
    Index held = 0;
    for (Index t = 0; t < frames(); ++t) {
      const auto s = at(t, f);
      held += s == TrackStatus::Tracked || s == TrackStatus::Reference || s == TrackStatus::Interpolated;
    }
    r(f) = frames() > 0 ? static_cast<double>(held) / static_cast<double>(frames()) : 0.0;
  }
  return r;
}

TrackingResult track_sequence(const FrameSource& frames, const FeatureMap& fmap, const KltConfig& cfg) {
  cfg.check();
  const Index T = frames.size();
  if (T < 2) throw ParameterError("track_sequence needs at least two frames");
  const Index F = fmap.size();
  const double nan = std::nan("");

  TrackingResult out;
  out.positions = RowMatrixd::Constant(T, 2 * F, nan);
  out.status = StatusMatrix::Constant(T, F, static_cast<std::int64_t>(TrackStatus::Reference));
  out.fb_error = RowMatrixd::Constant(T, F, nan);

  Image prev = frames.frame(0);
  out.width = prev.cols();
  out.height = prev.rows();
  for (Index f = 0; f < F; ++f) out.positions.block(0, 2 * f, 1, 2) = fmap.points.row(f);
  RowMatrixd last = fmap.points;  // last known position per feature
  std::vector<bool> absorbed(static_cast<std::size_t>(F), false);
  auto prev_pyr = build_pyramid(prev, cfg.max_level);

  for (Index t = 1; t < T; ++t) {
    Image next = frames.frame(t);
    if (next.rows() != prev.rows() || next.cols() != prev.cols())
      throw ShapeError("frame " + std::to_string(t) + " changes size mid-sequence");
    const auto next_pyr = build_pyramid(next, cfg.max_level);

    std::vector<Index> active;
    for (Index f = 0; f < F; ++f)
      if (!absorbed[static_cast<std::size_t>(f)]) active.push_back(f);
    RowMatrixd pts(static_cast<Index>(active.size()), 2);
    for (std::size_t a = 0; a < active.size(); ++a) pts.row(static_cast<Index>(a)) = last.row(active[a]);

    const auto fwd = klt_track_pair(prev_pyr, next_pyr, pts, cfg);
    const RowMatrixd moved = pts + fwd.displacements;
    const auto bwd = klt_track_pair(next_pyr, prev_pyr, moved, cfg);

    for (Index f = 0; f < F; ++f)
      if (absorbed[static_cast<std::size_t>(f)]) out.status(t, f) = out.status(t - 1, f);
    for (std::size_t a = 0; a < active.size(); ++a) {
      const Index f = active[a], i = static_cast<Index>(a);
      const double x = moved(i, 0), y = moved(i, 1);
      const double fb = (fwd.displacements.row(i) + bwd.displacements.row(i)).norm();
      out.fb_error(t, f) = fb;
      TrackStatus s;
      if (!std::isfinite(x) || !std::isfinite(y) || !in_frame(next, x, y)) {
        s = TrackStatus::OutOfBounds;
      } else if (fwd.flags[a] == KltFlag::Singular || fwd.flags[a] == KltFlag::MaxIterations) {
        s = TrackStatus::Lost;
      } else if (fwd.flags[a] == KltFlag::LargeResidual || !bwd.converged(i) || !(fb <= cfg.fb_threshold)) {
        s = TrackStatus::Drift;
      } else {
        s = TrackStatus::Tracked;
      }
      // A failure whose window straddles the border is blamed on the exit.
      const double half = static_cast<double>(cfg.window / 2);
      if (s != TrackStatus::Tracked && s != TrackStatus::OutOfBounds &&
          !(in_frame(next, x - half, y - half) && in_frame(next, x + half, y + half)))
        s = TrackStatus::OutOfBounds;
      out.status(t, f) = static_cast<std::int64_t>(s);
      if (s == TrackStatus::Tracked) {
        out.positions(t, 2 * f) = x;
        out.positions(t, 2 * f + 1) = y;
        last.row(f) = moved.row(i);
      }
      if (s == TrackStatus::OutOfBounds || s == TrackStatus::Drift) absorbed[static_cast<std::size_t>(f)] = true;
    }
    prev = std::move(next);
    prev_pyr = next_pyr;
  }
  return out;
}

}  // namespace prc
