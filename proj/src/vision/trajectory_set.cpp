#include "prc/vision/trajectory_set.hpp"

#include <cmath>

#include "prc/error.hpp"

namespace prc {

Eigen::VectorXd TrajectorySet::track_ratios() const {
  Eigen::VectorXd r(features());
  for (Index f = 0; f < features(); ++f)
    r(f) = frames() > 0 ? 1.0 - missing.col(f).cast<double>().sum() / static_cast<double>(frames()) : 0.0;
  return r;
}

TrajectorySet calibrate_points(const TrackingResult& result, const Calibration& cal, double frame_dt) {
  if (cal.mode == Calibration::Mode::Pinhole) {
    const double det = cal.intrinsics.determinant();
    if (!cal.intrinsics.allFinite() || !(std::abs(det) > 0)) throw ParameterError("camera intrinsics are not invertible");
  }
  Calibration c = cal;
  if (c.mode == Calibration::Mode::Normalized && (c.width <= 0 || c.height <= 0)) {
    c.width = result.width;
    c.height = result.height;
  }
  const Index T = result.frames(), F = result.features();
  TrajectorySet s;
  s.positions = RowMatrixd::Constant(T, 2 * F, std::nan(""));
  s.missing = MaskMatrix::Ones(T, F);
  s.interpolated = MaskMatrix::Zero(T, F);
  s.units = c.units;
  s.dt = frame_dt;
  for (Index f = 0; f < F; ++f) s.feature_ids.push_back(f);
  for (Index t = 0; t < T; ++t)
    for (Index f = 0; f < F; ++f) {
      const auto st = result.at(t, f);
      if (st != TrackStatus::Tracked && st != TrackStatus::Reference && st != TrackStatus::Interpolated) continue;
      const Eigen::Vector2d w = c.to_world({result.positions(t, 2 * f), result.positions(t, 2 * f + 1)});
      s.positions(t, 2 * f) = w.x();
      s.positions(t, 2 * f + 1) = w.y();
      s.missing(t, f) = 0;
    }
  return s;
}

Eigen::VectorXd nan_moving_average(const Eigen::VectorXd& x, Index window) {
  if (window < 1 || window % 2 == 0) throw ParameterError("smoothing window must be odd and >= 1");
  const Index T = x.size(), h = window / 2;
  Eigen::VectorXd out(T);
  for (Index t = 0; t < T; ++t) {
    if (std::isnan(x(t))) {
      out(t) = x(t);
      continue;
    }
    double sum = 0.0;
    Index n = 0;
    for (Index k = std::max<Index>(0, t - h); k <= std::min(T - 1, t + h); ++k)
      if (!std::isnan(x(k))) {
        sum += x(k);
        ++n;
      }
    out(t) = sum / static_cast<double>(n);
  }
  return out;
}

TrajectorySet postprocess_trajectories(const TrajectorySet& in, const PostprocessOptions& o) {
  if (o.smooth_window < 1 || o.smooth_window % 2 == 0) throw ParameterError("smooth_window must be odd");
  const Index T = in.frames();
  const auto ratios = in.track_ratios();
  std::vector<Index> keep;
  for (Index f = 0; f < in.features(); ++f)
    if (ratios(f) >= o.min_track_ratio) keep.push_back(f);

  TrajectorySet out;
  const auto F = static_cast<Index>(keep.size());
  out.positions.resize(T, 2 * F);
  out.missing.resize(T, F);
  out.interpolated.resize(T, F);
  out.units = in.units;
  out.dt = in.dt;
  for (Index k = 0; k < F; ++k) {
    const Index f = keep[static_cast<std::size_t>(k)];
    out.feature_ids.push_back(in.feature_ids[static_cast<std::size_t>(f)]);
    out.positions.middleCols(2 * k, 2) = in.positions.middleCols(2 * f, 2);
    out.missing.col(k) = in.missing.col(f);
    out.interpolated.col(k) = in.interpolated.col(f);

    // Interior gaps bounded by valid samples on both sides.
    Index t = 0;
    while (t < T) {
      if (!out.missing(t, k)) {
        ++t;
        continue;
      }
      const Index start = t;
      while (t < T && out.missing(t, k)) ++t;
      const Index len = t - start;
      if (start == 0 || t == T || len > o.max_gap) continue;
      const Index a = start - 1, b = t;
      for (Index g = start; g < b; ++g) {
        const double w = static_cast<double>(g - a) / static_cast<double>(b - a);
        for (int c = 0; c < 2; ++c)
          out.positions(g, 2 * k + c) = (1 - w) * out.positions(a, 2 * k + c) + w * out.positions(b, 2 * k + c);
        out.missing(g, k) = 0;
        out.interpolated(g, k) = 1;
      }
    }
    if (o.smooth_window > 1)
      for (int c = 0; c < 2; ++c)
        out.positions.col(2 * k + c) = nan_moving_average(out.positions.col(2 * k + c), o.smooth_window);
  }
  return out;
}

SignalMode signal_mode_from_string(const std::string& name) {
  if (name == "x") return SignalMode::X;
  if (name == "y") return SignalMode::Y;
  if (name == "magnitude") return SignalMode::Magnitude;
  if (name == "pathlength") return SignalMode::PathLength;
  throw ParameterError("unknown signal mode '" + name + "' (x, y, magnitude, pathlength)");
}

std::string to_string(SignalMode m) {
  switch (m) {
    case SignalMode::X: return "x";
    case SignalMode::Y: return "y";
    case SignalMode::Magnitude: return "magnitude";
    case SignalMode::PathLength: return "pathlength";
  }
  return "";
}

RowMatrixd to_signals(const TrajectorySet& s, SignalMode mode, const std::optional<Eigen::Vector2d>& reference) {
  const Index T = s.frames(), F = s.features();
  RowMatrixd out = RowMatrixd::Constant(T, F, std::nan(""));
  for (Index f = 0; f < F; ++f) {
    auto point = [&](Index t) { return Eigen::Vector2d(s.positions(t, 2 * f), s.positions(t, 2 * f + 1)); };
    std::optional<Eigen::Vector2d> ref = reference;
    std::optional<Eigen::Vector2d> prev;
    double path = 0.0;
    for (Index t = 0; t < T; ++t) {
      if (s.missing(t, f)) continue;
      const Eigen::Vector2d p = point(t);
      if (!ref) ref = p;
      switch (mode) {
        case SignalMode::X: out(t, f) = p.x(); break;
        case SignalMode::Y: out(t, f) = p.y(); break;
        case SignalMode::Magnitude: out(t, f) = (p - *ref).norm(); break;
        case SignalMode::PathLength:
          if (prev) path += (p - *prev).norm();
          out(t, f) = path;
          break;
      }
      prev = p;
    }
  }
  return out;
}

TrajectoryRecord export_record(const TrajectorySet& s) {
  const Index T = s.frames(), F = s.features();
  TrajectoryRecord r = TrajectoryRecord::allocate(T, F, 0, 0);
  r.dt = s.dt;
  r.provenance = Provenance::Tracked;
  for (Index f = 0; f < F; ++f) {
    Index first = -1;
    for (Index t = 0; t < T && first < 0; ++t)
      if (!s.missing(t, f)) first = t;
    Eigen::Vector2d held = first >= 0 ? Eigen::Vector2d(s.positions(first, 2 * f), s.positions(first, 2 * f + 1))
                                      : Eigen::Vector2d::Zero();
    for (Index t = 0; t < T; ++t) {
      if (!s.missing(t, f)) held = {s.positions(t, 2 * f), s.positions(t, 2 * f + 1)};
      r.positions(t, 3 * f) = held.x();
      r.positions(t, 3 * f + 1) = held.y();
      r.positions(t, 3 * f + 2) = 0.0;
    }
  }
  for (Index t = 0; t < T && T > 1; ++t) {
    const Index a = std::max<Index>(0, t - 1), b = std::min(T - 1, t + 1);
    r.velocities.row(t) = (r.positions.row(b) - r.positions.row(a)) / (static_cast<double>(b - a) * s.dt);
  }
  r.energies.setConstant(std::nan(""));
  return r;
}

}  // namespace prc
