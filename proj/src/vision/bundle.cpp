#include "prc/vision/bundle.hpp"

#include "prc/error.hpp"
#include "prc/schema/storage.hpp"

namespace prc {

VisionOutput run_vision(const FrameSource& frames, const VisionConfig& cfg) {
  if (frames.size() < 2) throw ParameterError("vision pipeline needs at least two frames");
  VisionOutput out;
  out.features = detect_features(frames.frame(0), cfg.detect, cfg.detector);
  out.tracking = track_sequence(frames, out.features, cfg.klt);
  out.raw = calibrate_points(out.tracking, cfg.calibration, cfg.frame_dt);
  out.processed = postprocess_trajectories(out.raw, cfg.post);
  for (auto mode : {SignalMode::X, SignalMode::Y, SignalMode::Magnitude, SignalMode::PathLength})
    out.signals[to_string(mode)] = to_signals(out.processed, mode);
  out.record = export_record(out.processed);
  return out;
}

namespace {

RowMatrixd mask_to_matrix(const MaskMatrix& m) { return m.cast<double>().matrix(); }

MaskMatrix matrix_to_mask(const RowMatrixd& m) { return (m.array() != 0.0).cast<std::uint8_t>(); }

void write_set(h5::File& f, const TrajectorySet& s, const std::string& root) {
  f.create_group(root);
  f.write_matrix(root + "/positions", s.positions);
  f.write_matrix(root + "/missing", mask_to_matrix(s.missing));
  f.write_matrix(root + "/interpolated", mask_to_matrix(s.interpolated));
  RowMatrixi ids(static_cast<Index>(s.feature_ids.size()), 1);
  for (std::size_t i = 0; i < s.feature_ids.size(); ++i) ids(static_cast<Index>(i), 0) = s.feature_ids[i];
  f.write_matrix(root + "/feature_ids", ids);
  f.set_attr(root, "units", s.units);
  f.set_attr(root, "dt", s.dt);
}

TrajectorySet read_set(const h5::File& f, const std::string& root) {
  TrajectorySet s;
  s.positions = f.read_matrix(root + "/positions");
  s.missing = matrix_to_mask(f.read_matrix(root + "/missing"));
  s.interpolated = matrix_to_mask(f.read_matrix(root + "/interpolated"));
  const auto ids = f.read_int_matrix(root + "/feature_ids");
  for (Index i = 0; i < ids.rows(); ++i) s.feature_ids.push_back(ids(i, 0));
  s.units = f.attr_string(root, "units");
  s.dt = f.attr_double(root, "dt");
  return s;
}

}  // namespace

void save_vision_bundle(const VisionOutput& o, const std::filesystem::path& path) {
  h5::File f(path, h5::Mode::Truncate);
  write_trajectory(f, o.record);
  f.create_group("/feature_map");
  f.write_matrix("/feature_map/points", o.features.points);
  f.write_vector("/feature_map/responses", o.features.responses);
  f.set_attr("/feature_map", "detector", o.features.detector);
  f.set_attr("/feature_map", "frame_hash", static_cast<std::int64_t>(o.features.frame_hash));
  f.set_attr("/feature_map", "width", static_cast<std::int64_t>(o.features.width));
  f.set_attr("/feature_map", "height", static_cast<std::int64_t>(o.features.height));

  const Index T = o.tracking.frames(), F = o.tracking.features();
  f.create_group("/tracking");
  f.write("/tracking/positions", o.tracking.positions.data(), {static_cast<hsize_t>(T), static_cast<hsize_t>(F), 2});
  f.write_matrix("/tracking/status", RowMatrixi(o.tracking.status));
  f.write_matrix("/tracking/fb_error", o.tracking.fb_error);
  f.write_vector("/tracking/track_ratio", o.tracking.track_ratios());
  f.set_attr("/tracking", "width", static_cast<std::int64_t>(o.tracking.width));
  f.set_attr("/tracking", "height", static_cast<std::int64_t>(o.tracking.height));

  write_set(f, o.raw, "/trajectory_set/raw");
  write_set(f, o.processed, "/trajectory_set/processed");
  f.create_group("/vision_signals");
  for (const auto& [name, m] : o.signals) f.write_matrix("/vision_signals/" + name, m);
}

VisionOutput load_vision_bundle(const std::filesystem::path& path) {
  h5::File f(path, h5::Mode::Read);
  VisionOutput o;
  o.record = read_trajectory(f);
  o.features.points = f.read_matrix("/feature_map/points");
  o.features.responses = f.read_vector("/feature_map/responses");
  o.features.detector = f.attr_string("/feature_map", "detector");
  o.features.frame_hash = static_cast<std::uint64_t>(f.attr_int("/feature_map", "frame_hash"));
  o.features.width = f.attr_int("/feature_map", "width");
  o.features.height = f.attr_int("/feature_map", "height");

  auto pos = f.read_double("/tracking/positions");
  if (pos.dims.size() != 3) throw SchemaError("tracking/positions", "schema violation: tracking positions must be [T, F, 2]");
  o.tracking.positions.resize(static_cast<Index>(pos.dims[0]), static_cast<Index>(pos.dims[1] * 2));
  std::copy(pos.data.begin(), pos.data.end(), o.tracking.positions.data());
  o.tracking.status = f.read_int_matrix("/tracking/status");
  o.tracking.fb_error = f.read_matrix("/tracking/fb_error");
  o.tracking.width = f.attr_int("/tracking", "width");
  o.tracking.height = f.attr_int("/tracking", "height");

  o.raw = read_set(f, "/trajectory_set/raw");
  o.processed = read_set(f, "/trajectory_set/processed");
  for (const auto& name : f.children("/vision_signals")) o.signals[name] = f.read_matrix("/vision_signals/" + name);
  return o;
}

}  // namespace prc
