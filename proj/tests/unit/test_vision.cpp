#include <gtest/gtest.h>

#include <filesystem>

#include "prc/error.hpp"
#include "prc/schema/validate.hpp"
#include "prc/vision/bundle.hpp"
#include "synthetic_frames.hpp"

using namespace prc;
using fixtures::Blob;

namespace {

Image single_blob(double dx, double dy) { return fixtures::render_blobs(96, 96, {{48, 48, 3.0, 0.8}}, dx, dy); }

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "prc_test_vision";
  std::filesystem::create_directories(dir);
  return dir / name;
}

TrajectorySet one_feature_set(const std::vector<double>& xs) {
  TrajectorySet s;
  const auto T = static_cast<Index>(xs.size());
  s.positions.resize(T, 2);
  s.missing = MaskMatrix::Zero(T, 1);
  s.interpolated = MaskMatrix::Zero(T, 1);
  s.feature_ids = {0};
  for (Index t = 0; t < T; ++t) {
    s.positions(t, 0) = xs[static_cast<std::size_t>(t)];
    s.positions(t, 1) = 2.0 * xs[static_cast<std::size_t>(t)];
    if (std::isnan(xs[static_cast<std::size_t>(t)])) s.missing(t, 0) = 1;
  }
  return s;
}

}  // namespace

TEST(Image, PgmRoundTrip8And16Bit) {
  Image img(3, 4);
  for (Index i = 0; i < img.size(); ++i) img.data()[i] = static_cast<double>(i) / 11.0;
  for (int maxval : {255, 65535}) {
    const auto path = scratch("frame.pgm");
    write_pgm(path, img, maxval);
    const auto back = read_pgm(path);
    ASSERT_EQ(back.rows(), 3);
    ASSERT_EQ(back.cols(), 4);
    EXPECT_LT((back - img).abs().maxCoeff(), 0.5 / maxval + 1e-12);
  }
  EXPECT_THROW(read_pgm(scratch("absent.pgm")), IoError);
}

TEST(Detect, UniformFrameHasNoFeatures) {
  EXPECT_EQ(detect_features(Image::Constant(64, 64, 0.5), 1e-6, 100).size(), 0);
}

TEST(Detect, CheckerboardCornersAreFound) {
  const Index sq = 12, ox = 7, oy = 9;
  const auto img = fixtures::checkerboard(120, 100, sq, ox, oy);
  const auto fmap = detect_features(img, 1e-3, 500);
  ASSERT_GT(fmap.size(), 20);
  // Interior crossings sit between pixels ox + k*sq - 1 and ox + k*sq.
  for (Index i = 0; i < fmap.size(); ++i) {
    const double x = fmap.points(i, 0), y = fmap.points(i, 1);
    const double gx = std::round((x + 0.5 - ox) / sq) * sq + ox - 0.5;
    const double gy = std::round((y + 0.5 - oy) / sq) * sq + oy - 0.5;
    EXPECT_LT(std::hypot(x - gx, y - gy), 1.0) << "corner " << i << " at " << x << "," << y << " grid " << gx << "," << gy;
  }
}

TEST(Detect, TopFeaturesAreCappedAndOrdered) {
  const auto img = fixtures::render_blobs(320, 320, fixtures::blob_field(320, 320, 14, 3, 10));
  const auto fmap = detect_features(img, 1e-7, 200);
  ASSERT_EQ(fmap.size(), 200);
  for (Index i = 1; i < fmap.size(); ++i) EXPECT_GE(fmap.responses(i - 1), fmap.responses(i));
  EXPECT_EQ(fmap.frame_hash, frame_hash(img));
}

TEST(Detect, RegistryAcceptsCustomDetectors) {
  register_detector("centre", [](const Image& f, const DetectorOptions&) {
    FeatureMap m;
    m.points = RowMatrixd(1, 2);
    m.points << f.cols() / 2.0, f.rows() / 2.0;
    m.responses = Eigen::VectorXd::Ones(1);
    return m;
  });
  const auto m = detect_features(Image::Zero(10, 20), DetectorOptions{}, "centre");
  EXPECT_EQ(m.detector, "centre");
  EXPECT_EQ(m.points(0, 0), 10.0);
  EXPECT_THROW(detect_features(Image::Zero(10, 10), DetectorOptions{}, "sift"), ParameterError);
}

TEST(Detect, CacheHitsOnSameFrame) {
  const auto img = single_blob(0, 0);
  const auto path = scratch("fmap_cache.h5");
  std::filesystem::remove(path);
  FeatureMapCache cache(path);
  const auto a = cache.get(img, {});
  EXPECT_FALSE(cache.last_was_hit());
  const auto b = cache.get(img, {});
  EXPECT_TRUE(cache.last_was_hit());
  EXPECT_EQ(a.points, b.points);
  cache.get(single_blob(1, 0), {});
  EXPECT_FALSE(cache.last_was_hit());
}

TEST(Klt, IdenticalFramesGiveZeroDisplacement) {
  const auto img = single_blob(0, 0);
  RowMatrixd pts(1, 2);
  pts << 48, 48;
  const auto r = klt_track_pair(img, img, pts, KltConfig{});
  EXPECT_TRUE(r.converged(0));
  EXPECT_LT(r.displacements.norm(), 1e-9);
}

TEST(Klt, SubpixelBlobShift) {
  RowMatrixd pts(1, 2);
  pts << 48, 48;
  const auto r = klt_track_pair(single_blob(0, 0), single_blob(2.3, -1.1), pts, KltConfig{});
  EXPECT_TRUE(r.converged(0));
  EXPECT_NEAR(r.displacements(0, 0), 2.3, 0.1);
  EXPECT_NEAR(r.displacements(0, 1), -1.1, 0.1);
}

TEST(Klt, LargeShiftNeedsThePyramid) {
  const auto a = fixtures::render_blobs(160, 160, {{60, 70, 4.0, 0.8}});
  const auto b = fixtures::render_blobs(160, 160, {{60, 70, 4.0, 0.8}}, 20.0, 0.0);
  RowMatrixd pts(1, 2);
  pts << 60, 70;
  KltConfig cfg;
  cfg.max_level = 3;
  const auto coarse = klt_track_pair(a, b, pts, cfg);
  EXPECT_TRUE(coarse.converged(0));
  EXPECT_NEAR(coarse.displacements(0, 0), 20.0, 0.1);
  EXPECT_NEAR(coarse.displacements(0, 1), 0.0, 0.1);
  cfg.max_level = 0;
  const auto flat = klt_track_pair(a, b, pts, cfg);
  EXPECT_FALSE(flat.converged(0));
}

TEST(Klt, MismatchedSizesAreShapeErrors) {
  RowMatrixd pts(1, 2);
  pts << 5, 5;
  EXPECT_THROW(klt_track_pair(Image::Zero(10, 10), Image::Zero(10, 12), pts, KltConfig{}), ShapeError);
  KltConfig even;
  even.window = 20;
  EXPECT_THROW(klt_track_pair(Image::Zero(10, 10), Image::Zero(10, 10), pts, even), ParameterError);
}

TEST(Track, TranslatingSequenceIsLinear) {
  const auto blobs = fixtures::blob_field(200, 160, 28, 8);
  std::vector<Image> frames;
  for (int t = 0; t < 8; ++t) frames.push_back(fixtures::render_blobs(200, 160, blobs, 0.7 * t, -0.4 * t));
  const MemoryFrames src(frames);
  const auto fmap = detect_features(frames[0], 1e-4, 30);
  ASSERT_GT(fmap.size(), 10);
  const auto res = track_sequence(src, fmap, KltConfig{});
  for (Index f = 0; f < fmap.size(); ++f) {
    EXPECT_EQ(res.at(0, f), TrackStatus::Reference);
    for (Index t = 1; t < 8; ++t) {
      ASSERT_EQ(res.at(t, f), TrackStatus::Tracked) << "feature " << f << " frame " << t;
      EXPECT_NEAR(res.positions(t, 2 * f) - fmap.points(f, 0), 0.7 * t, 0.2);
      EXPECT_NEAR(res.positions(t, 2 * f + 1) - fmap.points(f, 1), -0.4 * t, 0.2);
      EXPECT_LE(res.fb_error(t, f), 2 * KltConfig{}.epsilon + 1e-3);
    }
  }
}

TEST(Track, ExitingFeatureBecomesOutOfBounds) {
  std::vector<Image> frames;
  for (int t = 0; t < 10; ++t) frames.push_back(fixtures::render_blobs(96, 64, {{60, 32, 3.0, 0.8}}, 4.0 * t, 0.0));
  const auto fmap = detect_features(frames[0], 1e-4, 1);
  ASSERT_EQ(fmap.size(), 1);
  const auto res = track_sequence(MemoryFrames(frames), fmap, KltConfig{});
  // The centre crosses x = 95 between frames 8 (92) and 9 (96).
  Index first_oob = -1;
  for (Index t = 0; t < 10; ++t)
    if (res.at(t, 0) == TrackStatus::OutOfBounds && first_oob < 0) first_oob = t;
  ASSERT_GE(first_oob, 0);
  for (Index t = first_oob; t < 10; ++t) EXPECT_EQ(res.at(t, 0), TrackStatus::OutOfBounds);
  for (Index t = 1; t < first_oob; ++t) EXPECT_NE(res.at(t, 0), TrackStatus::Drift);
}

TEST(Track, ErasedBlobIsDrift) {
  const std::vector<Blob> both{{30, 32, 3.0, 0.8}, {70, 32, 3.0, 0.8}};
  const std::vector<Blob> one{{30, 32, 3.0, 0.8}};
  std::vector<Image> frames{fixtures::render_blobs(100, 64, both), fixtures::render_blobs(100, 64, both),
                            fixtures::render_blobs(100, 64, one), fixtures::render_blobs(100, 64, one)};
  RowMatrixd pts(2, 2);
  pts << 30, 32, 70, 32;
  FeatureMap fmap;
  fmap.points = pts;
  fmap.responses = Eigen::VectorXd::Ones(2);
  KltConfig cfg;
  cfg.fb_threshold = 1.0;
  const auto res = track_sequence(MemoryFrames(frames), fmap, cfg);
  EXPECT_EQ(res.at(1, 1), TrackStatus::Tracked);
  EXPECT_EQ(res.at(2, 1), TrackStatus::Drift);
  EXPECT_EQ(res.at(3, 1), TrackStatus::Drift);
  EXPECT_EQ(res.at(3, 0), TrackStatus::Tracked);
}

TEST(Track, FrameSizeChangeIsShapeError) {
  std::vector<Image> frames{single_blob(0, 0), Image::Zero(90, 96)};
  FeatureMap fmap;
  fmap.points = RowMatrixd::Constant(1, 2, 48.0);
  fmap.responses = Eigen::VectorXd::Ones(1);
  EXPECT_THROW(track_sequence(MemoryFrames(frames), fmap, KltConfig{}), ShapeError);
}

TEST(Calibration, NormalizedMode) {
  const auto c = Calibration::normalized(1920, 1080);
  const auto p = c.to_world({960, 540});
  EXPECT_EQ(p.x(), 0.5);
  EXPECT_EQ(p.y(), 0.5);
}

TEST(Calibration, PinholeWithoutDistortionIsLinear) {
  Eigen::Matrix3d K;
  K << 800, 0.5, 320, 0, 780, 240, 0, 0, 1;
  const auto c = Calibration::pinhole(K, {}, 1.0, "unit");
  const Eigen::Vector2d px(123.4, 56.7);
  const Eigen::Vector3d lin = K.inverse() * Eigen::Vector3d(px.x(), px.y(), 1.0);
  EXPECT_LT((c.to_world(px) - lin.head<2>()).norm(), 1e-12);
  EXPECT_LT((c.to_pixel(c.to_world(px)) - px).norm(), 1e-10);
}

TEST(Calibration, ScaleAppliesAfterUndistortion) {
  const auto c = Calibration::pinhole(Eigen::Matrix3d::Identity(), {}, 25.0, "mm");
  const auto p = c.to_world({0.2, 0.1});
  EXPECT_NEAR(p.x(), 5.0, 1e-12);
  EXPECT_NEAR(p.y(), 2.5, 1e-12);
}

TEST(Calibration, DistortionRoundTrip) {
  Eigen::Matrix3d K;
  K << 600, 0, 320, 0, 600, 240, 0, 0, 1;
  const auto c = Calibration::pinhole(K, {-0.12, 0.03, 1e-3, -5e-4, 0.0}, 10.0, "mm");
  for (const Eigen::Vector2d& px : {Eigen::Vector2d(10, 20), Eigen::Vector2d(600, 400), Eigen::Vector2d(320, 240)})
    EXPECT_LT((c.to_pixel(c.to_world(px)) - px).norm(), 1e-6);
}

TEST(Calibration, SingularIntrinsicsAreRejected) {
  Eigen::Matrix3d K = Eigen::Matrix3d::Zero();
  EXPECT_THROW(Calibration::pinhole(K, {}, 1.0, "mm"), ParameterError);
}

TEST(TrajectorySetOps, GapsFilledUpToMaxGap) {
  const double nan = std::nan("");
  std::vector<double> xs(40);
  for (int t = 0; t < 40; ++t) xs[static_cast<std::size_t>(t)] = t;
  for (int t = 5; t < 8; ++t) xs[static_cast<std::size_t>(t)] = nan;    // 3-sample gap
  for (int t = 20; t < 35; ++t) xs[static_cast<std::size_t>(t)] = nan;  // 15-sample gap
  PostprocessOptions o;
  o.min_track_ratio = 0.0;
  o.max_gap = 10;
  o.smooth_window = 1;
  const auto s = postprocess_trajectories(one_feature_set(xs), o);
  for (int t = 5; t < 8; ++t) {
    EXPECT_NEAR(s.positions(t, 0), t, 1e-12);
    EXPECT_EQ(s.interpolated(t, 0), 1);
    EXPECT_EQ(s.missing(t, 0), 0);
  }
  for (int t = 20; t < 35; ++t) {
    EXPECT_EQ(s.missing(t, 0), 1);
    EXPECT_TRUE(std::isnan(s.positions(t, 0)));
  }
}

TEST(TrajectorySetOps, SmootherFixesConstants) {
  const auto s = postprocess_trajectories(one_feature_set(std::vector<double>(20, 3.25)), {0.0, 10, 5});
  EXPECT_TRUE((s.positions.col(0).array() == 3.25).all());
}

TEST(TrajectorySetOps, SmootherPreservesMeanAwayFromEdges) {
  // Ends are flat over the half-window plus one, so edge shrinkage is inert.
  std::vector<double> xs(60, 1.0);
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n;
  for (int t = 4; t < 56; ++t) xs[static_cast<std::size_t>(t)] = n(rng);
  xs[0] = xs[1] = xs[2] = xs[3] = xs[4];
  const Eigen::Map<Eigen::VectorXd> x(xs.data(), 60);
  Eigen::VectorXd y = x;
  for (int t = 56; t < 60; ++t) y(t) = y(55);
  EXPECT_NEAR(nan_moving_average(y, 5).mean(), y.mean(), 1e-12);
}

TEST(TrajectorySetOps, SparseFeaturesDropped) {
  TrajectorySet s = one_feature_set(std::vector<double>(10, 1.0));
  s.positions.conservativeResize(10, 4);
  s.missing.conservativeResize(10, 2);
  s.interpolated = MaskMatrix::Zero(10, 2);
  s.feature_ids = {0, 1};
  s.positions.col(2).setConstant(2.0);
  s.positions.col(3).setConstant(2.0);
  s.missing.col(1).setZero();
  s.missing.col(0).setZero();
  s.missing.block(0, 0, 1, 1).setOnes();  // ratio 0.9
  s.missing.block(0, 1, 5, 1).setOnes();  // ratio 0.5
  s.positions(0, 0) = std::nan("");
  const auto out = postprocess_trajectories(s, {0.6, 10, 1});
  ASSERT_EQ(out.features(), 1);
  EXPECT_EQ(out.feature_ids[0], 0);
}

TEST(TrajectorySetOps, SignalModes) {
  TrajectorySet s = one_feature_set({0.0, 3.0, 6.0});
  s.positions.col(1) << 0.0, 4.0, 8.0;
  EXPECT_DOUBLE_EQ(to_signals(s, SignalMode::Magnitude)(1, 0), 5.0);
  EXPECT_DOUBLE_EQ(to_signals(s, SignalMode::PathLength)(2, 0), 10.0);
  EXPECT_EQ(to_signals(s, SignalMode::X).col(0), s.positions.col(0));
  EXPECT_DOUBLE_EQ(to_signals(s, SignalMode::Magnitude, Eigen::Vector2d(3.0, 0.0))(1, 0), 4.0);
  EXPECT_THROW(signal_mode_from_string("speed"), ParameterError);
}

TEST(Pipeline, ExportedRecordIsValidAndRoundTrips) {
  const auto blobs = fixtures::blob_field(160, 120, 30, 4);
  std::vector<Image> frames;
  for (int t = 0; t < 12; ++t) frames.push_back(fixtures::render_blobs(160, 120, blobs, 0.5 * std::sin(0.4 * t), 0.3 * t));
  VisionConfig cfg;
  cfg.detect.max_features = 12;
  cfg.frame_dt = 0.04;
  const auto out = run_vision(MemoryFrames(frames), cfg);
  ASSERT_GT(out.record.node_count, 0);
  EXPECT_EQ(out.record.provenance, Provenance::Tracked);
  EXPECT_EQ(out.record.sample_count(), 12);
  EXPECT_TRUE(validate_record(out.record).empty());
  EXPECT_EQ(out.record.positions(3, 2), 0.0);
  const auto path = scratch("vision.h5");
  save_vision_bundle(out, path);
  const auto back = load_vision_bundle(path);
  EXPECT_TRUE(back.record == out.record);
  EXPECT_EQ(back.tracking.status, out.tracking.status);
  EXPECT_EQ(back.processed.feature_ids, out.processed.feature_ids);
}
