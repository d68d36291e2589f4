#include <gtest/gtest.h>

#include <filesystem>

#include "prc/error.hpp"
#include "prc/schema/bundle.hpp"
#include "prc/schema/h5.hpp"
#include "prc/schema/storage.hpp"
#include "prc/schema/validate.hpp"
#include "random_records.hpp"

namespace fs = std::filesystem;
using namespace prc;

namespace {

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / "prc_test_schema";
  fs::create_directories(dir);
  return dir / name;
}

Bundle two_node_bundle() {
  Bundle b;
  b.geometry.add_node({0, 0, 0}, 1.0);
  b.geometry.add_node({1, 0, 0}, 1.0);
  b.geometry.add_bar(0, 1, 10.0);
  b.signals.dt = 0.01;
  b.config.duration = 1.0;
  b.config.dt = 0.001;
  b.config.save_interval = 0.01;
  return b;
}

}  // namespace

TEST(Validate, MinimalBundleIsClean) {
  const auto b = two_node_bundle();
  const auto report = validate_bundle(b.geometry, b.signals, b.config);
  EXPECT_TRUE(report.ok()) << report.summary();
  EXPECT_EQ(report.sample_count, 101);
}

TEST(Validate, BarEndpointOutOfRange) {
  auto b = two_node_bundle();
  b.geometry.bars[0].j = 2;
  const auto report = validate_bundle(b.geometry, b.signals, b.config);
  ASSERT_FALSE(report.ok());
  EXPECT_TRUE(report.mentions("bar endpoint out of range"));
  EXPECT_EQ(report.entries[0].location, "bars[0]");
}

TEST(Validate, TenSecondsAtCentisecondsGivesThousandAndOneSamples) {
  auto b = two_node_bundle();
  b.config.duration = 10.0;
  b.config.dt = 0.001;
  b.config.save_interval = 0.01;
  const auto report = validate_bundle(b.geometry, b.signals, b.config);
  EXPECT_TRUE(report.ok());
  EXPECT_EQ(report.sample_count, 1001);
}

TEST(Validate, ReportsEveryViolation) {
  auto b = two_node_bundle();
  b.geometry.masses(0) = -1.0;
  b.geometry.bars[0].rest_length = 0.0;
  b.geometry.add_hinge({0, 1, 1, 0}, 1.0, 7.0);
  b.config.save_interval = 0.0001;  // < dt
  Actuator act;
  act.signal = "missing";
  b.config.actuators.push_back(act);
  const auto report = validate_bundle(b.geometry, b.signals, b.config);
  EXPECT_TRUE(report.mentions("nodes[0].mass"));
  EXPECT_TRUE(report.mentions("bars[0].rest_length"));
  EXPECT_TRUE(report.mentions("hinge nodes must be distinct"));
  EXPECT_TRUE(report.mentions("hinges[0].rest_angle"));
  EXPECT_TRUE(report.mentions("config.save_interval"));
  EXPECT_TRUE(report.mentions("signal 'missing' not found"));
}

TEST(Validate, ShortSignalIsReported) {
  auto b = two_node_bundle();
  b.signals.add("drive", Eigen::VectorXd::Zero(50));  // covers 0.49 s of 1 s
  Actuator act;
  act.node = 1;
  act.signal = "drive";
  b.config.actuators.push_back(act);
  EXPECT_TRUE(validate_bundle(b.geometry, b.signals, b.config).mentions("signal shorter than duration"));
  b.signals.add("drive", Eigen::VectorXd::Zero(101));
  EXPECT_TRUE(validate_bundle(b.geometry, b.signals, b.config).ok());
}

TEST(Validate, PinnedSentinelIsAccepted) {
  auto b = two_node_bundle();
  b.geometry.masses(0) = kPinnedMass;
  EXPECT_TRUE(validate_bundle(b.geometry, b.signals, b.config).ok());
}

TEST(Config, JsonRoundTripAndKeyNames) {
  fixtures::Randomizer rnd(3);
  for (int i = 0; i < 20; ++i) {
    const auto c = rnd.config();
    EXPECT_TRUE(config_from_json(to_json(c)) == c);
  }
  const auto c = config_from_json(R"({"duration": 10.0, "dt": 0.001, "save_interval": 0.01,
                                     "gravity": 0, "damping": 0.8})");
  EXPECT_DOUBLE_EQ(c.damping, 0.8);
  EXPECT_EQ(c.gravity, Eigen::Vector3d::Zero());
  EXPECT_EQ(c.sample_count(), 1001);
  EXPECT_THROW(config_from_json(R"({"dt": 0.001})"), ConfigurationError);
  EXPECT_THROW(config_from_json("{nope"), ConfigurationError);
}

TEST(Storage, TrajectoryRoundTripIsBitIdentical) {
  fixtures::Randomizer rnd(11);
  const auto path = scratch("traj.h5");
  for (int i = 0; i < 25; ++i) {
    const auto r = rnd.trajectory();
    store_record(r, path);
    EXPECT_TRUE(load_trajectory(path) == r) << "iteration " << i;
  }
}

TEST(Storage, SignedZeroSurvivesRoundTrip) {
  TrajectoryRecord r = TrajectoryRecord::allocate(2, 1, 0, 0);
  r.positions(0, 0) = -0.0;
  r.dt = 0.1;
  const auto path = scratch("zero.h5");
  store_record(r, path);
  const auto back = load_trajectory(path);
  EXPECT_TRUE(std::signbit(back.positions(0, 0)));
}

TEST(Storage, OtherRecordsRoundTrip) {
  fixtures::Randomizer rnd(12);
  const auto path = scratch("other.h5");
  for (int i = 0; i < 20; ++i) {
    const auto readout = rnd.readout();
    const auto metrics = rnd.metrics();
    const auto g = rnd.geometry(5, 7, 2);
    const auto s = rnd.signals(2, 30);
    {
      h5::File f(path, h5::Mode::Truncate);
      write_readout(f, readout, "/readout");
      write_metrics(f, metrics, "/metrics");
      write_geometry(f, g);
      write_signals(f, s);
    }
    h5::File f(path, h5::Mode::Read);
    EXPECT_TRUE(read_readout(f, "/readout") == readout);
    EXPECT_TRUE(read_metrics(f, "/metrics") == metrics);
    EXPECT_TRUE(read_geometry(f) == g);
    EXPECT_TRUE(read_signals(f) == s);
  }
}

TEST(Storage, LayoutMatchesSchemaNames) {
  auto r = TrajectoryRecord::allocate(4, 3, 2, 1);
  r.dt = 0.01;
  const auto path = scratch("layout.h5");
  store_record(r, path);
  h5::File f(path, h5::Mode::Read);
  EXPECT_EQ(f.dims("/positions"), (std::vector<hsize_t>{4, 3, 3}));
  EXPECT_EQ(f.dims("/velocities"), (std::vector<hsize_t>{4, 3, 3}));
  EXPECT_EQ(f.dims("/bar_strains"), (std::vector<hsize_t>{4, 2}));
  EXPECT_EQ(f.dims("/hinge_angles"), (std::vector<hsize_t>{4, 1}));
  EXPECT_EQ(f.dims("/energies"), (std::vector<hsize_t>{4, 3}));
}

TEST(Storage, MissingPositionsNamesThePath) {
  auto r = TrajectoryRecord::allocate(2, 1, 0, 0);
  r.dt = 0.1;
  const auto path = scratch("missing.h5");
  store_record(r, path);
  {
    h5::File f(path, h5::Mode::ReadWrite);
    f.remove("/positions");
  }
  try {
    load_trajectory(path);
    FAIL() << "expected a schema violation";
  } catch (const SchemaError& e) {
    EXPECT_EQ(e.path(), "positions");
    EXPECT_EQ(e.kind(), "schema_violation");
    EXPECT_NE(std::string(e.what()).find("positions"), std::string::npos);
  }
}

TEST(Storage, UnwritableDestinationIsIoError) {
  TrajectoryRecord r = TrajectoryRecord::allocate(1, 1, 0, 0);
  EXPECT_THROW(store_record(r, "/nonexistent_dir_prc/x/y.h5"), IoError);
}

TEST(Bundle, DirectoryRoundTrip) {
  auto b = two_node_bundle();
  b.signals.add("drive", Eigen::VectorXd::LinSpaced(101, 0.0, 1.0));
  const auto dir = scratch("bundle_dir");
  save_bundle(b, dir);
  EXPECT_TRUE(fs::exists(dir / "config.json"));
  const auto back = load_bundle(dir);
  EXPECT_TRUE(back.geometry == b.geometry);
  EXPECT_TRUE(back.signals == b.signals);
  EXPECT_TRUE(back.config == b.config);
}

TEST(Records, ActuationSignalFollowsRecordTimebase) {
  auto r = TrajectoryRecord::allocate(11, 2, 1, 0);
  r.dt = 0.1;
  SignalSet s;
  s.dt = 0.05;
  s.add("u", Eigen::VectorXd::LinSpaced(21, 0.0, 1.0));
  SimConfig c;
  Actuator act;
  act.signal = "u";
  c.actuators.push_back(act);
  r.signals = s;
  r.config = c;
  const auto u = r.actuation_signal();
  ASSERT_EQ(u.size(), 11);
  EXPECT_NEAR(u(5), 0.5, 1e-12);
  r.config.reset();
  EXPECT_THROW(r.actuation_signal(), CapabilityError);
}
