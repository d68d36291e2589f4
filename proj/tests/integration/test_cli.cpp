#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "lattice.hpp"
#include "prc/analysis/metrics_store.hpp"
#include "prc/analysis/narma.hpp"
#include "prc/cli/commands.hpp"
#include "prc/schema/storage.hpp"
#include "prc/schema/validate.hpp"
#include "prc/vision/image.hpp"
#include "synthetic_frames.hpp"

using namespace prc;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome prc_run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / "prc_test_cli" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path lattice_dir(const std::string& name) {
  auto dir = fresh_dir(name);
  fixtures::LatticeOptions o;
  o.duration = 12.0;
  save_bundle(fixtures::actuated_lattice(o), dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

// Content of every file under `dir`, keyed by relative path.
std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> s;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) s[fs::relative(e.path(), dir).string()] = slurp(e.path());
  return s;
}

nlohmann::json error_line(const Outcome& o) {
  EXPECT_EQ(std::count(o.err.begin(), o.err.end(), '\n'), 1) << o.err;
  return nlohmann::json::parse(o.err);
}

int spawn(const std::string& command) {
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(CliSimulate, WritesRecordAndRefusesRerun) {
  const auto dir = lattice_dir("simulate");
  const auto inputs = snapshot(dir);
  const auto first = prc_run({"simulate", dir.string()});
  ASSERT_EQ(first.code, 0) << first.err;
  EXPECT_TRUE(first.err.empty());
  const auto record = load_trajectory(dir / "output" / "simulation.h5");
  EXPECT_TRUE(validate_record(record).empty());
  EXPECT_EQ(record.sample_count(), 1201);

  const auto again = prc_run({"simulate", dir.string()});
  EXPECT_EQ(again.code, 4);
  EXPECT_EQ(error_line(again)["error"], "refusal");
  EXPECT_EQ(prc_run({"simulate", dir.string(), "--overwrite"}).code, 0);
  // Inputs are never touched.
  for (const auto& [name, content] : inputs) EXPECT_EQ(slurp(dir / name), content) << name;
}

TEST(CliSimulate, MissingGeometryIsAnInputError) {
  const auto dir = lattice_dir("missing_geometry");
  fs::remove(dir / "geometry.h5");
  const auto o = prc_run({"simulate", dir.string()});
  EXPECT_EQ(o.code, 2);
  EXPECT_NE(error_line(o)["message"].get<std::string>().find("geometry.h5"), std::string::npos);
  EXPECT_FALSE(fs::exists(dir / "output"));
}

TEST(CliSimulate, InvalidBundleReportsEveryViolation) {
  const auto dir = lattice_dir("invalid");
  auto cfg = load_config(dir / "config.json");
  cfg.dt = -1.0;
  save_config(cfg, dir / "config.json");
  const auto o = prc_run({"simulate", dir.string()});
  EXPECT_EQ(o.code, 2);
  EXPECT_EQ(error_line(o)["error"], "validation");
  EXPECT_NE(o.out.find("config.dt"), std::string::npos);
}

TEST(CliSimulate, DivergenceLeavesFlaggedPartialRecord) {
  const auto dir = fresh_dir("diverge");
  Bundle b;
  b.geometry.add_node({0, 0, 0}, 1.0);
  b.geometry.add_node({1, 0, 0}, 1.0);
  b.geometry.add_bar(0, 1, 1e12, 1.0);
  b.geometry.positions(1, 0) = 1.5;
  b.config.duration = 1.0;
  b.config.dt = 0.01;
  b.config.save_interval = 0.01;
  b.signals.dt = 0.01;
  save_bundle(b, dir);
  const auto o = prc_run({"simulate", dir.string()});
  EXPECT_EQ(o.code, 3);
  const auto e = error_line(o);
  EXPECT_EQ(e["error"], "divergence");
  EXPECT_TRUE(e.contains("partial_output"));
  EXPECT_TRUE(load_trajectory(dir / "output" / "simulation.h5").partial);
}

TEST(CliSimulate, DeterministicRunsAreByteIdentical) {
  const auto dir = lattice_dir("deterministic");
  const auto a = prc_run({"simulate", dir.string(), "--deterministic"});
  const auto first = slurp(dir / "output" / "simulation.h5");
  const auto b = prc_run({"simulate", dir.string(), "--deterministic", "--overwrite"});
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(first, slurp(dir / "output" / "simulation.h5"));
}

TEST(CliSimulate, FlagsOverrideTiming) {
  const auto dir = lattice_dir("flags");
  ASSERT_EQ(prc_run({"simulate", dir.string(), "--dt", "0.0005", "--save-interval", "0.02"}).code, 0);
  const auto r = load_trajectory(dir / "output" / "simulation.h5");
  EXPECT_EQ(r.dt, 0.02);
  EXPECT_EQ(r.sample_count(), 601);
  EXPECT_EQ(load_config(dir / "config.json").dt, 1e-3);
}

TEST(CliBackend, OnlyCpuIsAccepted) {
  const auto dir = lattice_dir("backend");
  const std::string cmd = std::string(PRC_CLI_PATH) + " simulate " + dir.string() + " >/dev/null 2>&1";
  EXPECT_EQ(spawn("PRC_BACKEND=gpu " + cmd), 2);
  EXPECT_FALSE(fs::exists(dir / "output"));
  EXPECT_EQ(spawn("PRC_BACKEND=cpu " + cmd), 0);
  EXPECT_EQ(spawn(std::string(PRC_CLI_PATH) + " frobnicate >/dev/null 2>&1"), 2);
  EXPECT_EQ(spawn(std::string(PRC_CLI_PATH) + " --help >/dev/null 2>&1"), 0);
}

TEST(CliTrack, TranslationCorpusIsAllTracked) {
  const auto frames = fresh_dir("frames");
  const auto blobs = fixtures::blob_field(160, 120, 30, 3);
  for (int t = 0; t < 6; ++t) {
    char name[32];
    std::snprintf(name, sizeof name, "frame_%03d.pgm", t);
    write_pgm(frames / name, fixtures::render_blobs(160, 120, blobs, 0.8 * t, -0.4 * t), 65535);
  }
  const auto params = fresh_dir("track_params") / "params.json";
  std::ofstream(params) << R"({"fb_threshold": 1.0, "window": 21, "levels": 3})";
  const auto out = fresh_dir("track_out") / "vision.h5";
  const auto o = prc_run({"track", frames.string(), "--params", params.string(), "--out", out.string()});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_NE(o.out.find("all TRACKED"), std::string::npos) << o.out;
  h5::File f(out, h5::Mode::Read);
  EXPECT_EQ(f.attr_double("/parameters", "fb_threshold"), 1.0);
  EXPECT_EQ(f.attr_int("/parameters", "window"), 21);
  EXPECT_EQ(f.attr_int("/parameters", "levels"), 3);
  const auto rec = load_trajectory(out);
  EXPECT_EQ(rec.provenance, Provenance::Tracked);
  EXPECT_EQ(rec.sample_count(), 6);

  EXPECT_EQ(prc_run({"track", fresh_dir("empty_frames").string(), "--out", out.string()}).code, 2);
  EXPECT_EQ(prc_run({"track", frames.string(), "--out", out.string()}).code, 4);
}

TEST(CliBench, MemoryPersistsCapacityTable) {
  const auto dir = lattice_dir("bench_memory");
  ASSERT_EQ(prc_run({"simulate", dir.string()}).code, 0);
  const auto o = prc_run({"bench", dir.string(), "memory", "--tau-s", "30", "--n-s", "2", "--k-delay", "1"});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_NE(o.out.find("MC_lin"), std::string::npos);
  const auto rec = MetricsStore(dir / "output" / "metrics.h5").load("memory_benchmark");
  ASSERT_TRUE(rec.capacity.has_value());
  EXPECT_EQ(rec.capacity->tau_s, 30);
  EXPECT_EQ(rec.capacity->n_s, 2);
  EXPECT_EQ(rec.capacity->k_delay, 1);
  EXPECT_EQ(rec.capacity->rows(), 527);
  EXPECT_EQ(rec.parameters.at("tau_s"), 30.0);

  const auto missing = prc_run({"bench", dir.string(), "custom:missing"});
  EXPECT_EQ(missing.code, 2);
  EXPECT_NE(error_line(missing)["message"].get<std::string>().find("narma"), std::string::npos);
  EXPECT_EQ(prc_run({"bench", dir.string(), "memory"}).code, 4);
}

TEST(CliBench, NarmaOnOracleStateRecord) {
  const auto dir = fresh_dir("bench_oracle");
  const Index T = 2000;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  Eigen::VectorXd u(T);
  for (auto& v : u) v = d(rng);
  const Eigen::VectorXd y = narma_target(normalize_narma_input(u), 2);
  // One node whose x coordinate is the target itself.
  auto r = TrajectoryRecord::allocate(T, 1, 0, 0);
  r.dt = 0.01;
  r.positions.col(0) = y;
  r.positions.col(1) = u;
  r.signals = SignalSet{};
  r.signals->dt = 0.01;
  r.signals->add("drive", u);
  r.config = SimConfig{};
  r.config->duration = static_cast<double>(T - 1) * 0.01;
  r.config->dt = 0.01;
  r.config->save_interval = 0.01;
  r.config->actuators.push_back(Actuator{0, "drive"});
  fs::create_directories(dir / "output");
  store_record(r, dir / "output" / "simulation.h5");
  const auto o = prc_run({"bench", dir.string(), "narma", "--order", "2", "--features", "positions:x", "--ridge", "0"});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto rec = MetricsStore(dir / "output" / "metrics.h5").load("narma_benchmark");
  EXPECT_LT(rec.scalars.at("nrmse_test"), 1e-6);
  EXPECT_NE(o.out.find("nrmse_test"), std::string::npos);
}

TEST(CliExport, FormatsAgreeAndReadsAreIdempotent) {
  const auto dir = lattice_dir("export");
  ASSERT_EQ(prc_run({"simulate", dir.string()}).code, 0);
  ASSERT_EQ(prc_run({"bench", dir.string(), "memory", "--tau-s", "10"}).code, 0);
  ASSERT_EQ(prc_run({"bench", dir.string(), "narma"}).code, 0);
  const auto before = snapshot(dir);

  const auto metrics = (dir / "output" / "metrics.h5").string();
  const auto csv = prc_run({"export", metrics, "csv", "capacity"});
  ASSERT_EQ(csv.code, 0) << csv.err;
  EXPECT_EQ(csv.out.substr(0, csv.out.find('\n')), "degree,delay_signature,C");
  const auto js = prc_run({"export", metrics, "json", "capacity"});
  const auto parsed = nlohmann::json::parse(js.out);
  std::istringstream lines(csv.out);
  std::string line;
  std::getline(lines, line);
  std::size_t i = 0;
  while (std::getline(lines, line)) {
    const auto c1 = line.find(','), c2 = line.rfind(',');
    const auto& row = parsed["rows"][i++];
    EXPECT_NEAR(std::stod(line.substr(0, c1)), row[0].get<double>(), 1e-12);
    EXPECT_EQ(line.substr(c1 + 1, c2 - c1 - 1), row[1].get<std::string>());
    EXPECT_NEAR(std::stod(line.substr(c2 + 1)), row[2].get<double>(), 1e-12);
  }
  EXPECT_EQ(i, parsed["rows"].size());
  EXPECT_EQ(i, 11u + 66u);

  const auto readout = prc_run({"export", (dir / "output" / "readout.h5").string(), "csv", "readout:NARMA2"});
  ASSERT_EQ(readout.code, 0) << readout.err;
  EXPECT_EQ(readout.out.substr(0, readout.out.find('\n')), "time,target,prediction");
  EXPECT_EQ(prc_run({"export", metrics, "csv", "mc_profile"}).code, 0);
  EXPECT_EQ(prc_run({"export", (dir / "output" / "simulation.h5").string(), "json", "ccf:5"}).code, 0);
  EXPECT_EQ(prc_run({"inspect", dir.string()}).code, 0);
  EXPECT_EQ(prc_run({"diagnose", dir.string()}).code, 0);

  const auto bad = prc_run({"export", metrics, "csv", "nonsense"});
  EXPECT_EQ(bad.code, 2);
  EXPECT_EQ(error_line(bad)["error"], "parameter");
  EXPECT_EQ(snapshot(dir), before);
}

TEST(CliTrain, FitsNamedSignal) {
  const auto dir = lattice_dir("train");
  ASSERT_EQ(prc_run({"simulate", dir.string()}).code, 0);
  const auto o = prc_run({"train", dir.string(), "--target", "drive", "--delay", "1"});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto r = load_readout(dir / "output" / "readout.h5", "fit_drive");
  EXPECT_LT(r.nrmse_test(0), 1.0);
  EXPECT_EQ(prc_run({"train", dir.string(), "--target", "drive"}).code, 4);
  EXPECT_EQ(prc_run({"train", dir.string(), "--target", "nope", "--task", "x"}).code, 2);
}
