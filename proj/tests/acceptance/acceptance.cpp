// Acceptance suite: one PASS/FAIL line per criterion, each with its measured
// value and wall time. A criterion passes only if its property holds and it
// finishes inside its time limit. The exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <string>

#include "lattice.hpp"
#include "oracles.hpp"
#include "prc/analysis/benchmarks.hpp"
#include "prc/analysis/capacity.hpp"
#include "prc/analysis/linear.hpp"
#include "prc/analysis/narma.hpp"
#include "prc/analysis/nonparametric.hpp"
#include "prc/analysis/redundancy.hpp"
#include "prc/barhinge/engine.hpp"
#include "prc/barhinge/forces.hpp"
#include "prc/schema/storage.hpp"
#include "prc/schema/validate.hpp"
#include "prc/vision/bundle.hpp"
#include "prc/vision/klt.hpp"
#include "prc/vision/tracker.hpp"
#include "random_records.hpp"
#include "synthetic_frames.hpp"

using namespace prc;
using std::numbers::pi;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

int failures = 0;

void criterion(int id, const char* name, double limit_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = elapsed < limit_s;
  const bool pass = o.pass && in_time;
  failures += !pass;
  std::printf("%s  %2d  %-28s %s; %.2f s (limit %g s)%s\n", pass ? "PASS" : "FAIL", id, name, o.detail.c_str(),
              elapsed, limit_s, in_time ? "" : " TOO SLOW");
  std::fflush(stdout);
}

Eigen::VectorXd uniform(Index n, std::uint64_t seed, double lo = 0.0, double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(lo, hi);
  Eigen::VectorXd v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

Eigen::VectorXd delayed(const Eigen::VectorXd& u, Index k) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(u.size());
  v.tail(u.size() - k) = u.head(u.size() - k);
  return v;
}

// ---------------------------------------------------------------------- 1

Bundle oscillator(double k, double stretch, double dt) {
  Bundle b;
  b.geometry.add_node({0, 0, 0}, kPinnedMass);
  b.geometry.add_node({1.0 + stretch, 0, 0}, 1.0);
  b.geometry.add_bar(0, 1, k, 1.0);
  b.signals.dt = 0.01;
  b.config.dt = dt;
  b.config.save_interval = 0.01;
  b.config.duration = 1.0;
  return b;
}

Outcome integrator_order() {
  // Unit-mass oscillator against its closed form x(t) = 1 + a cos(ωt).
  const double k = 400.0, a = 0.1, omega = std::sqrt(k);
  std::vector<double> xs, ys;
  for (double dt : {1e-2, 5e-3, 2e-3, 1e-3, 5e-4, 2e-4, 1e-4}) {
    const auto r = simulate(oscillator(k, a, dt));
    double err = 0.0;
    for (Index t = 0; t < r.sample_count(); ++t)
      err = std::max(err, std::abs(r.positions(t, 3) - (1.0 + a * std::cos(omega * static_cast<double>(t) * r.dt))));
    xs.push_back(std::log(dt));
    ys.push_back(std::log(err));
  }
  const Eigen::Map<Eigen::VectorXd> x(xs.data(), 7), y(ys.data(), 7);
  const double slope = ((x.array() - x.mean()) * (y.array() - y.mean())).sum() / (x.array() - x.mean()).square().sum();
  return {std::abs(slope - 4.0) <= 0.3, "slope " + num(slope)};
}

// ---------------------------------------------------------------------- 2

Outcome constraint_preservation() {
  double worst = 0.0;
  Index unconverged = 0;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> pos(0.0, 1.0), mass(0.005, 0.02);
  for (Index n : {10, 20, 30, 40, 50}) {
    Bundle b;
    for (Index i = 0; i < n; ++i) b.geometry.add_node({pos(rng), pos(rng), pos(rng)}, i == 0 ? kPinnedMass : mass(rng));
    // Rigid spanning tree, then extra bars: a third of them rigid (closing
    // rigid cycles), the rest soft.
    std::vector<std::pair<Index, Index>> rigid;
    for (Index i = 1; i < n; ++i) {
      const Index j = std::uniform_int_distribution<Index>(0, i - 1)(rng);
      b.geometry.add_bar(i, j, 1.0, std::numeric_limits<double>::quiet_NaN(), kInheritDamping, true);
      rigid.emplace_back(i, j);
    }
    for (Index e = 0; e < n / 2; ++e) {
      const Index i = std::uniform_int_distribution<Index>(1, n - 1)(rng);
      const Index j = std::uniform_int_distribution<Index>(0, i - 1)(rng);
      const bool is_rigid = e % 3 == 0;
      b.geometry.add_bar(i, j, 50.0, std::numeric_limits<double>::quiet_NaN(), kInheritDamping, is_rigid);
      if (is_rigid) rigid.emplace_back(i, j);
    }
    b.config.duration = 10.0;
    b.config.dt = 1e-3;
    b.config.save_interval = 0.01;
    b.config.gravity = {0, 0, -9.81};
    b.signals.dt = 0.01;
    const auto result = run_simulation(b);
    if (result.diverged) return {false, "network " + std::to_string(n) + " diverged: " + result.failure};
    unconverged += result.pbd_unconverged_steps;
    const auto& r = result.record;
    for (Index t = 0; t < r.sample_count(); ++t) {
      const auto P = r.frame(t);
      for (const auto& [i, j] : rigid) {
        const double l0 = (b.geometry.positions.row(i) - b.geometry.positions.row(j)).norm();
        worst = std::max(worst, std::abs((P.row(i) - P.row(j)).norm() - l0));
      }
    }
  }
  return {worst <= 1e-6, "max rigid residual " + num(worst) + ", unconverged steps " + std::to_string(unconverged)};
}

// ---------------------------------------------------------------------- 3

std::array<Eigen::Vector3d, 4> random_hinge(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto r3 = [&] { return Eigen::Vector3d(u(rng), u(rng), u(rng)); };
  while (true) {
    std::array<Eigen::Vector3d, 4> p{r3(), r3(), r3(), r3()};
    const Eigen::Vector3d e = (p[1] - p[0]).normalized();
    auto off = [&](const Eigen::Vector3d& q) { return ((q - p[0]) - (q - p[0]).dot(e) * e).norm(); };
    if ((p[1] - p[0]).norm() > 0.3 && off(p[2]) > 0.3 && off(p[3]) > 0.3) {
      const double th = dihedral_angle_and_gradient(p[0], p[1], p[2], p[3]).theta;
      if (th > 0.2 && th < 2 * pi - 0.2) return p;
    }
  }
}

Outcome gradient_correctness() {
  std::mt19937_64 rng(3);
  const double h = 1e-6;
  double worst_grad = 0.0, worst_force = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto p = random_hinge(rng);
    const auto d = dihedral_angle_and_gradient(p[0], p[1], p[2], p[3]);
    Geometry g;
    for (const auto& q : p) g.add_node(q, 1.0);
    g.add_hinge({0, 1, 2, 3}, 1.3, d.theta + 0.4);
    const NodeMatrixd F = hinge_forces({g.positions, NodeMatrixd::Zero(4, 3), 0.0}, g);
    Eigen::Matrix<double, 4, 3> fd_grad, fd_force;
    for (int k = 0; k < 4; ++k)
      for (int c = 0; c < 3; ++c) {
        auto q = p;
        q[k](c) += h;
        const double th_up = dihedral_angle_and_gradient(q[0], q[1], q[2], q[3]).theta;
        NodeMatrixd P = g.positions;
        P(k, c) += h;
        const double e_up = system_energies(P, NodeMatrixd::Zero(4, 3), g)(2);
        q[k](c) -= 2 * h;
        P(k, c) -= 2 * h;
        const double th_dn = dihedral_angle_and_gradient(q[0], q[1], q[2], q[3]).theta;
        const double e_dn = system_energies(P, NodeMatrixd::Zero(4, 3), g)(2);
        fd_grad(k, c) = (th_up - th_dn) / (2 * h);
        fd_force(k, c) = -(e_up - e_dn) / (2 * h);
      }
    worst_grad = std::max(worst_grad, (fd_grad - d.grad).norm() / d.grad.norm());
    worst_force = std::max(worst_force, (fd_force - F).norm() / F.norm());
  }
  return {worst_grad <= 1e-5 && worst_force <= 1e-5,
          "max rel. error gradient " + num(worst_grad) + ", forces " + num(worst_force)};
}

// ---------------------------------------------------------------------- 4

Bundle soft_lattice(double damping) {
  SheetMaterial mat;
  mat.bar_stiffness = 100.0;
  mat.hinge_stiffness = 1.0;
  mat.mass = 0.1;
  mat.bar_damping = damping;
  Bundle b;
  b.geometry = miura_sheet(3, 3, 1.0, 1.0, 0.3, 0.2, mat);
  b.geometry.positions(15, 2) += 0.05;
  b.config.duration = 1.0;
  b.config.dt = 1e-4;
  b.signals.dt = 0.01;
  return b;
}

Outcome energy_sanity() {
  auto undamped = soft_lattice(0.0);
  undamped.config.save_interval = 1e-3;
  const auto r = simulate(undamped);
  const Eigen::VectorXd total = r.energies.rowwise().sum();
  const double drift = (total.array() - total(0)).abs().maxCoeff() / total(0);

  // Every step saved so monotonicity is checked per integrator step.
  auto damped = soft_lattice(0.05);
  damped.config.save_interval = 1e-4;
  const auto d = simulate(damped);
  const Eigen::VectorXd e = d.energies.rowwise().sum();
  double worst_rise = -std::numeric_limits<double>::infinity();
  for (Index t = 1; t < e.size(); ++t) worst_rise = std::max(worst_rise, e(t) - e(t - 1));
  return {drift < 0.01 && worst_rise <= 1e-9 && e(e.size() - 1) < e(0),
          "undamped drift " + num(100 * drift) + "%, damped max step rise " + num(worst_rise)};
}

// ---------------------------------------------------------------------- 5

Outcome delay_line_capacity() {
  const Index T = 5000;
  const auto u = uniform(T, 55);
  FeatureMatrix f;
  f.values.resize(T, 20);
  for (Index k = 1; k <= 20; ++k) {
    f.values.col(k - 1) = delayed(u, k);
    f.labels.push_back("u_t-" + std::to_string(k));
  }
  f.dt = 1.0;
  TrainerContext ctx{f, {30.0, 3500.0, 1470.0, 1e-6, true}, {}};
  const auto score = memory_benchmark(ctx, u, MemoryParams{});
  const auto& c = *score.capacity;
  double worst = 0.0;
  for (Index k = 0; k <= 30; ++k) {
    const double r2 = fixtures::reconstruction_r2(f.values, delayed(u, k), 30, 3530, 5000, 1e-6);
    worst = std::max(worst, std::abs(c.c(k) - threshold_capacity(r2, c.epsilon)));
  }
  return {c.mc_lin >= 18 && c.mc_lin <= 20 && c.ipc_tot <= 20.5 && worst <= 1e-8,
          "MC_lin " + num(c.mc_lin) + ", IPC_tot " + num(c.ipc_tot) + ", degree-1 oracle gap " + num(worst)};
}

// ---------------------------------------------------------------------- 6

Outcome epsilon_rule() {
  const double eps = epsilon_threshold(10, 1000, 1e-4);
  const double oracle = 2.0 * fixtures::chi2_isf_oracle(1e-4, 10) / 1000.0;
  const double rel = std::abs(eps / oracle - 1.0);
  return {rel <= 1e-6, "epsilon " + num(eps) + ", relative gap " + num(rel)};
}

// ---------------------------------------------------------------------- 7

Outcome tracking_accuracy() {
  const auto blobs = fixtures::blob_field(300, 300, 28, 17);
  const auto I0 = fixtures::render_blobs(300, 300, blobs);
  const auto I1 = fixtures::render_blobs(300, 300, blobs, 2.3, -1.1);
  DetectorOptions opt;
  opt.max_features = 100;
  const auto fmap = detect_features(I0, opt);
  KltConfig cfg;
  cfg.fb_threshold = 1.0;
  const auto r = klt_track_pair(I0, I1, fmap.points, cfg);
  Index good = 0;
  for (Index i = 0; i < fmap.size(); ++i)
    good += r.converged(i) && std::abs(r.displacements(i, 0) - 2.3) <= 0.1 && std::abs(r.displacements(i, 1) + 1.1) <= 0.1;
  const double share = static_cast<double>(good) / 100.0;

  // Occlusion: the second blob vanishes after frame 1.
  const std::vector<fixtures::Blob> both{{30, 32, 3.0, 0.8}, {70, 32, 3.0, 0.8}}, one{{30, 32, 3.0, 0.8}};
  std::vector<Image> frames{fixtures::render_blobs(100, 64, both), fixtures::render_blobs(100, 64, both),
                            fixtures::render_blobs(100, 64, one)};
  FeatureMap occl;
  occl.points.resize(2, 2);
  occl.points << 30, 32, 70, 32;
  occl.responses = Eigen::VectorXd::Ones(2);
  const auto res = track_sequence(MemoryFrames(frames), occl, cfg);
  const bool drift = res.at(2, 1) == TrackStatus::Drift && res.at(2, 0) == TrackStatus::Tracked;
  return {fmap.size() == 100 && share >= 0.95 && drift,
          std::to_string(good) + "/" + std::to_string(fmap.size()) + " corners within 0.1 px, occlusion " +
              (drift ? "DRIFT" : "not flagged")};
}

// ---------------------------------------------------------------------- 8

Outcome nonlinearity_detection() {
  const auto x = uniform(2000, 8, -1.0, 1.0);
  const Eigen::VectorXd y = x.array().square();
  RowMatrixd Y(2000, 1);
  Y.col(0) = y;
  const double r = pearson_channels(x, Y).values(0, 0);
  const double dcor = distance_correlation(x, y).value;
  const auto perm = hsic_permutation_test(x, y, 200, 1);
  return {std::abs(r) < 0.1 && dcor > 0.4 && perm.statistic > perm.threshold,
          "Pearson " + num(r) + ", dCor " + num(dcor) + ", HSIC " + num(perm.statistic) + " vs null q95 " +
              num(perm.threshold)};
}

// ---------------------------------------------------------------------- 9

Outcome redundancy_oracle() {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n;
  Eigen::VectorXd a(1000), b(1000);
  for (Index i = 0; i < 1000; ++i) {
    a(i) = n(rng);
    b(i) = n(rng);
  }
  a.array() -= a.mean();
  a.normalize();
  b.array() -= b.mean();
  b -= b.dot(a) * a;
  b.normalize();
  RowMatrixd X(1000, 2);
  X.col(0) = a;
  X.col(1) = 0.6 * a + 0.8 * b;
  const double oracle = std::exp(-(0.8 * std::log(0.8) + 0.2 * std::log(0.2)));
  const double r_eff = redundancy(X).effective_rank;
  X.col(1) = 3.0 * a;
  const double rank_one = redundancy(X).effective_rank;
  return {std::abs(r_eff - oracle) <= 1e-6 && rank_one == 1.0,
          "r_eff " + num(r_eff) + " vs oracle " + num(oracle) + ", rank-1 " + num(rank_one)};
}

// --------------------------------------------------------------------- 10

// The one chain both provenances go through.
std::pair<std::set<std::string>, std::set<std::string>> downstream_chain(const TrajectoryRecord& record,
                                                                         const Eigen::VectorXd& u) {
  if (!validate_record(record).empty()) throw ValidationError("record failed validation");
  const auto features = extract_features(record, NodeDisplacements{});
  TrainerContext ctx{features, {0.2, 1.2, 0.5, 1e-5, true}, {}};
  MemoryParams mp;
  mp.tau_s = 5;
  std::set<std::string> metrics, params;
  for (const auto& score : {narma_benchmark(ctx, normalize_narma_input(u), 2), memory_benchmark(ctx, u, mp)}) {
    const auto rec = score.to_record();
    for (const auto& [k, v] : rec.scalars) {
      if (!std::isfinite(v)) throw ValidationError("metric " + k + " is not finite");
      metrics.insert(rec.group + "/" + k);
    }
    for (const auto& [k, v] : rec.parameters) params.insert(rec.group + "/" + k);
  }
  return {metrics, params};
}

Outcome pipeline_interchangeability() {
  const Index T = 200;
  fixtures::LatticeOptions o;
  o.duration = 1.99;
  const auto bundle = fixtures::actuated_lattice(o);
  const auto simulated = simulate(bundle);
  const Index nodes = simulated.node_count;

  // 4×4 blobs, each pushed by the same input at a per-blob lag.
  const auto u = uniform(T, 10, -1.0, 1.0);
  std::vector<fixtures::Blob> base;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) base.push_back({40.0 + 40 * j, 40.0 + 40 * i, 3.0, 0.8});
  std::vector<Image> frames;
  for (Index t = 0; t < T; ++t) {
    auto blobs = base;
    for (std::size_t k = 0; k < blobs.size(); ++k) {
      const Index lag = static_cast<Index>(k % 4);
      blobs[k].x += 1.5 * (t >= lag ? u(t - lag) : 0.0);
      blobs[k].y += 0.5 * u(t);
    }
    frames.push_back(fixtures::render_blobs(200, 200, blobs));
  }
  VisionConfig vc;
  vc.detect.max_features = nodes;
  vc.frame_dt = simulated.dt;
  const auto tracked = run_vision(MemoryFrames(frames), vc).record;
  if (tracked.node_count != nodes || tracked.sample_count() != simulated.sample_count())
    return {false, "shape mismatch: tracked " + std::to_string(tracked.node_count) + "x" +
                       std::to_string(tracked.sample_count()) + " vs simulated " + std::to_string(nodes) + "x" +
                       std::to_string(simulated.sample_count())};

  const auto a = downstream_chain(simulated, simulated.actuation_signal(0));
  const auto b = downstream_chain(tracked, u);
  const bool same = a == b;
  return {same, std::to_string(a.first.size()) + " metrics, " + std::to_string(a.second.size()) +
                    " parameters; schemas " + (same ? "identical" : "differ")};
}

// --------------------------------------------------------------------- 11

Outcome narma_end_to_end() {
  const auto record = simulate(fixtures::actuated_lattice());
  const Eigen::VectorXd u = normalize_narma_input(record.actuation_signal(0));
  TrainerContext ctx{extract_features(record, NodeDisplacements{}), {3.0, 18.0, 9.0, 1e-5, true}, {}};
  const double lattice = narma_benchmark(ctx, u, 2).metrics.at("nrmse_test");

  FeatureMatrix oracle;
  oracle.values = narma_target(u, 2);
  oracle.labels = {"y"};
  oracle.dt = record.dt;
  TrainerContext octx{oracle, {3.0, 18.0, 9.0, 0.0, true}, {}};
  const double exact = narma_benchmark(octx, u, 2).metrics.at("nrmse_test");
  return {record.node_count >= 8 && lattice < 1.0 && exact < 1e-6,
          std::to_string(record.node_count) + "-node lattice NRMSE " + num(lattice) + ", oracle state " + num(exact)};
}

// --------------------------------------------------------------------- 12

Outcome schema_round_trip() {
  fixtures::Randomizer rnd(12);
  const auto path = fs::temp_directory_path() / "prc_acceptance_roundtrip.h5";
  int mismatches = 0;
  for (int i = 0; i < 100; ++i) {
    const auto traj = rnd.trajectory();
    const auto readout = rnd.readout();
    const auto cap = rnd.capacity();
    const auto metrics = rnd.metrics();
    const auto geometry = rnd.geometry(6, 8, 3);
    const auto signals = rnd.signals(2, 25);
    const auto config = rnd.config();
    {
      h5::File f(path, h5::Mode::Truncate);
      write_trajectory(f, traj, "/trajectory");
      write_readout(f, readout, "/readout");
      write_capacity(f, cap, "/capacity");
      write_metrics(f, metrics, "/metrics");
      write_geometry(f, geometry, "/geometry");
      write_signals(f, signals, "/signals");
    }
    h5::File f(path, h5::Mode::Read);
    mismatches += !(read_trajectory(f, "/trajectory") == traj);
    mismatches += !(read_readout(f, "/readout") == readout);
    mismatches += !(read_capacity(f, "/capacity") == cap);
    mismatches += !(read_metrics(f, "/metrics") == metrics);
    mismatches += !(read_geometry(f, "/geometry") == geometry);
    mismatches += !(read_signals(f, "/signals") == signals);
    mismatches += !(config_from_json(to_json(config)) == config);
  }
  fs::remove(path);
  return {mismatches == 0, "700 records, " + std::to_string(mismatches) + " mismatches"};
}

}  // namespace

int main() {
  criterion(1, "integrator order", 5, integrator_order);
  criterion(2, "constraint preservation", 30, constraint_preservation);
  criterion(3, "gradient correctness", 10, gradient_correctness);
  criterion(4, "energy sanity", 30, energy_sanity);
  criterion(5, "delay-line MC oracle", 60, delay_line_capacity);
  criterion(6, "epsilon rule", 1, epsilon_rule);
  criterion(7, "tracking accuracy", 20, tracking_accuracy);
  criterion(8, "nonlinearity detection", 30, nonlinearity_detection);
  criterion(9, "redundancy oracle", 1, redundancy_oracle);
  criterion(10, "pipeline interchangeability", 30, pipeline_interchangeability);
  criterion(11, "end-to-end NARMA", 60, narma_end_to_end);
  criterion(12, "schema round-trip", 10, schema_round_trip);
  std::printf("%d of 12 criteria failed\n", failures);
  return failures;
}
