#pragma once

// Randomized record generators shared by unit and acceptance tests.

#include <cmath>
#include <numbers>
#include <random>

#include "prc/schema/records.hpp"

namespace prc::fixtures {

class Randomizer {
 public:
  explicit Randomizer(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo = -1.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  Index integer(Index lo, Index hi) { return std::uniform_int_distribution<Index>(lo, hi)(rng_); }
  bool coin() { return integer(0, 1) == 1; }
  std::mt19937_64& engine() { return rng_; }

  // Normal draws mixed with awkward values: signed zeros, subnormals, huge
  // magnitudes. Bit-identical round trips must survive all of them.
  double awkward() {
    switch (integer(0, 9)) {
      case 0: return -0.0;
      case 1: return std::numeric_limits<double>::denorm_min() * static_cast<double>(integer(1, 1000));
      case 2: return uniform(-1e300, 1e300);
      default: return std::normal_distribution<double>(0.0, 1.0)(rng_);
    }
  }

  RowMatrixd matrix(Index rows, Index cols) {
    RowMatrixd m(rows, cols);
    for (Index i = 0; i < m.size(); ++i) m.data()[i] = awkward();
    return m;
  }
  Eigen::VectorXd vector(Index n) {
    Eigen::VectorXd v(n);
    for (Index i = 0; i < n; ++i) v(i) = awkward();
    return v;
  }
  std::string name(int length = 6) {
    std::string s;
    for (int i = 0; i < length; ++i) s += static_cast<char>('a' + integer(0, 25));
    return s;
  }

  Geometry geometry(Index nodes, Index bars, Index hinges) {
    Geometry g;
    for (Index n = 0; n < nodes; ++n) g.add_node({uniform(), uniform(), uniform()}, coin() ? uniform(0.1, 2.0) : kPinnedMass);
    for (Index b = 0; b < bars; ++b) {
      const Index i = integer(0, nodes - 1);
      const Index j = (i + integer(1, nodes - 1)) % nodes;
      g.add_bar(i, j, uniform(0.1, 100.0), uniform(0.1, 2.0), coin() ? kInheritDamping : uniform(0.0, 1.0), coin());
    }
    for (Index h = 0; h < hinges; ++h)
      g.add_hinge({integer(0, nodes - 1), integer(0, nodes - 1), integer(0, nodes - 1), integer(0, nodes - 1)},
                  uniform(0.0, 1.0), uniform(0.1, 6.0), coin());
    return g;
  }

  SignalSet signals(int count, Index length) {
    SignalSet s;
    s.dt = uniform(1e-4, 1e-2);
    for (int k = 0; k < count; ++k) s.add(name(), matrix(length, integer(1, 3)));
    return s;
  }

  SimConfig config() {
    SimConfig c;
    c.dt = uniform(1e-4, 1e-3);
    c.save_interval = c.dt * static_cast<double>(integer(1, 10));
    c.duration = c.save_interval * static_cast<double>(integer(1, 100));
    c.gravity = {uniform(), uniform(), uniform(-10.0, 0.0)};
    c.damping = uniform(0.0, 1.0);
    c.global_damping = uniform(0.0, 0.5);
    c.pbd_tolerance = uniform(1e-9, 1e-5);
    c.pbd_max_iterations = static_cast<int>(integer(1, 500));
    c.use_scaler = coin();
    c.deterministic = coin();
    const Index actuators = integer(0, 3);
    for (Index a = 0; a < actuators; ++a) {
      Actuator act;
      act.node = integer(0, 20);
      act.signal = name();
      act.mode = coin() ? ActuationMode::Position : ActuationMode::Force;
      act.dofs = {coin(), coin(), true};
      c.actuators.push_back(act);
    }
    return c;
  }

  TrajectoryRecord trajectory() {
    const Index T = integer(1, 40), N = integer(1, 12), M = integer(0, 20), K = integer(0, 6);
    TrajectoryRecord r;
    r.node_count = N;
    r.positions = matrix(T, 3 * N);
    r.velocities = matrix(T, 3 * N);
    r.bar_strains = matrix(T, M);
    r.hinge_angles = matrix(T, K);
    r.energies = matrix(T, 3);
    r.dt = uniform(1e-4, 1.0);
    r.provenance = coin() ? Provenance::Simulated : Provenance::Tracked;
    r.partial = coin();
    if (coin()) r.geometry = geometry(N + 2, M, K);
    if (coin()) r.signals = signals(static_cast<int>(integer(0, 3)), integer(1, 50));
    if (coin()) r.config = config();
    return r;
  }

  ReadoutRecord readout() {
    const Index T = integer(1, 60), D = integer(1, 10), O = integer(1, 3);
    ReadoutRecord r;
    r.task = name();
    r.bias = coin();
    r.weights = matrix(D + (r.bias ? 1 : 0), O);
    r.ridge = uniform(0.0, 1.0);
    for (Index d = 0; d < D; ++d) r.feature_labels.push_back(name(integer(1, 12)));
    r.predictions = matrix(T, O);
    r.targets = matrix(T, O);
    r.dt = uniform(1e-3, 1.0);
    r.washout_end = integer(0, 100);
    r.train_end = r.washout_end + integer(0, 100);
    r.test_end = r.train_end + integer(0, 100);
    r.nmse_train = vector(O);
    r.nmse_test = vector(O);
    r.nrmse_train = vector(O);
    r.nrmse_test = vector(O);
    return r;
  }

  CapacityTable capacity() {
    const Index R = integer(0, 30);
    CapacityTable t;
    t.tau_s = integer(1, 8);
    t.n_s = integer(1, 3);
    t.k_delay = integer(1, 3);
    t.exponents.resize(R, t.tau_s + 1);
    for (Index i = 0; i < t.exponents.size(); ++i) t.exponents.data()[i] = integer(0, 3);
    t.degree = vector(R);
    t.c_raw = vector(R);
    t.c = vector(R);
    t.mc_lin = awkward();
    t.mc_nonlin = awkward();
    t.ipc_tot = awkward();
    t.epsilon = awkward();
    t.ridge = awkward();
    return t;
  }

  MetricsRecord metrics() {
    MetricsRecord m;
    m.group = name();
    for (Index k = integer(0, 5); k > 0; --k) m.scalars[name()] = awkward();
    for (Index k = integer(0, 5); k > 0; --k) m.parameters[name()] = awkward();
    for (Index k = integer(0, 3); k > 0; --k) m.notes[name()] = name(integer(0, 20));
    const Index D = integer(0, 25);
    m.mc_delays = vector(D);
    m.mc_profile = vector(D);
    for (Index k = integer(0, 3); k > 0; --k) m.arrays[name()] = matrix(integer(0, 10), integer(1, 4));
    if (coin()) m.capacity = capacity();
    return m;
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace prc::fixtures
