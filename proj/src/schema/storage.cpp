#include "prc/schema/storage.hpp"

#include "prc/error.hpp"

namespace prc {
namespace {

std::string join(const std::string& root, const std::string& name) {
  if (root.empty() || root == "/") return "/" + name;
  return root + "/" + name;
}

void write_bools(h5::File& f, const std::string& path, const std::vector<std::uint8_t>& v) {
  f.write(path, v.data(), {static_cast<hsize_t>(v.size())});
}

std::vector<std::uint8_t> read_bools(const h5::File& f, const std::string& path) { return f.read_bool(path).data; }

// Reads a [rows, cols] double dataset, tolerating an empty dataset written
// with any rank so zero-element channels load with the expected width.
RowMatrixd read_2d(const h5::File& f, const std::string& path, Index expected_cols = -1) {
  auto m = f.read_matrix(path);
  if (expected_cols >= 0 && m.cols() != expected_cols)
    throw SchemaError(path, "schema violation: '" + path + "' has " + std::to_string(m.cols()) + " columns, expected " +
                                std::to_string(expected_cols));
  return m;
}

void write_string_list(h5::File& f, const std::string& object, const std::string& prefix,
                       const std::vector<std::string>& items) {
  f.set_attr(object, prefix + "_count", static_cast<std::int64_t>(items.size()));
  for (std::size_t i = 0; i < items.size(); ++i) f.set_attr(object, prefix + "_" + std::to_string(i), items[i]);
}

std::vector<std::string> read_string_list(const h5::File& f, const std::string& object, const std::string& prefix) {
  const auto n = f.attr_int(object, prefix + "_count");
  std::vector<std::string> items;
  for (std::int64_t i = 0; i < n; ++i) items.push_back(f.attr_string(object, prefix + "_" + std::to_string(i)));
  return items;
}

}  // namespace

// --- geometry -----------------------------------------------------------

void write_geometry(h5::File& f, const Geometry& g, const std::string& root) {
  const auto M = static_cast<std::size_t>(g.bar_count());
  const auto K = static_cast<std::size_t>(g.hinge_count());
  f.create_group(root);
  f.write(join(root, "nodes/positions"), g.positions.data(), {static_cast<hsize_t>(g.node_count()), 3});
  f.write_vector(join(root, "nodes/masses"), g.masses);

  RowMatrixi bar_idx(static_cast<Index>(M), 2);
  Eigen::VectorXd k(static_cast<Index>(M)), l0(static_cast<Index>(M)), zeta(static_cast<Index>(M));
  std::vector<std::uint8_t> bar_rigid(M);
  for (std::size_t b = 0; b < M; ++b) {
    const auto& bar = g.bars[b];
    const auto r = static_cast<Index>(b);
    bar_idx(r, 0) = bar.i;
    bar_idx(r, 1) = bar.j;
    k(r) = bar.stiffness;
    l0(r) = bar.rest_length;
    zeta(r) = bar.damping;
    bar_rigid[b] = bar.rigid;
  }
  f.write_matrix(join(root, "bars/indices"), bar_idx);
  f.write_vector(join(root, "bars/stiffness"), k);
  f.write_vector(join(root, "bars/rest_length"), l0);
  f.write_vector(join(root, "bars/damping"), zeta);
  write_bools(f, join(root, "bars/rigid"), bar_rigid);

  RowMatrixi hinge_idx(static_cast<Index>(K), 4);
  Eigen::VectorXd kh(static_cast<Index>(K)), theta0(static_cast<Index>(K));
  std::vector<std::uint8_t> hinge_rigid(K);
  for (std::size_t h = 0; h < K; ++h) {
    const auto& hinge = g.hinges[h];
    const auto r = static_cast<Index>(h);
    for (int c = 0; c < 4; ++c) hinge_idx(r, c) = hinge.nodes[static_cast<std::size_t>(c)];
    kh(r) = hinge.stiffness;
    theta0(r) = hinge.rest_angle;
    hinge_rigid[h] = hinge.rigid;
  }
  f.write_matrix(join(root, "hinges/indices"), hinge_idx);
  f.write_vector(join(root, "hinges/stiffness"), kh);
  f.write_vector(join(root, "hinges/rest_angle"), theta0);
  write_bools(f, join(root, "hinges/rigid"), hinge_rigid);
  f.set_attr(root, "schema_version", kSchemaVersion);
}

Geometry read_geometry(const h5::File& f, const std::string& root) {
  Geometry g;
  auto pos = f.read_double(join(root, "nodes/positions"));
  if (pos.dims.size() != 2 || pos.dims[1] != 3)
    throw SchemaError(join(root, "nodes/positions"), "schema violation: node positions must be [N, 3]");
  g.positions = Eigen::Map<const NodeMatrixd>(pos.data.data(), static_cast<Index>(pos.dims[0]), 3);
  g.masses = f.read_vector(join(root, "nodes/masses"));

  const auto bar_idx = f.read_int_matrix(join(root, "bars/indices"));
  const auto k = f.read_vector(join(root, "bars/stiffness"));
  const auto l0 = f.read_vector(join(root, "bars/rest_length"));
  const auto zeta = f.read_vector(join(root, "bars/damping"));
  const auto bar_rigid = read_bools(f, join(root, "bars/rigid"));
  const Index M = bar_idx.rows();
  if (k.size() != M || l0.size() != M || zeta.size() != M || static_cast<Index>(bar_rigid.size()) != M)
    throw SchemaError(join(root, "bars"), "schema violation: bar arrays have inconsistent lengths");
  for (Index b = 0; b < M; ++b)
    g.bars.push_back(Bar{bar_idx(b, 0), bar_idx(b, 1), k(b), l0(b), zeta(b), bar_rigid[static_cast<std::size_t>(b)] != 0});

  const auto hinge_idx = f.read_int_matrix(join(root, "hinges/indices"));
  const auto kh = f.read_vector(join(root, "hinges/stiffness"));
  const auto theta0 = f.read_vector(join(root, "hinges/rest_angle"));
  const auto hinge_rigid = read_bools(f, join(root, "hinges/rigid"));
  const Index K = hinge_idx.rows();
  if (kh.size() != K || theta0.size() != K || static_cast<Index>(hinge_rigid.size()) != K)
    throw SchemaError(join(root, "hinges"), "schema violation: hinge arrays have inconsistent lengths");
  for (Index h = 0; h < K; ++h) {
    Hinge hinge;
    for (int c = 0; c < 4; ++c) hinge.nodes[static_cast<std::size_t>(c)] = hinge_idx(h, c);
    hinge.stiffness = kh(h);
    hinge.rest_angle = theta0(h);
    hinge.rigid = hinge_rigid[static_cast<std::size_t>(h)] != 0;
    g.hinges.push_back(hinge);
  }
  return g;
}

// --- signals ------------------------------------------------------------

void write_signals(h5::File& f, const SignalSet& s, const std::string& root) {
  f.create_group(root);
  f.set_attr(root, "dt", s.dt);
  for (const auto& [name, values] : s.signals) {
    const auto path = join(root, name);
    f.write_matrix(path, values);
  }
}

SignalSet read_signals(const h5::File& f, const std::string& root) {
  SignalSet s;
  if (!f.exists(root)) throw SchemaError(root, "schema violation: missing group '" + root + "'");
  s.dt = f.attr_double(root, "dt");
  for (const auto& name : f.children(root)) {
    const auto path = join(root, name);
    const auto dims = f.dims(path);
    auto data = f.read_double(path);
    if (dims.size() == 1) {
      s.signals[name] = Eigen::Map<const Eigen::VectorXd>(data.data.data(), static_cast<Index>(dims[0]));
    } else if (dims.size() == 2) {
      s.signals[name] = f.read_matrix(path);
    } else {
      throw SchemaError(path, "schema violation: signal '" + name + "' must be [T_u] or [T_u, d]");
    }
  }
  return s;
}

// --- trajectory ---------------------------------------------------------

void write_trajectory(h5::File& f, const TrajectoryRecord& r, const std::string& root) {
  const Index T = r.sample_count();
  const Index N = r.node_count;
  if (r.positions.cols() != 3 * N || r.velocities.rows() != T || r.velocities.cols() != 3 * N ||
      r.bar_strains.rows() != T || r.hinge_angles.rows() != T || r.energies.rows() != T || r.energies.cols() != 3)
    throw SchemaError(root, "schema violation: trajectory channels disagree on T_s/N");
  const std::vector<hsize_t> nodal{static_cast<hsize_t>(T), static_cast<hsize_t>(N), 3};
  f.create_group(root);
  f.write(join(root, "positions"), r.positions.data(), nodal);
  f.write(join(root, "velocities"), r.velocities.data(), nodal);
  f.write_matrix(join(root, "bar_strains"), r.bar_strains);
  f.write_matrix(join(root, "hinge_angles"), r.hinge_angles);
  f.write_matrix(join(root, "energies"), r.energies);
  f.set_attr(root, "dt", r.dt);
  f.set_attr(root, "provenance", to_string(r.provenance));
  f.set_attr(root, "partial", static_cast<std::int64_t>(r.partial));
  f.set_attr(root, "schema_version", kSchemaVersion);
  if (r.geometry) write_geometry(f, *r.geometry, join(root, "geometry"));
  if (r.signals) write_signals(f, *r.signals, join(root, "signals"));
  if (r.config) f.set_attr(root, "config", to_json(*r.config));
}

TrajectoryRecord read_trajectory(const h5::File& f, const std::string& root) {
  TrajectoryRecord r;
  auto read_nodal = [&](const std::string& name) {
    const auto path = join(root, name);
    auto a = f.read_double(path);
    if (a.dims.size() != 3 || a.dims[2] != 3)
      throw SchemaError(name, "schema violation: '" + name + "' must be [T_s, N, 3]");
    RowMatrixd m(static_cast<Index>(a.dims[0]), static_cast<Index>(a.dims[1] * 3));
    std::copy(a.data.begin(), a.data.end(), m.data());
    return std::pair{m, static_cast<Index>(a.dims[1])};
  };
  auto [pos, n] = read_nodal("positions");
  r.positions = std::move(pos);
  r.node_count = n;
  r.velocities = read_nodal("velocities").first;
  r.bar_strains = read_2d(f, join(root, "bar_strains"));
  r.hinge_angles = read_2d(f, join(root, "hinge_angles"));
  r.energies = read_2d(f, join(root, "energies"), 3);
  const Index T = r.positions.rows();
  if (r.velocities.rows() != T || r.bar_strains.rows() != T || r.hinge_angles.rows() != T || r.energies.rows() != T)
    throw SchemaError(root, "schema violation: trajectory channels disagree on T_s");
  r.dt = f.attr_double(root, "dt");
  r.provenance = provenance_from_string(f.attr_string(root, "provenance"));
  r.partial = f.has_attr(root, "partial") && f.attr_int(root, "partial") != 0;
  if (f.exists(join(root, "geometry"))) r.geometry = read_geometry(f, join(root, "geometry"));
  if (f.exists(join(root, "signals"))) r.signals = read_signals(f, join(root, "signals"));
  if (f.has_attr(root, "config")) r.config = config_from_json(f.attr_string(root, "config"));
  return r;
}

// --- readout ------------------------------------------------------------

void write_readout(h5::File& f, const ReadoutRecord& r, const std::string& root) {
  f.remove(root);
  f.create_group(root);
  f.write_matrix(join(root, "weights"), r.weights);
  f.write_matrix(join(root, "predictions"), r.predictions);
  f.write_matrix(join(root, "targets"), r.targets);
  f.write_vector(join(root, "nmse_train"), r.nmse_train);
  f.write_vector(join(root, "nmse_test"), r.nmse_test);
  f.write_vector(join(root, "nrmse_train"), r.nrmse_train);
  f.write_vector(join(root, "nrmse_test"), r.nrmse_test);
  f.set_attr(root, "task", r.task);
  f.set_attr(root, "bias", static_cast<std::int64_t>(r.bias));
  f.set_attr(root, "ridge", r.ridge);
  f.set_attr(root, "dt", r.dt);
  f.set_attr(root, "washout_end", static_cast<std::int64_t>(r.washout_end));
  f.set_attr(root, "train_end", static_cast<std::int64_t>(r.train_end));
  f.set_attr(root, "test_end", static_cast<std::int64_t>(r.test_end));
  write_string_list(f, root, "feature_label", r.feature_labels);
}

ReadoutRecord read_readout(const h5::File& f, const std::string& root) {
  ReadoutRecord r;
  r.weights = read_2d(f, join(root, "weights"));
  r.predictions = read_2d(f, join(root, "predictions"));
  r.targets = read_2d(f, join(root, "targets"));
  r.nmse_train = f.read_vector(join(root, "nmse_train"));
  r.nmse_test = f.read_vector(join(root, "nmse_test"));
  r.nrmse_train = f.read_vector(join(root, "nrmse_train"));
  r.nrmse_test = f.read_vector(join(root, "nrmse_test"));
  r.task = f.attr_string(root, "task");
  r.bias = f.attr_int(root, "bias") != 0;
  r.ridge = f.attr_double(root, "ridge");
  r.dt = f.attr_double(root, "dt");
  r.washout_end = f.attr_int(root, "washout_end");
  r.train_end = f.attr_int(root, "train_end");
  r.test_end = f.attr_int(root, "test_end");
  r.feature_labels = read_string_list(f, root, "feature_label");
  return r;
}

// --- capacity / metrics ---------------------------------------------------

void write_capacity(h5::File& f, const CapacityTable& t, const std::string& root) {
  f.create_group(root);
  f.write_matrix(join(root, "exponents"), t.exponents);
  f.write_vector(join(root, "degree"), t.degree);
  f.write_vector(join(root, "c_raw"), t.c_raw);
  f.write_vector(join(root, "c"), t.c);
  f.set_attr(root, "mc_lin", t.mc_lin);
  f.set_attr(root, "mc_nonlin", t.mc_nonlin);
  f.set_attr(root, "ipc_tot", t.ipc_tot);
  f.set_attr(root, "tau_s", static_cast<std::int64_t>(t.tau_s));
  f.set_attr(root, "n_s", static_cast<std::int64_t>(t.n_s));
  f.set_attr(root, "k_delay", static_cast<std::int64_t>(t.k_delay));
  f.set_attr(root, "epsilon", t.epsilon);
  f.set_attr(root, "ridge", t.ridge);
}

CapacityTable read_capacity(const h5::File& f, const std::string& root) {
  CapacityTable t;
  t.exponents = f.read_int_matrix(join(root, "exponents"));
  t.degree = f.read_vector(join(root, "degree"));
  t.c_raw = f.read_vector(join(root, "c_raw"));
  t.c = f.read_vector(join(root, "c"));
  t.mc_lin = f.attr_double(root, "mc_lin");
  t.mc_nonlin = f.attr_double(root, "mc_nonlin");
  t.ipc_tot = f.attr_double(root, "ipc_tot");
  t.tau_s = f.attr_int(root, "tau_s");
  t.n_s = f.attr_int(root, "n_s");
  t.k_delay = f.attr_int(root, "k_delay");
  t.epsilon = f.attr_double(root, "epsilon");
  t.ridge = f.attr_double(root, "ridge");
  return t;
}

void write_metrics(h5::File& f, const MetricsRecord& r, const std::string& root) {
  f.remove(root);
  f.create_group(join(root, "scalars"));
  f.create_group(join(root, "parameters"));
  f.create_group(join(root, "notes"));
  f.set_attr(root, "group", r.group);
  for (const auto& [k, v] : r.scalars) f.set_attr(join(root, "scalars"), k, v);
  for (const auto& [k, v] : r.parameters) f.set_attr(join(root, "parameters"), k, v);
  for (const auto& [k, v] : r.notes) f.set_attr(join(root, "notes"), k, v);
  f.write_vector(join(root, "mc_profile/delay"), r.mc_delays);
  f.write_vector(join(root, "mc_profile/capacity"), r.mc_profile);
  f.create_group(join(root, "arrays"));
  for (const auto& [k, v] : r.arrays) f.write_matrix(join(root, "arrays/" + k), v);
  if (r.capacity) write_capacity(f, *r.capacity, join(root, "capacity"));
}

MetricsRecord read_metrics(const h5::File& f, const std::string& root) {
  MetricsRecord r;
  if (!f.exists(root)) throw SchemaError(root, "schema violation: missing metrics group '" + root + "'");
  r.group = f.attr_string(root, "group");
  for (const auto& k : f.attr_names(join(root, "scalars"))) r.scalars[k] = f.attr_double(join(root, "scalars"), k);
  for (const auto& k : f.attr_names(join(root, "parameters")))
    r.parameters[k] = f.attr_double(join(root, "parameters"), k);
  for (const auto& k : f.attr_names(join(root, "notes"))) r.notes[k] = f.attr_string(join(root, "notes"), k);
  r.mc_delays = f.read_vector(join(root, "mc_profile/delay"));
  r.mc_profile = f.read_vector(join(root, "mc_profile/capacity"));
  for (const auto& k : f.children(join(root, "arrays"))) r.arrays[k] = f.read_matrix(join(root, "arrays/" + k));
  if (f.exists(join(root, "capacity"))) r.capacity = read_capacity(f, join(root, "capacity"));
  return r;
}

// --- whole files ----------------------------------------------------------

void save_geometry(const Geometry& geometry, const std::filesystem::path& path) {
  h5::File f(path, h5::Mode::Truncate);
  write_geometry(f, geometry);
}

Geometry load_geometry(const std::filesystem::path& path) {
  h5::File f(path, h5::Mode::Read);
  return read_geometry(f);
}

void save_signals(const SignalSet& signals, const std::filesystem::path& path) {
  h5::File f(path, h5::Mode::Truncate);
  write_signals(f, signals);
}

SignalSet load_signals(const std::filesystem::path& path) {
  h5::File f(path, h5::Mode::Read);
  return read_signals(f);
}

void store_record(const TrajectoryRecord& record, const std::filesystem::path& path) {
  h5::File f(path, h5::Mode::Truncate);
  write_trajectory(f, record);
}

TrajectoryRecord load_trajectory(const std::filesystem::path& path) {
  h5::File f(path, h5::Mode::Read);
  return read_trajectory(f);
}

void store_readout(const ReadoutRecord& record, const std::filesystem::path& path) {
  h5::File f(path, h5::Mode::ReadWrite);
  write_readout(f, record, "/" + record.task);
}

ReadoutRecord load_readout(const std::filesystem::path& path, const std::string& task) {
  h5::File f(path, h5::Mode::Read);
  return read_readout(f, "/" + task);
}

}  // namespace prc
