#include "prc/cli/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <variant>

#include <CLI11.hpp>
#include <json.hpp>

#include "prc/analysis/benchmarks.hpp"
#include "prc/analysis/linear.hpp"
#include "prc/analysis/metrics_store.hpp"
#include "prc/analysis/narma.hpp"
#include "prc/barhinge/engine.hpp"
#include "prc/schema/storage.hpp"
#include "prc/schema/validate.hpp"
#include "prc/vision/bundle.hpp"

namespace prc::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Round-trip precision for exported numbers.
std::string exact(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void emit_error(std::ostream& err, const std::string& kind, const std::string& message, int code,
                json extra = json::object()) {
  json line = {{"error", kind}, {"message", message}, {"exit", code}};
  line.update(extra);
  err << line.dump() << '\n';
}

json error_details(const Error& e) {
  json extra = json::object();
  if (const auto* s = dynamic_cast<const SchemaError*>(&e)) extra["path"] = s->path();
  if (const auto* d = dynamic_cast<const DivergenceError*>(&e)) extra["time"] = d->time();
  if (const auto* c = dynamic_cast<const SingularConfiguration*>(&e)) extra["element"] = c->element();
  return extra;
}

void refuse_existing(const fs::path& path, bool overwrite) {
  if (fs::exists(path) && !overwrite)
    throw RefusalError("'" + path.string() + "' already exists; pass --overwrite to replace it");
}

std::unique_ptr<Backend> selected_backend() { return make_backend(backend_name()); }

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string dir;
  double dt = 0.0, save_interval = 0.0;
  bool overwrite = false, deterministic = false;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
  const auto backend = selected_backend();
  Bundle bundle = load_bundle(a.dir);
  if (a.dt > 0) bundle.config.dt = a.dt;
  if (a.save_interval > 0) bundle.config.save_interval = a.save_interval;
  if (a.deterministic) bundle.config.deterministic = true;

  const fs::path target = output_dir(a.dir) / "simulation.h5";
  refuse_existing(target, a.overwrite);
  const auto report = validate_bundle(bundle.geometry, bundle.signals, bundle.config);
  if (!report.ok()) {
    out << report.summary() << '\n';
    throw ValidationError(report.summary());
  }

  const auto result = run_simulation(bundle, *backend);
  fs::create_directories(target.parent_path());
  store_record(result.record, target);
  if (result.diverged) {
    out << "simulation diverged at t = " << fmt(result.failure_time) << "; partial record written to "
        << target.string() << '\n';
    emit_error(err, "divergence", result.failure, kNumericalFailure,
               {{"time", result.failure_time}, {"partial_output", target.string()}});
    return kNumericalFailure;
  }
  const auto& r = result.record;
  out << "simulated " << r.node_count << " nodes, " << r.sample_count() << " samples at dt = " << fmt(r.dt)
      << " (backend " << backend->name() << ")\n";
  if (result.pbd_unconverged_steps > 0)
    out << "warning: " << result.pbd_unconverged_steps << " steps left rigid residuals up to "
        << fmt(result.worst_pbd_residual) << '\n';
  out << "wrote " << target.string() << '\n';
  return kOk;
}

// ------------------------------------------------------------------- track

struct TrackArgs {
  std::string frames, params, out_path;
  double fb_threshold = -1;
  int window = -1, levels = -1;
  bool overwrite = false;
};

VisionConfig vision_config_from_json(const json& j) {
  VisionConfig c;
  for (const auto& [key, value] : j.items()) {
    if (key == "window" || key == "win") {
      c.klt.window = value.get<int>();
    } else if (key == "levels" || key == "max_level") {
      c.klt.max_level = value.get<int>();
    } else if (key == "fb_threshold") {
      c.klt.fb_threshold = value.get<double>();
    } else if (key == "max_iterations") {
      c.klt.max_iterations = value.get<int>();
    } else if (key == "epsilon") {
      c.klt.epsilon = value.get<double>();
    } else if (key == "max_residual") {
      c.klt.max_residual = value.get<double>();
    } else if (key == "detector") {
      c.detector = value.get<std::string>();
    } else if (key == "max_features") {
      c.detect.max_features = value.get<Index>();
    } else if (key == "min_response") {
      c.detect.min_response = value.get<double>();
    } else if (key == "frame_dt") {
      c.frame_dt = value.get<double>();
    } else if (key == "min_track_ratio") {
      c.post.min_track_ratio = value.get<double>();
    } else if (key == "max_gap") {
      c.post.max_gap = value.get<Index>();
    } else if (key == "smooth_window") {
      c.post.smooth_window = value.get<Index>();
    } else if (key == "calibration") {
      if (value.value("mode", "normalized") == "pinhole") {
        Eigen::Matrix3d K;
        for (int r = 0; r < 3; ++r)
          for (int col = 0; col < 3; ++col) K(r, col) = value.at("intrinsics").at(r).at(col).get<double>();
        std::array<double, 5> d{};
        if (value.contains("distortion"))
          for (std::size_t i = 0; i < 5; ++i) d[i] = value["distortion"].at(i).get<double>();
        c.calibration = Calibration::pinhole(K, d, value.value("scale", 1.0), value.value("units", "camera"));
      }
    } else {
      throw ParameterError("unknown tracking parameter '" + key + "'");
    }
  }
  return c;
}

int cmd_track(const TrackArgs& a, std::ostream& out) {
  VisionConfig cfg;
  if (!a.params.empty()) {
    std::ifstream in(a.params);
    if (!in) throw IoError("cannot read '" + a.params + "'");
    try {
      cfg = vision_config_from_json(json::parse(in));
    } catch (const json::exception& e) {
      throw ParameterError("bad parameter file '" + a.params + "': " + e.what());
    }
  }
  if (a.fb_threshold >= 0) cfg.klt.fb_threshold = a.fb_threshold;
  if (a.window > 0) cfg.klt.window = a.window;
  if (a.levels >= 0) cfg.klt.max_level = a.levels;
  cfg.klt.check();

  const DirectoryFrames frames(a.frames);
  if (frames.size() < 2)
    throw IoError("frame directory '" + a.frames + "' holds " + std::to_string(frames.size()) +
                  " readable .pgm frames; at least 2 are needed");
  refuse_existing(a.out_path, a.overwrite);

  const auto result = run_vision(frames, cfg);
  if (fs::path(a.out_path).has_parent_path()) fs::create_directories(fs::path(a.out_path).parent_path());
  save_vision_bundle(result, a.out_path);
  {
    h5::File f(a.out_path, h5::Mode::ReadWrite);
    f.create_group("/parameters");
    f.set_attr("/parameters", "window", static_cast<std::int64_t>(cfg.klt.window));
    f.set_attr("/parameters", "levels", static_cast<std::int64_t>(cfg.klt.max_level));
    f.set_attr("/parameters", "fb_threshold", cfg.klt.fb_threshold);
    f.set_attr("/parameters", "max_iterations", static_cast<std::int64_t>(cfg.klt.max_iterations));
    f.set_attr("/parameters", "epsilon", cfg.klt.epsilon);
    f.set_attr("/parameters", "detector", cfg.detector);
    f.set_attr("/parameters", "max_features", static_cast<std::int64_t>(cfg.detect.max_features));
    f.set_attr("/parameters", "frame_dt", cfg.frame_dt);
  }

  // Status tallies over every tracked frame (frame 0 is the reference).
  const auto& tr = result.tracking;
  std::map<std::string, Index> tally;
  for (Index t = 1; t < tr.frames(); ++t)
    for (Index f = 0; f < tr.features(); ++f) {
      switch (tr.at(t, f)) {
        case TrackStatus::Tracked: ++tally["TRACKED"]; break;
        case TrackStatus::Lost: ++tally["LOST"]; break;
        case TrackStatus::OutOfBounds: ++tally["OOB"]; break;
        case TrackStatus::Drift: ++tally["DRIFT"]; break;
        case TrackStatus::Interpolated: ++tally["INTERPOLATED"]; break;
        case TrackStatus::Reference: break;
      }
    }
  out << "tracked " << tr.features() << " features over " << tr.frames() << " frames (window " << cfg.klt.window
      << ", levels " << cfg.klt.max_level << ", fb_threshold " << fmt(cfg.klt.fb_threshold) << ")\n";
  const Index total = (tr.frames() - 1) * tr.features();
  if (total > 0 && tally["TRACKED"] == total) {
    out << "status: all TRACKED\n";
  } else {
    out << "status:";
    for (const auto& [name, n] : tally) out << ' ' << name << '=' << n;
    out << '\n';
  }
  out << "kept " << result.processed.features() << " trajectories; wrote " << a.out_path << '\n';
  return kOk;
}

// --------------------------------------------------------- train and bench

struct ReadoutArgs {
  std::string dir, record, features = "displacements", signal;
  Index column = 0;
  double washout = -1, train = -1, test = -1, ridge = 1e-5;
  bool overwrite = false;
};

TrajectoryRecord load_source(const ReadoutArgs& a) {
  const fs::path path = a.record.empty() ? output_dir(a.dir) / "simulation.h5" : fs::path(a.record);
  if (!fs::exists(path))
    throw IoError("no record at '" + path.string() + "'; run `simulate` first or pass --record");
  auto record = load_trajectory(path);
  if (auto issues = validate_record(record); !issues.empty())
    throw ValidationError(issues.front().location + ": " + issues.front().message);
  return record;
}

// Named signal resampled at the record's sample times, from the record's own
// signals or the directory's signals.h5.
Eigen::VectorXd named_signal(const TrajectoryRecord& record, const std::string& dir, const std::string& name,
                             Index column) {
  SignalSet signals;
  if (record.signals && record.signals->contains(name)) {
    signals = *record.signals;
  } else if (fs::exists(fs::path(dir) / "signals.h5")) {
    signals = load_signals(fs::path(dir) / "signals.h5");
  } else {
    throw ParameterError("signal '" + name + "' not found: the record has no such signal and " + dir +
                         "/signals.h5 is missing");
  }
  if (!signals.contains(name)) {
    std::string names;
    for (const auto& [n, v] : signals.signals) names += (names.empty() ? "" : ", ") + n;
    throw ParameterError("signal '" + name + "' not found (available: " + names + ")");
  }
  if (column < 0 || column >= signals.at(name).cols())
    throw ParameterError("signal '" + name + "' has no column " + std::to_string(column));
  const Index usable = std::min<Index>(record.sample_count(), stable_floor(signals.span(name) / record.dt) + 1);
  return signals.resample(name, column, record.dt, usable);
}

Eigen::VectorXd input_signal(const TrajectoryRecord& record, const ReadoutArgs& a) {
  if (!a.signal.empty()) return named_signal(record, a.dir, a.signal, a.column);
  if (record.signals && record.config && !record.config->actuators.empty()) return record.actuation_signal(0);
  throw ParameterError("the record carries no actuation signal; name one with --signal");
}

// Explicit windows win; otherwise 10% washout, 60% train, the rest test.
TrainerConfig windows(const ReadoutArgs& a, Index samples, double dt) {
  TrainerConfig c;
  c.ridge = a.ridge;
  const Index w = stable_floor(0.1 * static_cast<double>(samples));
  const Index tr = stable_floor(0.6 * static_cast<double>(samples));
  c.washout = a.washout >= 0 ? a.washout : static_cast<double>(w) * dt;
  c.train_duration = a.train >= 0 ? a.train : static_cast<double>(tr) * dt;
  c.test_duration = a.test >= 0 ? a.test : static_cast<double>(samples - w - tr) * dt;
  c.check();
  return c;
}

// Features and signal cut to their common length.
FeatureMatrix aligned_features(const TrajectoryRecord& record, const std::string& spec, Eigen::VectorXd& signal) {
  auto features = extract_features(record, *parse_extractor(spec));
  const Index T = std::min(features.values.rows(), signal.size());
  features.values.conservativeResize(T, Eigen::NoChange);
  signal.conservativeResize(T);
  return features;
}

struct TrainArgs : ReadoutArgs {
  std::string target, task;
  Index delay = 0;
};

int cmd_train(const TrainArgs& a, std::ostream& out) {
  const auto record = load_source(a);
  Eigen::VectorXd target = named_signal(record, a.dir, a.target, a.column);
  if (a.delay > 0) {
    if (a.delay >= target.size()) throw ParameterError("--delay exceeds the record length");
    Eigen::VectorXd shifted = Eigen::VectorXd::Zero(target.size());
    shifted.tail(target.size() - a.delay) = target.head(target.size() - a.delay);
    target = shifted;
  }
  const auto features = aligned_features(record, a.features, target);
  const auto cfg = windows(a, features.values.rows(), features.dt);
  const std::string task = a.task.empty() ? "fit_" + a.target : a.task;

  const fs::path target_file = output_dir(a.dir) / "readout.h5";
  if (fs::exists(target_file) && h5::File(target_file, h5::Mode::Read).exists("/" + task) && !a.overwrite)
    throw RefusalError("readout '" + task + "' already exists in " + target_file.string() +
                       "; pass --overwrite to replace it");
  const auto result = train(features, target, cfg, task);
  fs::create_directories(target_file.parent_path());
  store_readout(result.readout, target_file);
  out << task << ": " << features.values.cols() << " features, NRMSE train = " << fmt(result.readout.nrmse_train(0))
      << ", test = " << fmt(result.readout.nrmse_test(0)) << '\n';
  out << "wrote " << target_file.string() << '\n';
  return kOk;
}

struct BenchArgs : ReadoutArgs {
  std::string benchmark, group;
  int order = 2;
  Index tau_s = 30, n_s = 2, k_delay = 1;
  double p = 1e-4;
  std::string neff = "singular";
  std::vector<std::string> params;
};

void ensure_builtin_custom() {
  if (has_benchmark("delay_recall")) return;
  // Linear recall of the input `delay` samples back.
  register_benchmark("delay_recall", [](TrainerContext& ctx, const Eigen::VectorXd& u, const BenchmarkParams& p) {
    const auto it = p.find("delay");
    const Index k = it == p.end() ? 1 : static_cast<Index>(it->second);
    if (k < 0 || k >= u.size()) throw ParameterError("delay out of range");
    Eigen::VectorXd target = Eigen::VectorXd::Zero(u.size());
    target.tail(u.size() - k) = u.head(u.size() - k);
    const auto r = ctx.train(target, "delay_recall_" + std::to_string(k));
    return CustomOutput{{{"nrmse_test", r.readout.nrmse_test(0)}, {"nmse_test", r.readout.nmse_test(0)}},
                        {{"delay", static_cast<double>(k)}}};
  });
}

std::string available_benchmarks() {
  std::string s = "narma, memory";
  for (const auto& n : registered_benchmarks()) s += ", custom:" + n;
  return s;
}

int cmd_bench(const BenchArgs& a, std::ostream& out) {
  ensure_builtin_custom();
  const bool custom = a.benchmark.rfind("custom:", 0) == 0;
  const std::string custom_name = custom ? a.benchmark.substr(7) : "";
  if (a.benchmark != "narma" && a.benchmark != "memory" && !(custom && has_benchmark(custom_name)))
    throw ParameterError("unknown benchmark '" + a.benchmark + "' (available: " + available_benchmarks() + ")");

  BenchmarkParams params;
  for (const auto& kv : a.params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ParameterError("--param expects key=value, got '" + kv + "'");
    try {
      params[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    } catch (const std::exception&) {
      throw ParameterError("--param value in '" + kv + "' is not a number");
    }
  }

  const auto record = load_source(a);
  Eigen::VectorXd u = input_signal(record, a);
  const auto features = aligned_features(record, a.features, u);
  TrainerContext ctx{features, windows(a, features.values.rows(), features.dt), {}};

  const fs::path dir = output_dir(a.dir);
  BenchmarkScore score;
  if (a.benchmark == "narma") {
    score = narma_benchmark(ctx, normalize_narma_input(u), a.order, a.group.empty() ? "narma_benchmark" : a.group);
  } else if (a.benchmark == "memory") {
    MemoryParams mp;
    mp.tau_s = a.tau_s;
    mp.n_s = a.n_s;
    mp.k_delay = a.k_delay;
    mp.ridge = a.ridge;
    mp.p = a.p;
    mp.neff = neff_method_from_string(a.neff);
    score = memory_benchmark(ctx, u, mp, a.group.empty() ? "memory_benchmark" : a.group);
  } else {
    score = run_custom_benchmark(custom_name, a.group.empty() ? custom_name : a.group, ctx, u, params);
  }
  if (fs::exists(dir / "metrics.h5") && MetricsStore(dir / "metrics.h5").contains(score.group) && !a.overwrite)
    throw RefusalError("metrics group '" + score.group + "' already exists; pass --overwrite to replace it");
  save_score(score, dir, a.overwrite);

  out << score.group << " (" << features.values.cols() << " features, " << features.source << ")\n";
  if (score.failed) {
    out << "benchmark failed: " << score.notes.at("error") << '\n';
  } else if (a.benchmark == "memory") {
    out << "MC_lin = " << fmt(score.metrics.at("mc_lin")) << "  MC_nonlin = " << fmt(score.metrics.at("mc_nonlin"))
        << "  IPC_tot = " << fmt(score.metrics.at("ipc_tot")) << "  (epsilon " << fmt(score.metrics.at("epsilon"))
        << ", N_eff " << fmt(score.metrics.at("n_eff")) << ")\n";
  } else {
    for (const auto& [k, v] : score.metrics) out << k << " = " << fmt(v) << '\n';
  }
  out << "wrote " << (dir / "metrics.h5").string() << '\n';
  return score.failed ? kNumericalFailure : kOk;
}

// ------------------------------------------------------- diagnose, inspect

int cmd_diagnose(const std::string& dir, std::ostream& out) {
  const Bundle b = load_bundle(dir);
  const auto report = validate_bundle(b.geometry, b.signals, b.config);
  out << "bundle: " << b.geometry.node_count() << " nodes, " << b.geometry.bars.size() << " bars, "
      << b.geometry.hinges.size() << " hinges, " << b.signals.signals.size() << " signals\n";
  if (report.ok()) {
    out << "bundle valid; " << report.sample_count << " samples will be saved\n";
  } else {
    for (const auto& e : report.entries) out << "  " << e.location << ": " << e.message << '\n';
  }
  bool record_ok = true;
  const fs::path sim = output_dir(dir) / "simulation.h5";
  if (fs::exists(sim)) {
    const auto issues = validate_record(load_trajectory(sim));
    record_ok = issues.empty();
    out << "output/simulation.h5: " << (record_ok ? "valid" : "invalid") << '\n';
    for (const auto& e : issues) out << "  " << e.location << ": " << e.message << '\n';
  }
  if (!report.ok()) throw ValidationError(report.summary());
  if (!record_ok) throw ValidationError("output/simulation.h5 violates the record invariants");
  return kOk;
}

void list_h5(const h5::File& f, const std::string& group, int depth, std::ostream& out) {
  const std::string indent(static_cast<std::size_t>(2 * depth), ' ');
  for (const auto& name : f.attr_names(group)) {
    out << indent << "@" << name << " = ";
    if (f.attr_is_string(group, name)) {
      std::string v = f.attr_string(group, name);
      if (v.size() > 60) v = v.substr(0, 57) + "...";
      out << '"' << v << "\"\n";
    } else {
      out << fmt(f.attr_double(group, name)) << '\n';
    }
  }
  for (const auto& child : f.children(group)) {
    const std::string path = (group == "/" ? "/" : group + "/") + child;
    std::vector<hsize_t> dims;
    bool dataset = true;
    try {
      dims = f.dims(path);
    } catch (const SchemaError&) {
      dataset = false;
    }
    if (dataset) {
      out << indent << child << " [";
      for (std::size_t i = 0; i < dims.size(); ++i) out << (i ? ", " : "") << dims[i];
      out << "]\n";
    } else {
      out << indent << child << "/\n";
      list_h5(f, path, depth + 1, out);
    }
  }
}

int cmd_inspect(const std::string& path, std::ostream& out) {
  const fs::path p(path);
  if (!fs::exists(p)) throw IoError("'" + path + "' not found");
  if (fs::is_directory(p)) {
    std::vector<fs::path> files;
    for (const auto& e : fs::recursive_directory_iterator(p))
      if (e.is_regular_file()) files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      out << fs::relative(f, p).string() << " (" << fs::file_size(f) << " bytes)\n";
      if (f.extension() == ".h5") list_h5(h5::File(f, h5::Mode::Read), "/", 1, out);
    }
    return kOk;
  }
  if (p.extension() == ".json") {
    std::ifstream in(p);
    out << json::parse(in).dump(2) << '\n';
    return kOk;
  }
  list_h5(h5::File(p, h5::Mode::Read), "/", 0, out);
  return kOk;
}

// ------------------------------------------------------------------ export

using Cell = std::variant<double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::pair<std::string, std::string> split_selector(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) return {s, ""};
  return {s.substr(0, colon), s.substr(colon + 1)};
}

// "lag^exponent" factors joined by '*', e.g. "0^1*3^2".
std::string signature(const CapacityTable& t, Index row) {
  std::string s;
  for (Index j = 0; j < t.exponents.cols(); ++j)
    if (t.exponents(row, j) > 0)
      s += (s.empty() ? "" : "*") + std::to_string(t.lag(j)) + "^" + std::to_string(t.exponents(row, j));
  return s;
}

Table export_table(const fs::path& path, const std::string& selector) {
  const auto [kind, arg] = split_selector(selector);
  Table t;
  if (kind == "capacity" || kind == "mc_profile") {
    const auto rec = MetricsStore(path).load(arg.empty() ? "memory_benchmark" : arg);
    if (kind == "mc_profile") {
      t.columns = {"delay", "capacity"};
      for (Index i = 0; i < rec.mc_delays.size(); ++i) t.rows.push_back({rec.mc_delays(i), rec.mc_profile(i)});
      return t;
    }
    if (!rec.capacity) throw ParameterError("metrics group '" + rec.group + "' holds no capacity table");
    const auto& c = *rec.capacity;
    t.columns = {"degree", "delay_signature", "C"};
    for (Index i = 0; i < c.rows(); ++i) t.rows.push_back({c.degree(i), signature(c, i), c.c(i)});
    return t;
  }
  if (kind == "readout") {
    if (arg.empty()) throw ParameterError("readout selector needs a task name, e.g. readout:narma2");
    const auto r = load_readout(path, arg);
    const Index O = r.targets.cols();
    t.columns = {"time"};
    for (Index o = 0; o < O; ++o) {
      const std::string suffix = O > 1 ? "_" + std::to_string(o) : "";
      t.columns.push_back("target" + suffix);
      t.columns.push_back("prediction" + suffix);
    }
    for (Index i = 0; i < r.targets.rows(); ++i) {
      std::vector<Cell> row{static_cast<double>(r.washout_end + i) * r.dt};
      for (Index o = 0; o < O; ++o) {
        row.emplace_back(r.targets(i, o));
        row.emplace_back(r.predictions(i, o));
      }
      t.rows.push_back(std::move(row));
    }
    return t;
  }
  if (kind == "positions" || kind == "ccf") {
    const auto rec = load_trajectory(path);
    if (kind == "positions") {
      t.columns = {"time"};
      static const char* axes = "xyz";
      for (Index n = 0; n < rec.node_count; ++n)
        for (int d = 0; d < 3; ++d) t.columns.push_back("n" + std::to_string(n) + "." + axes[d]);
      for (Index s = 0; s < rec.sample_count(); ++s) {
        std::vector<Cell> row{static_cast<double>(s) * rec.dt};
        for (Index j = 0; j < rec.positions.cols(); ++j) row.emplace_back(rec.positions(s, j));
        t.rows.push_back(std::move(row));
      }
      return t;
    }
    Eigen::VectorXd u = rec.actuation_signal(0);
    const auto features = aligned_features(rec, "displacements", u);
    const Index max_lag = arg.empty() ? std::min<Index>(50, (u.size() - 1) / 2) : std::stol(arg);
    const auto ccf = cross_correlation(u, features.values, max_lag);
    t.columns = {"lag"};
    t.columns.insert(t.columns.end(), features.labels.begin(), features.labels.end());
    for (Index k = 0; k < ccf.profile.values.rows(); ++k) {
      std::vector<Cell> row{ccf.profile.lags(k)};
      for (Index j = 0; j < ccf.profile.values.cols(); ++j) row.emplace_back(ccf.profile.values(k, j));
      t.rows.push_back(std::move(row));
    }
    return t;
  }
  throw ParameterError("unknown export selector '" + selector +
                       "' (available: capacity[:group], mc_profile[:group], readout:<task>, positions, ccf[:max_lag])");
}

void write_csv(const Table& t, std::ostream& os) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      if (const auto* d = std::get_if<double>(&row[i]))
        os << exact(*d);
      else
        os << std::get<std::string>(row[i]);
    }
    os << '\n';
  }
}

void write_json(const Table& t, const std::string& selector, std::ostream& os) {
  json rows = json::array();
  for (const auto& row : t.rows) {
    json r = json::array();
    for (const auto& c : row) std::visit([&](const auto& v) { r.push_back(v); }, c);
    rows.push_back(std::move(r));
  }
  os << json{{"selector", selector}, {"columns", t.columns}, {"rows", rows}}.dump() << '\n';
}

struct ExportArgs {
  std::string path, format, selector, out_path;
  bool overwrite = false;
};

int cmd_export(const ExportArgs& a, std::ostream& out) {
  if (a.format != "csv" && a.format != "json")
    throw ParameterError("unknown export format '" + a.format + "' (available: csv, json)");
  if (!fs::exists(a.path)) throw IoError("'" + a.path + "' not found");
  const Table t = export_table(a.path, a.selector);
  std::ostringstream buf;
  if (a.format == "csv")
    write_csv(t, buf);
  else
    write_json(t, a.selector, buf);
  if (a.out_path.empty()) {
    out << buf.str();
  } else {
    refuse_existing(a.out_path, a.overwrite);
    std::ofstream os(a.out_path);
    if (!os) throw IoError("cannot write '" + a.out_path + "'");
    os << buf.str();
  }
  return kOk;
}

void add_readout_options(CLI::App* cmd, ReadoutArgs& a) {
  cmd->add_option("dir", a.dir, "experiment directory")->required();
  cmd->add_option("--record", a.record, "trajectory record (default <dir>/output/simulation.h5)");
  cmd->add_option("--features", a.features, "positions[:dims] | displacements[:ref[:dims]] | bar_lengths | bar_extensions")
      ->capture_default_str();
  cmd->add_option("--signal", a.signal, "input signal name (default: the record's first actuator)");
  cmd->add_option("--column", a.column, "signal column")->capture_default_str();
  cmd->add_option("--washout", a.washout, "washout duration (default 10% of the record)");
  cmd->add_option("--train-duration", a.train, "training window (default 60%)");
  cmd->add_option("--test-duration", a.test, "test window (default the remainder)");
  cmd->add_option("--ridge", a.ridge, "ridge parameter")->capture_default_str();
  cmd->add_flag("--overwrite", a.overwrite, "replace existing outputs");
}

}  // namespace

std::string backend_name() {
  const char* env = std::getenv("PRC_BACKEND");
  return env && *env ? env : "cpu";
}

int exit_code_for(const Error& e) {
  const auto& k = e.kind();
  if (k == "refusal") return kRefusal;
  if (k == "divergence" || k == "singular_configuration" || k == "stability" || k == "degeneracy" ||
      k == "rank_deficiency")
    return kNumericalFailure;
  return kInputError;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Physical reservoir computing toolkit"};
  app.name("prc");
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "integrate an experiment directory");
  simulate->add_option("dir", sim.dir, "experiment directory")->required();
  simulate->add_option("--dt", sim.dt, "override the integrator step");
  simulate->add_option("--save-interval", sim.save_interval, "override the sampling interval");
  simulate->add_flag("--deterministic", sim.deterministic, "force a fixed reduction order");
  simulate->add_flag("--overwrite", sim.overwrite, "replace output/simulation.h5");

  TrackArgs trk;
  auto* track = app.add_subcommand("track", "track features through a directory of PGM frames");
  track->add_option("frames", trk.frames, "frame directory")->required();
  track->add_option("--params", trk.params, "JSON parameter file");
  track->add_option("--out", trk.out_path, "vision bundle to write")->required();
  track->add_option("--fb-threshold", trk.fb_threshold, "forward-backward limit in pixels");
  track->add_option("--window", trk.window, "KLT window side in pixels");
  track->add_option("--levels", trk.levels, "pyramid levels above the base");
  track->add_flag("--overwrite", trk.overwrite, "replace the output file");

  TrainArgs trn;
  auto* train_cmd = app.add_subcommand("train", "fit a readout onto a named signal");
  add_readout_options(train_cmd, trn);
  train_cmd->add_option("--target", trn.target, "signal to reconstruct")->required();
  train_cmd->add_option("--delay", trn.delay, "reconstruct the target this many samples late");
  train_cmd->add_option("--task", trn.task, "readout name (default fit_<target>)");

  BenchArgs bch;
  auto* bench = app.add_subcommand("bench", "run a benchmark: narma, memory or custom:<name>");
  add_readout_options(bench, bch);
  bench->add_option("benchmark", bch.benchmark, "narma | memory | custom:<name>")->required();
  bench->add_option("--group", bch.group, "metrics group name");
  bench->add_option("--order", bch.order, "NARMA order")->capture_default_str();
  bench->add_option("--tau-s", bch.tau_s, "IPC lag window")->capture_default_str();
  bench->add_option("--n-s", bch.n_s, "IPC maximum degree")->capture_default_str();
  bench->add_option("--k-delay", bch.k_delay, "IPC lag stride")->capture_default_str();
  bench->add_option("--p", bch.p, "capacity threshold false-positive rate")->capture_default_str();
  bench->add_option("--neff", bch.neff, "singular | correlation")->capture_default_str();
  bench->add_option("--param", bch.params, "key=value passed to custom benchmarks");

  std::string diag_dir;
  auto* diagnose = app.add_subcommand("diagnose", "validate an experiment directory and its outputs");
  diagnose->add_option("dir", diag_dir, "experiment directory")->required();

  std::string inspect_path;
  auto* inspect = app.add_subcommand("inspect", "list the contents of a record file or directory");
  inspect->add_option("path", inspect_path, "file or directory")->required();

  ExportArgs exp;
  auto* exporter = app.add_subcommand("export", "write a dataset as csv or json");
  exporter->add_option("path", exp.path, "record file")->required();
  exporter->add_option("format", exp.format, "csv | json")->required();
  exporter->add_option("selector", exp.selector, "capacity | mc_profile | readout:<task> | positions | ccf")
      ->required();
  exporter->add_option("--out", exp.out_path, "output file (default standard output)");
  exporter->add_flag("--overwrite", exp.overwrite, "replace the output file");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    emit_error(err, "usage", e.what(), kInputError);
    return kInputError;
  }

  try {
    make_backend(backend_name());
    if (simulate->parsed()) return cmd_simulate(sim, out, err);
    if (track->parsed()) return cmd_track(trk, out);
    if (train_cmd->parsed()) return cmd_train(trn, out);
    if (bench->parsed()) return cmd_bench(bch, out);
    if (diagnose->parsed()) return cmd_diagnose(diag_dir, out);
    if (inspect->parsed()) return cmd_inspect(inspect_path, out);
    if (exporter->parsed()) return cmd_export(exp, out);
  } catch (const Error& e) {
    const int code = exit_code_for(e);
    emit_error(err, e.kind(), e.what(), code, error_details(e));
    return code;
  } catch (const std::exception& e) {
    emit_error(err, "internal", e.what(), kNumericalFailure);
    return kNumericalFailure;
  }
  return kInputError;
}

}  // namespace prc::cli
