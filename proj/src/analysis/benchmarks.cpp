#include "prc/analysis/benchmarks.hpp"

#include <mutex>

#include "prc/analysis/metrics_store.hpp"
#include "prc/analysis/narma.hpp"
#include "prc/error.hpp"
#include "prc/schema/storage.hpp"

namespace prc {

MetricsRecord BenchmarkScore::to_record() const {
  MetricsRecord r;
  r.group = group;
  r.scalars = metrics;
  r.parameters = parameters;
  r.notes = notes;
  r.notes["status"] = failed ? "failed" : "ok";
  r.capacity = capacity;
  if (capacity) {
    // Degree-one rows in slot order are the memory profile.
    std::vector<double> delays, values;
    for (Index i = 0; i < capacity->rows(); ++i) {
      if (capacity->degree(i) != 1) continue;
      Index slot = 0;
      while (capacity->exponents(i, slot) == 0) ++slot;
      delays.push_back(static_cast<double>(capacity->lag(slot)));
      values.push_back(capacity->c(i));
    }
    r.mc_delays = Eigen::Map<Eigen::VectorXd>(delays.data(), static_cast<Index>(delays.size()));
    r.mc_profile = Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Index>(values.size()));
  } else {
    r.mc_delays.resize(0);
    r.mc_profile.resize(0);
  }
  return r;
}

TrainResult TrainerContext::train(const RowMatrixd& target, const std::string& task) {
  auto result = prc::train(features, target, config, task);
  readouts.push_back(result.readout);
  return result;
}

TrainResult TrainerContext::train(const Eigen::VectorXd& target, const std::string& task) {
  return train(RowMatrixd(target), task);
}

namespace {

void window_parameters(BenchmarkParams& p, const TrainerConfig& c) {
  p["washout"] = c.washout;
  p["train_duration"] = c.train_duration;
  p["test_duration"] = c.test_duration;
  p["ridge"] = c.ridge;
}

}  // namespace

BenchmarkScore narma_benchmark(TrainerContext& ctx, const Eigen::VectorXd& u, int order, const std::string& group) {
  if (u.size() != ctx.features.rows())
    throw ShapeError("input has " + std::to_string(u.size()) + " samples but the features have " +
                     std::to_string(ctx.features.rows()));
  const auto target = narma_target(u, order);
  const auto result = ctx.train(target, "NARMA" + std::to_string(order));
  BenchmarkScore s;
  s.group = group;
  s.metrics["nrmse_test"] = result.readout.nrmse_test(0);
  s.metrics["nmse_test"] = result.readout.nmse_test(0);
  s.metrics["nrmse_train"] = result.readout.nrmse_train(0);
  s.metrics["nmse_train"] = result.readout.nmse_train(0);
  window_parameters(s.parameters, ctx.config);
  s.parameters["order"] = order;
  s.notes["benchmark"] = "narma";
  s.notes["features"] = ctx.features.source;
  s.readouts.push_back(result.readout);
  return s;
}

BenchmarkScore memory_benchmark(TrainerContext& ctx, const Eigen::VectorXd& u, const MemoryParams& params,
                                const std::string& group) {
  const auto run = compute_capacity(ctx.features, u, ctx.config, params);
  BenchmarkScore s;
  s.group = group;
  s.metrics["mc_lin"] = run.table.mc_lin;
  s.metrics["mc_nonlin"] = run.table.mc_nonlin;
  s.metrics["ipc_tot"] = run.table.ipc_tot;
  s.metrics["epsilon"] = run.table.epsilon;
  s.metrics["n_eff"] = run.n_eff;
  window_parameters(s.parameters, ctx.config);
  s.parameters["ridge"] = params.ridge;
  s.parameters["tau_s"] = static_cast<double>(params.tau_s);
  s.parameters["n_s"] = static_cast<double>(params.n_s);
  s.parameters["k_delay"] = static_cast<double>(params.k_delay);
  s.parameters["p"] = params.p;
  s.parameters["washout_samples"] = static_cast<double>(run.split.washout_end);
  s.notes["benchmark"] = "memory";
  s.notes["features"] = ctx.features.source;
  s.notes["n_eff_method"] = params.neff == NeffMethod::SingularValues ? "singular" : "correlation";
  s.notes["epsilon_source"] = params.epsilon ? "given" : "chi2";
  s.capacity = run.table;
  return s;
}

namespace {

std::mutex registry_mutex;

std::map<std::string, BenchmarkLogic>& registry() {
  static std::map<std::string, BenchmarkLogic> r;
  return r;
}

}  // namespace

void register_benchmark(const std::string& name, BenchmarkLogic logic, bool replace) {
  if (name.empty()) throw ParameterError("benchmark name must not be empty");
  std::lock_guard lock(registry_mutex);
  if (registry().count(name) && !replace) throw RefusalError("benchmark '" + name + "' is already registered");
  registry()[name] = std::move(logic);
}

std::vector<std::string> registered_benchmarks() {
  std::lock_guard lock(registry_mutex);
  std::vector<std::string> names;
  for (const auto& [name, _] : registry()) names.push_back(name);
  return names;
}

bool has_benchmark(const std::string& name) {
  std::lock_guard lock(registry_mutex);
  return registry().count(name) > 0;
}

BenchmarkScore run_custom_benchmark(const BenchmarkLogic& logic, const std::string& group, TrainerContext& ctx,
                                    const Eigen::VectorXd& u, const BenchmarkParams& params) {
  BenchmarkScore s;
  s.group = group;
  s.parameters = params;
  s.notes["benchmark"] = "custom";
  const auto before = ctx.readouts.size();
  try {
    auto out = logic(ctx, u, params);
    s.metrics = std::move(out.metrics);
    for (const auto& [k, v] : out.parameters) s.parameters[k] = v;
  } catch (const std::exception& e) {
    s.failed = true;
    s.notes["error"] = e.what();
  }
  s.readouts.assign(ctx.readouts.begin() + static_cast<std::ptrdiff_t>(before), ctx.readouts.end());
  return s;
}

BenchmarkScore run_custom_benchmark(const std::string& name, const std::string& group, TrainerContext& ctx,
                                    const Eigen::VectorXd& u, const BenchmarkParams& params) {
  BenchmarkLogic logic;
  {
    std::lock_guard lock(registry_mutex);
    auto it = registry().find(name);
    if (it == registry().end()) {
      std::string known;
      for (const auto& [n, _] : registry()) known += (known.empty() ? "" : ", ") + n;
      throw ParameterError("unknown benchmark '" + name + "' (registered: " + (known.empty() ? "none" : known) + ")");
    }
    logic = it->second;
  }
  auto s = run_custom_benchmark(logic, group, ctx, u, params);
  s.notes["logic"] = name;
  return s;
}

void save_score(const BenchmarkScore& score, const std::filesystem::path& dir, bool overwrite) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
  MetricsStore(dir / "metrics.h5").save(score.to_record(), overwrite);
  for (const auto& r : score.readouts) store_readout(r, dir / "readout.h5");
}

}  // namespace prc
