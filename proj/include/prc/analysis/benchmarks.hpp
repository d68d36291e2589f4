#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "prc/analysis/capacity.hpp"
#include "prc/reservoir/trainer.hpp"

namespace prc {

using BenchmarkParams = std::map<std::string, double>;

struct BenchmarkScore {
  std::string group;
  std::map<std::string, double> metrics;
  BenchmarkParams parameters;
  std::map<std::string, std::string> notes;
  std::vector<ReadoutRecord> readouts;
  std::optional<CapacityTable> capacity;
  bool failed = false;

  MetricsRecord to_record() const;
};

/// Features plus window settings; every readout trained through it is kept
/// so the score can persist it.
struct TrainerContext {
  FeatureMatrix features;
  TrainerConfig config;
  std::vector<ReadoutRecord> readouts;

  TrainResult train(const RowMatrixd& target, const std::string& task);
  TrainResult train(const Eigen::VectorXd& target, const std::string& task);
};

/// NARMA target from u (expected in [0, 0.5]), one readout, test and train
/// errors. Metric keys: nrmse_test, nmse_test, nrmse_train, nmse_train.
BenchmarkScore narma_benchmark(TrainerContext& ctx, const Eigen::VectorXd& u, int order = 2,
                               const std::string& group = "narma_benchmark");

/// Truncated IPC sweep. Metric keys: mc_lin, mc_nonlin, ipc_tot, epsilon,
/// n_eff; the degree-one capacities form the memory profile.
BenchmarkScore memory_benchmark(TrainerContext& ctx, const Eigen::VectorXd& u, const MemoryParams& params,
                                const std::string& group = "memory_benchmark");

struct CustomOutput {
  std::map<std::string, double> metrics;
  BenchmarkParams parameters;
};
using BenchmarkLogic = std::function<CustomOutput(TrainerContext&, const Eigen::VectorXd&, const BenchmarkParams&)>;

/// Process-wide registry of named benchmark logic. Re-registering a name
/// raises RefusalError unless `replace`.
void register_benchmark(const std::string& name, BenchmarkLogic logic, bool replace = false);
std::vector<std::string> registered_benchmarks();
bool has_benchmark(const std::string& name);

/// Runs `logic` and wraps its metrics. An exception from the logic is caught
/// and recorded: the score is marked failed and notes["error"] holds the
/// message.
BenchmarkScore run_custom_benchmark(const BenchmarkLogic& logic, const std::string& group, TrainerContext& ctx,
                                    const Eigen::VectorXd& u, const BenchmarkParams& params = {});
/// Looks the logic up by name; an unknown name raises ParameterError listing
/// the registered ones.
BenchmarkScore run_custom_benchmark(const std::string& name, const std::string& group, TrainerContext& ctx,
                                    const Eigen::VectorXd& u, const BenchmarkParams& params = {});

/// Writes the score's MetricsRecord to <dir>/metrics.h5 and its readouts to
/// <dir>/readout.h5. An existing group is refused unless `overwrite`.
void save_score(const BenchmarkScore& score, const std::filesystem::path& dir, bool overwrite = false);

}  // namespace prc
