#include "prc/reservoir/trainer.hpp"

#include "prc/error.hpp"
#include "prc/reservoir/ridge.hpp"

namespace prc {

void TrainerConfig::check() const {
  for (double d : {washout, train_duration, test_duration})
    if (!(d >= 0) || !std::isfinite(d)) throw ConfigurationError("trainer durations must be finite and >= 0");
  if (!(ridge >= 0) || !std::isfinite(ridge)) throw ConfigurationError("ridge parameter must be finite and >= 0");
}

Split split_windows(Index samples, double dt, const TrainerConfig& c) {
  c.check();
  if (!(dt > 0)) throw ConfigurationError("sample timestep must be > 0");
  Split s;
  s.washout_end = stable_floor(c.washout / dt);
  s.train_end = s.washout_end + stable_floor(c.train_duration / dt);
  s.test_end = s.train_end + stable_floor(c.test_duration / dt);
  if (s.test_end > samples)
    throw ConfigurationError("washout + train + test need " + std::to_string(s.test_end) + " samples but only " +
                             std::to_string(samples) + " are available");
  if (s.train_end == s.washout_end) throw ConfigurationError("train window is empty");
  return s;
}

const WindowCache& TrainResult::cache(const std::string& window) const {
  if (window == "train") return train;
  if (window == "test") return test;
  throw ParameterError("unknown window '" + window + "' (expected train or test)");
}

namespace {

Eigen::VectorXd normalized_error(const RowMatrixd& y, const RowMatrixd& yhat, bool root) {
  if (y.rows() != yhat.rows() || y.cols() != yhat.cols()) throw ShapeError("target and prediction shapes differ");
  Eigen::VectorXd out(y.cols());
  for (Index c = 0; c < y.cols(); ++c) {
    if (y.rows() == 0) {
      out(c) = std::nan("");
      continue;
    }
    const double mse = (y.col(c) - yhat.col(c)).squaredNorm() / static_cast<double>(y.rows());
    const double var = (y.col(c).array() - y.col(c).mean()).square().mean();
    double scale = root ? std::sqrt(var) : var;
    if (scale == 0.0) scale = 1.0;
    out(c) = (root ? std::sqrt(mse) : mse) / scale;
  }
  return out;
}

}  // namespace

Eigen::VectorXd nmse(const RowMatrixd& y, const RowMatrixd& yhat) { return normalized_error(y, yhat, false); }
Eigen::VectorXd nrmse(const RowMatrixd& y, const RowMatrixd& yhat) { return normalized_error(y, yhat, true); }

TrainResult train(const FeatureMatrix& features, const RowMatrixd& target, const TrainerConfig& config,
                  const std::string& task) {
  check_features(features);
  const Split s = split_windows(features.rows(), features.dt, config);
  if (target.rows() < s.test_end)
    throw ConfigurationError("target has " + std::to_string(target.rows()) + " samples but the windows need " +
                             std::to_string(s.test_end));
  if (target.cols() == 0) throw ShapeError("target has no columns");
  if (!target.topRows(s.test_end).allFinite()) throw ValidationError("target is not finite inside the windows");

  const Index n_train = s.train_end - s.washout_end, n_test = s.test_end - s.train_end;
  const RowMatrixd X = features.values.middleRows(s.washout_end, s.test_end - s.washout_end);
  const RowMatrixd Y = target.middleRows(s.washout_end, s.test_end - s.washout_end);

  TrainResult r;
  auto& ro = r.readout;
  ro.task = task;
  ro.bias = config.bias;
  ro.ridge = config.ridge;
  ro.feature_labels = features.labels;
  ro.dt = features.dt;
  ro.washout_end = s.washout_end;
  ro.train_end = s.train_end;
  ro.test_end = s.test_end;
  ro.weights = ridge_fit(X.topRows(n_train), Y.topRows(n_train), config.ridge, config.bias);
  ro.predictions = ridge_predict(X, ro.weights, config.bias);
  ro.targets = Y;

  auto fill = [&](WindowCache& w, Index offset, Index count) {
    w.time.resize(count);
    for (Index i = 0; i < count; ++i) w.time(i) = static_cast<double>(s.washout_end + offset + i) * features.dt;
    w.target = Y.middleRows(offset, count);
    w.prediction = ro.predictions.middleRows(offset, count);
  };
  fill(r.train, 0, n_train);
  fill(r.test, n_train, n_test);
  ro.nmse_train = nmse(r.train.target, r.train.prediction);
  ro.nrmse_train = nrmse(r.train.target, r.train.prediction);
  ro.nmse_test = nmse(r.test.target, r.test.prediction);
  ro.nrmse_test = nrmse(r.test.target, r.test.prediction);
  return r;
}

TrainResult train(const TrajectoryRecord& record, const FeatureExtractor& extractor, const TrainerConfig& config,
                  const RowMatrixd& target, const std::string& task) {
  return train(extract_features(record, extractor), target, config, task);
}

}  // namespace prc
