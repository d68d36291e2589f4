#pragma once

#include <map>
#include <string>

#include "prc/schema/types.hpp"

namespace prc {

/// Named input time series sharing one sample timestep. Each signal is a
/// T_u×d matrix (d = 1 for scalar signals).
struct SignalSet {
  double dt = 0.0;
  std::map<std::string, RowMatrixd> signals;

  /// Column vectors become single-column signals.
  template <typename Derived>
  void add(const std::string& name, const Eigen::MatrixBase<Derived>& values) {
    signals[name] = values;
  }
  bool contains(const std::string& name) const { return signals.count(name) > 0; }
  const RowMatrixd& at(const std::string& name) const;

  /// Time covered by `name`, (T_u - 1) * dt.
  double span(const std::string& name) const;

  /// Linear interpolation of every column of `name` at time t. Times past the
  /// last sample are an error; callers validate coverage up front.
  Eigen::VectorXd sample(const std::string& name, double t) const;

  /// Resamples column `column` of `name` onto t_k = k * step, k < count.
  Eigen::VectorXd resample(const std::string& name, Index column, double step, Index count) const;
};

bool operator==(const SignalSet& a, const SignalSet& b);

}  // namespace prc
