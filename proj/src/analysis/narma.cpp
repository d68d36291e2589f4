#include "prc/analysis/narma.hpp"

#include <sstream>

#include "prc/error.hpp"

namespace prc {

Eigen::VectorXd normalize_narma_input(const Eigen::VectorXd& u) {
  if (u.size() == 0 || !u.allFinite()) throw ParameterError("NARMA input must be non-empty and finite");
  const double lo = u.minCoeff(), hi = u.maxCoeff();
  if (!(hi > lo)) throw DegeneracyError("NARMA input is constant; cannot normalize");
  return 0.5 * (u.array() - lo) / (hi - lo);
}

Eigen::VectorXd narma_target(const Eigen::VectorXd& u, int order) {
  if (order < 2) throw ParameterError("NARMA order must be >= 2, got " + std::to_string(order));
  if (!u.allFinite()) throw ParameterError("NARMA input must be finite");
  const Index T = u.size();
  Eigen::VectorXd y = Eigen::VectorXd::Zero(T);
  auto Y = [&](Index t) { return t >= 0 ? y(t) : 0.0; };
  auto U = [&](Index t) { return t >= 0 ? u(t) : 0.0; };
  for (Index t = 0; t + 1 < T; ++t) {
    double next;
    if (order == 2) {
      next = 0.4 * y(t) + 0.4 * y(t) * Y(t - 1) + 0.6 * u(t) * u(t) * u(t) + 0.1;
    } else {
      double history = 0;
      for (Index i = 0; i < order; ++i) history += Y(t - i);
      next = 0.3 * y(t) + 0.05 * y(t) * history + 1.5 * U(t - order + 1) * u(t) + 0.1;
    }
    if (!(std::abs(next) <= 10.0)) {
      std::ostringstream msg;
      msg << "NARMA" << order << " recurrence diverged at t=" << t + 1 << " (|y| > 10); input spans ["
          << u.minCoeff() << ", " << u.maxCoeff() << "], normalize it into [0, 0.5]";
      throw StabilityError(msg.str());
    }
    y(t + 1) = next;
  }
  return y;
}

}  // namespace prc
