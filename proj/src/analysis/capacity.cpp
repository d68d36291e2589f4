#include "prc/analysis/capacity.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include "prc/analysis/legendre.hpp"
#include "prc/analysis/redundancy.hpp"
#include "prc/error.hpp"
#include "prc/reservoir/ridge.hpp"

namespace prc {

double chi2_isf(double p, double dof) {
  if (!(p > 0 && p < 1)) throw ParameterError("tail probability must lie in (0, 1), got " + std::to_string(p));
  if (!(dof > 0) || !std::isfinite(dof)) throw ParameterError("chi-squared degrees of freedom must be > 0");
  // Q(dof/2, t/2) = p.
  return 2.0 * boost::math::gamma_q_inv(dof / 2.0, p);
}

double epsilon_threshold(double n_eff, Index t_test, double p) {
  if (t_test <= 0) throw ParameterError("test window must hold at least one sample");
  return 2.0 * chi2_isf(p, n_eff) / static_cast<double>(t_test);
}

double threshold_capacity(double raw, double epsilon) {
  const double clipped = std::clamp(raw, 0.0, 1.0);
  return clipped > epsilon ? clipped : 0.0;
}

CapacityScore capacity_score(const Eigen::VectorXd& y, const Eigen::VectorXd& yhat, double epsilon) {
  if (y.size() != yhat.size()) throw ShapeError("target and prediction lengths differ");
  if (y.size() == 0) throw ParameterError("capacity needs a non-empty window");
  const double sst = (y.array() - y.mean()).square().sum();
  if (!(sst > 0)) throw DegeneracyError("capacity target is constant on the evaluation window");
  CapacityScore s;
  s.raw = 1.0 - (y - yhat).squaredNorm() / sst;
  s.c = threshold_capacity(s.raw, epsilon);
  return s;
}

NeffMethod neff_method_from_string(const std::string& name) {
  if (name == "singular") return NeffMethod::SingularValues;
  if (name == "correlation") return NeffMethod::CorrelationEigen;
  throw ParameterError("unknown effective-rank method '" + name + "' (expected singular or correlation)");
}

CapacityRun compute_capacity(const FeatureMatrix& features, const Eigen::VectorXd& u, const TrainerConfig& windows,
                             const MemoryParams& p) {
  check_features(features);
  const Index T = features.rows();
  if (u.size() != T)
    throw ShapeError("input has " + std::to_string(u.size()) + " samples but the features have " + std::to_string(T));
  const auto basis = legendre_target_basis(u, p.tau_s, p.n_s, p.k_delay);

  CapacityRun run;
  Split s = split_windows(T, features.dt, windows);
  if (s.washout_end < basis.offset) {
    const Index shift = basis.offset - s.washout_end;
    s.washout_end += shift;
    s.train_end += shift;
    s.test_end += shift;
    if (s.test_end > T)
      throw ConfigurationError("windows shifted past the basis history need " + std::to_string(s.test_end) +
                               " samples but only " + std::to_string(T) + " are available");
  }
  run.split = s;
  const Index n_train = s.train_end - s.washout_end, n_test = s.test_end - s.train_end;
  if (n_test < 1) throw ConfigurationError("capacity needs a non-empty test window");

  const RowMatrixd Z = standardize_columns(features.values);
  run.n_eff = p.neff == NeffMethod::SingularValues ? singular_effective_rank(features.values)
                                                    : redundancy(features.values).effective_rank;
  const double eps = p.epsilon ? *p.epsilon : epsilon_threshold(run.n_eff, n_test, p.p);
  if (!(eps >= 0)) throw ParameterError("capacity threshold must be >= 0");

  // Every target shares the design matrix, so one multi-output solve covers
  // all basis functions.
  const RowMatrixd Y = basis.targets.middleRows(s.washout_end - basis.offset, n_train + n_test);
  const RowMatrixd X = Z.middleRows(s.washout_end, n_train + n_test);
  const RowMatrixd W = ridge_fit(X.topRows(n_train), Y.topRows(n_train), p.ridge, true);
  const RowMatrixd pred = ridge_predict(X.bottomRows(n_test), W, true);

  auto& t = run.table;
  const Index R = basis.exponents.rows();
  t.exponents = basis.exponents;
  t.degree = basis.degree;
  t.c_raw.resize(R);
  t.c.resize(R);
  t.tau_s = p.tau_s;
  t.n_s = p.n_s;
  t.k_delay = p.k_delay;
  t.epsilon = eps;
  t.ridge = p.ridge;
  for (Index r = 0; r < R; ++r) {
    const auto cs = capacity_score(Y.col(r).tail(n_test), pred.col(r), eps);
    t.c_raw(r) = cs.raw;
    t.c(r) = cs.c;
    (t.degree(r) == 1 ? t.mc_lin : t.mc_nonlin) += cs.c;
  }
  t.ipc_tot = t.mc_lin + t.mc_nonlin;
  return run;
}

}  // namespace prc
