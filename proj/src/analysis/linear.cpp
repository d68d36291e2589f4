#include "prc/analysis/linear.hpp"

#include <boost/math/special_functions/beta.hpp>

#include "prc/error.hpp"

namespace prc {

namespace {

void check_inputs(const Eigen::VectorXd& u, const RowMatrixd& X, Index min_rows) {
  if (u.size() != X.rows())
    throw ShapeError("input has " + std::to_string(u.size()) + " samples but X has " + std::to_string(X.rows()));
  if (X.rows() < min_rows) throw ParameterError("need at least " + std::to_string(min_rows) + " samples");
  if (!u.allFinite() || !X.allFinite()) throw ParameterError("correlation inputs must be finite");
}

}  // namespace

double correlation_p_value(double r, double dof) {
  if (std::isnan(r) || !(dof > 0)) return kUndefined;
  const double r2 = std::min(1.0, r * r);
  if (r2 >= 1.0) return 0.0;
  // P(|t| >= t0) = I_{dof/(dof+t0²)}(dof/2, 1/2) with t0² = dof·r²/(1−r²).
  const double x = (1.0 - r2);
  return boost::math::ibeta(dof / 2.0, 0.5, x);
}

CorrelationResult pearson_channels(const Eigen::VectorXd& u, const RowMatrixd& X) {
  check_inputs(u, X, 3);
  const Index T = X.rows(), N = X.cols();
  const Eigen::VectorXd uc = u.array() - u.mean();
  const double su = uc.squaredNorm();
  CorrelationResult r;
  r.metric = "pearson";
  r.values.resize(1, N);
  r.p_values.resize(1, N);
  for (Index i = 0; i < N; ++i) {
    const Eigen::VectorXd xc = X.col(i).array() - X.col(i).mean();
    const double sx = xc.squaredNorm();
    if (su == 0.0 || sx == 0.0) {
      r.values(0, i) = kUndefined;
      r.p_values(0, i) = kUndefined;
      continue;
    }
    const double v = std::clamp(uc.dot(xc) / std::sqrt(su * sx), -1.0, 1.0);
    r.values(0, i) = v;
    r.p_values(0, i) = correlation_p_value(v, static_cast<double>(T - 2));
  }
  if (su == 0.0) r.notes.push_back("input has zero variance");
  return r;
}

CrossCorrelation cross_correlation(const Eigen::VectorXd& u, const RowMatrixd& X, Index max_lag) {
  check_inputs(u, X, 3);
  const Index T = X.rows(), N = X.cols();
  if (max_lag < 0 || 2 * max_lag >= T) throw ParameterError("max_lag must satisfy 0 <= max_lag < T/2");
  const Index L = 2 * max_lag + 1;
  const Eigen::VectorXd uc = u.array() - u.mean();
  const double su = uc.squaredNorm();

  CrossCorrelation out;
  auto& p = out.profile;
  p.metric = "ccf";
  p.lags = Eigen::VectorXd::LinSpaced(L, static_cast<double>(-max_lag), static_cast<double>(max_lag));
  p.values = RowMatrixd::Constant(L, N, kUndefined);
  p.p_values = RowMatrixd::Constant(L, N, kUndefined);
  out.peak_lag = Eigen::VectorXd::Constant(N, kUndefined);
  out.peak_value = Eigen::VectorXd::Constant(N, kUndefined);
  for (Index i = 0; i < N; ++i) {
    const Eigen::VectorXd xc = X.col(i).array() - X.col(i).mean();
    const double sx = xc.squaredNorm();
    if (su == 0.0 || sx == 0.0) continue;
    const double norm = std::sqrt(su * sx);
    for (Index k = 0; k < L; ++k) {
      const Index tau = k - max_lag;
      // Σ_t u_t x_{t+τ} over t with both indices in range.
      const Index t0 = std::max<Index>(0, -tau), t1 = std::min(T, T - tau);
      const double v = uc.segment(t0, t1 - t0).dot(xc.segment(t0 + tau, t1 - t0)) / norm;
      p.values(k, i) = std::clamp(v, -1.0, 1.0);
      p.p_values(k, i) = correlation_p_value(p.values(k, i), static_cast<double>(t1 - t0 - 2));
    }
    // Visit lags by |τ| ascending, negative first, so the first strict
    // maximum wins ties.
    Index best = max_lag;
    for (Index a = 1; a <= max_lag; ++a)
      for (Index tau : {-a, a})
        if (std::abs(p.values(tau + max_lag, i)) > std::abs(p.values(best, i))) best = tau + max_lag;
    out.peak_lag(i) = static_cast<double>(best - max_lag);
    out.peak_value(i) = p.values(best, i);
  }
  if (su == 0.0) p.notes.push_back("input has zero variance");
  p.metadata["max_lag"] = static_cast<double>(max_lag);
  return out;
}

CorrelationResult partial_correlation(const RowMatrixd& X) {
  const Index T = X.rows(), N = X.cols();
  if (T < 3 || N < 1) throw ParameterError("partial correlation needs T >= 3 and N >= 1");
  if (!X.allFinite()) throw ParameterError("correlation inputs must be finite");
  RowMatrixd Xc = X.rowwise() - X.colwise().mean();
  std::vector<Index> live;
  for (Index i = 0; i < N; ++i)
    if (Xc.col(i).squaredNorm() > 0) live.push_back(i);
  const auto n = static_cast<Index>(live.size());

  CorrelationResult r;
  r.metric = "partial_correlation";
  r.symmetric = true;
  r.values = RowMatrixd::Constant(N, N, kUndefined);
  r.p_values = RowMatrixd::Constant(N, N, kUndefined);
  if (n < N) r.notes.push_back(std::to_string(N - n) + " zero-variance channel(s) left undefined");
  if (n == 0) return r;

  Eigen::MatrixXd S(T, n);
  for (Index k = 0; k < n; ++k) S.col(k) = Xc.col(live[static_cast<std::size_t>(k)]);
  Eigen::MatrixXd cov = S.transpose() * S / static_cast<double>(T - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov, Eigen::EigenvaluesOnly);
  const double lmax = eig.eigenvalues().maxCoeff(), lmin = eig.eigenvalues().minCoeff();
  if (!(lmin > 0) || lmax / lmin > 1e12) {
    const double inflate = 1e-10 * cov.trace() / static_cast<double>(n);
    cov.diagonal().array() += inflate;
    r.metadata["ridge_inflation"] = inflate;
    r.notes.push_back("covariance ill-conditioned; diagonal inflated");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success)
    throw RankDeficiency("covariance matrix is singular even after inflation; cluster redundant channels first");
  const Eigen::MatrixXd P = llt.solve(Eigen::MatrixXd::Identity(n, n));
  // Each ρ_ij conditions on the other n-2 channels.
  const double dof = static_cast<double>(T - n);
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b) {
      const Index i = live[static_cast<std::size_t>(a)], j = live[static_cast<std::size_t>(b)];
      if (a == b) {
        r.values(i, j) = 1.0;
        continue;
      }
      const double v = std::clamp(-P(a, b) / std::sqrt(P(a, a) * P(b, b)), -1.0, 1.0);
      r.values(i, j) = v;
      r.p_values(i, j) = correlation_p_value(v, dof);
    }
  return r;
}

CanonicalCorrelation cca_first(const Eigen::VectorXd& u, const RowMatrixd& X) {
  check_inputs(u, X, 3);
  const Index T = X.rows(), N = X.cols();
  CanonicalCorrelation out;
  out.weights = Eigen::VectorXd::Zero(N);
  const Eigen::VectorXd uc = u.array() - u.mean();
  const double su = uc.squaredNorm();
  if (su == 0.0) return out;
  std::vector<Index> live;
  for (Index i = 0; i < N; ++i)
    if ((X.col(i).array() - X.col(i).mean()).matrix().squaredNorm() > 0) live.push_back(i);
  if (live.empty()) return out;
  Eigen::MatrixXd A(T, static_cast<Index>(live.size()));
  for (std::size_t k = 0; k < live.size(); ++k)
    A.col(static_cast<Index>(k)) = X.col(live[k]).array() - X.col(live[k]).mean();
  // Minimum-norm least squares; collinear channels share weight.
  const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
  const Eigen::VectorXd w = cod.solve(uc);
  const double r2 = 1.0 - (uc - A * w).squaredNorm() / su;
  out.rho = std::sqrt(std::clamp(r2, 0.0, 1.0));
  for (std::size_t k = 0; k < live.size(); ++k) out.weights(live[k]) = w(static_cast<Index>(k));
  return out;
}

}  // namespace prc
