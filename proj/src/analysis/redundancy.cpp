#include "prc/analysis/redundancy.hpp"

#include <numeric>

#include "prc/error.hpp"

namespace prc {

double spectral_effective_rank(const Eigen::VectorXd& spectrum) {
  double total = 0;
  for (Index i = 0; i < spectrum.size(); ++i) total += std::max(0.0, spectrum(i));
  if (!(total > 0)) return kUndefined;
  double entropy = 0;
  for (Index i = 0; i < spectrum.size(); ++i) {
    const double p = std::max(0.0, spectrum(i)) / total;
    if (p > 0) entropy -= p * std::log(p);
  }
  return std::exp(entropy);
}

Eigen::MatrixXd correlation_matrix(const RowMatrixd& X, std::vector<Index>* kept) {
  if (!X.allFinite()) throw ParameterError("redundancy input must be finite");
  const RowMatrixd Xc = X.rowwise() - X.colwise().mean();
  std::vector<Index> live;
  for (Index i = 0; i < X.cols(); ++i)
    if (Xc.col(i).squaredNorm() > 0) live.push_back(i);
  const auto n = static_cast<Index>(live.size());
  Eigen::MatrixXd Z(X.rows(), n);
  for (Index k = 0; k < n; ++k) {
    const auto c = Xc.col(live[static_cast<std::size_t>(k)]);
    Z.col(k) = c / c.norm();
  }
  Eigen::MatrixXd C = Z.transpose() * Z;
  C.diagonal().setOnes();
  C = C.cwiseMax(-1.0).cwiseMin(1.0);
  if (kept) *kept = live;
  return C;
}

RedundancySummary redundancy(const RowMatrixd& X, double threshold) {
  if (X.cols() < 1 || X.rows() < 2) throw ParameterError("redundancy needs N >= 1 channels and T >= 2 samples");
  if (!(threshold >= 0 && threshold <= 1)) throw ParameterError("cluster threshold must lie in [0, 1]");
  std::vector<Index> live;
  const Eigen::MatrixXd C = correlation_matrix(X, &live);
  const auto n = static_cast<Index>(live.size());
  RedundancySummary out;
  out.clusters.assign(static_cast<std::size_t>(X.cols()), -1);
  if (n < X.cols()) out.notes.push_back(std::to_string(X.cols() - n) + " zero-variance channel(s) excluded");
  if (n == 0) return out;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(C, Eigen::EigenvaluesOnly);
  out.eigenvalues = eig.eigenvalues().reverse();
  for (Index i = 0; i < n; ++i)
    if (out.eigenvalues(i) <= kEigenFloor) out.eigenvalues(i) = 0.0;
  out.effective_rank = spectral_effective_rank(out.eigenvalues);
  out.condition_number = out.eigenvalues(0) / std::max(out.eigenvalues(n - 1), kEigenFloor);

  // Single linkage is connected components of the |corr| >= threshold graph.
  std::vector<Index> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](Index a) {
    while (parent[static_cast<std::size_t>(a)] != a)
      a = parent[static_cast<std::size_t>(a)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
    return a;
  };
  for (Index a = 0; a < n; ++a)
    for (Index b = a + 1; b < n; ++b)
      if (std::abs(C(a, b)) >= threshold) {
        const Index ra = find(a), rb = find(b);
        if (ra != rb) parent[static_cast<std::size_t>(std::max(ra, rb))] = std::min(ra, rb);
      }
  std::vector<Index> label(static_cast<std::size_t>(n), -1);
  for (Index a = 0; a < n; ++a) {
    const Index root = find(a);
    if (label[static_cast<std::size_t>(root)] < 0) label[static_cast<std::size_t>(root)] = out.cluster_count++;
    out.clusters[static_cast<std::size_t>(live[static_cast<std::size_t>(a)])] = label[static_cast<std::size_t>(root)];
  }
  return out;
}

RowMatrixd standardize_columns(const RowMatrixd& X) {
  RowMatrixd Z = X.rowwise() - X.colwise().mean();
  for (Index i = 0; i < Z.cols(); ++i) {
    const double sd = std::sqrt(Z.col(i).squaredNorm() / static_cast<double>(Z.rows()));
    if (sd > 0)
      Z.col(i) /= sd;
    else
      Z.col(i).setZero();
  }
  return Z;
}

double singular_effective_rank(const RowMatrixd& X) {
  if (X.rows() < 2 || X.cols() < 1) throw ParameterError("effective rank needs T >= 2 and N >= 1");
  const Eigen::MatrixXd Z = standardize_columns(X);
  const Eigen::BDCSVD<Eigen::MatrixXd> svd(Z);
  return spectral_effective_rank(svd.singularValues());
}

}  // namespace prc
