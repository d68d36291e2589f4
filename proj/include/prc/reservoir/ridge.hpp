#pragma once

#include <Eigen/Dense>

#include "prc/error.hpp"
#include "prc/schema/types.hpp"

namespace prc {

/// Closed-form ridge regression minimizing ‖Xw − Y‖² + λ‖w‖².
///
/// With `bias`, an unpenalized intercept is fitted by centring X and Y and the
/// returned weights are (D+1)×O with the intercept in the last row. The
/// regularized normal equations are solved by Cholesky; a poorly conditioned
/// factor falls back to column-pivoted QR on the stacked system [X; √λ I].
/// A rank-deficient system at λ = 0 raises RankDeficiency.
template <typename DerivedX, typename DerivedY>
RowMatrix<typename DerivedX::Scalar> ridge_fit(const Eigen::MatrixBase<DerivedX>& X,
                                               const Eigen::MatrixBase<DerivedY>& Y, double lambda,
                                               bool bias = true) {
  using Scalar = typename DerivedX::Scalar;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using RowVec = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;
  if (!(lambda >= 0) || !std::isfinite(lambda)) throw ParameterError("ridge parameter must be finite and >= 0");
  if (X.rows() != Y.rows())
    throw ShapeError("ridge_fit: X has " + std::to_string(X.rows()) + " rows but Y has " + std::to_string(Y.rows()));
  if (X.rows() == 0 || X.cols() == 0) throw ShapeError("ridge_fit: empty design matrix");
  const Index D = X.cols(), O = Y.cols();

  RowVec x_mean = RowVec::Zero(D), y_mean = RowVec::Zero(O);
  Mat Xc = X, Yc = Y;
  if (bias) {
    x_mean = Xc.colwise().mean();
    y_mean = Yc.colwise().mean();
    Xc.rowwise() -= x_mean;
    Yc.rowwise() -= y_mean;
  }
  const auto lam = static_cast<Scalar>(lambda);

  Mat W;
  Mat A = Xc.transpose() * Xc;
  A.diagonal().array() += lam;
  Eigen::LLT<Mat> llt(A);
  // Cholesky squares the condition number; below this reciprocal condition
  // the orthogonal route keeps the accuracy the data actually supports.
  const Scalar rcond_floor = Scalar(64) * Eigen::NumTraits<Scalar>::epsilon();
  if (llt.info() == Eigen::Success && llt.rcond() > rcond_floor) {
    W = llt.solve(Xc.transpose() * Yc);
  } else {
    Mat S(Xc.rows() + (lam > 0 ? D : 0), D);
    Mat R = Mat::Zero(S.rows(), O);
    S.topRows(Xc.rows()) = Xc;
    R.topRows(Xc.rows()) = Yc;
    if (lam > 0) S.bottomRows(D) = std::sqrt(lam) * Mat::Identity(D, D);
    Eigen::ColPivHouseholderQR<Mat> qr(S);
    if (qr.rank() < D)
      throw RankDeficiency("ridge_fit: design matrix has rank " + std::to_string(qr.rank()) + " < " +
                           std::to_string(D) + " features; use a ridge parameter > 0");
    W = qr.solve(R);
  }

  RowMatrix<Scalar> out(bias ? D + 1 : D, O);
  out.topRows(D) = W;
  if (bias) out.row(D) = y_mean - x_mean * W;
  return out;
}

/// ŷ = [X 1] W, or X W without an intercept row.
template <typename DerivedX, typename DerivedW>
RowMatrix<typename DerivedX::Scalar> ridge_predict(const Eigen::MatrixBase<DerivedX>& X,
                                                   const Eigen::MatrixBase<DerivedW>& W, bool bias = true) {
  const Index D = X.cols();
  if (W.rows() != (bias ? D + 1 : D))
    throw ShapeError("ridge_predict: weights have " + std::to_string(W.rows()) + " rows for " + std::to_string(D) +
                     " features");
  RowMatrix<typename DerivedX::Scalar> Y = X * W.topRows(D);
  if (bias) Y.rowwise() += W.row(D);
  return Y;
}

}  // namespace prc
