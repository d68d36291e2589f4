#include "prc/reservoir/ridge.hpp"

namespace prc {

template RowMatrixd ridge_fit(const Eigen::MatrixBase<RowMatrixd>&, const Eigen::MatrixBase<RowMatrixd>&, double, bool);
template RowMatrixd ridge_predict(const Eigen::MatrixBase<RowMatrixd>&, const Eigen::MatrixBase<RowMatrixd>&, bool);

}  // namespace prc
