#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace prc {

using Index = Eigen::Index;

// N×3 nodal arrays (positions, velocities, forces). Row-major so a record
// frame maps directly onto a [N, 3] slab.
template <typename Scalar>
using NodeMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, 3, Eigen::RowMajor>;
using NodeMatrixd = NodeMatrix<double>;

template <typename Scalar>
using RowMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowMatrixd = RowMatrix<double>;
using RowMatrixi = RowMatrix<std::int64_t>;

}  // namespace prc
