#pragma once

#include <cstring>

#include <Eigen/Core>

namespace prc {

// Bitwise equality; NaN sentinels compare equal to themselves.
inline bool bit_equal(double a, double b) { return std::memcmp(&a, &b, sizeof(double)) == 0; }

template <typename A, typename B>
bool bit_equal(const Eigen::DenseBase<A>& a, const Eigen::DenseBase<B>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c)
      if (!bit_equal(static_cast<double>(a(r, c)), static_cast<double>(b(r, c)))) return false;
  return true;
}

}  // namespace prc
