#include "prc/analysis/legendre.hpp"

#include <boost/math/special_functions/legendre.hpp>

#include "prc/error.hpp"

namespace prc {

double normalized_legendre(int n, double x) {
  if (n < 0) throw ParameterError("Legendre degree must be >= 0");
  return std::sqrt(2.0 * n + 1.0) * boost::math::legendre_p(n, x);
}

RowMatrixi exponent_basis(Index tau_s, Index n_s) {
  if (tau_s < 0 || n_s < 1) throw ParameterError("basis needs tau_s >= 0 and n_s >= 1");
  const Index slots = tau_s + 1;
  std::vector<std::vector<Index>> rows;
  for (Index d = 1; d <= n_s; ++d) {
    // Non-decreasing slot lists of length d in lexicographic order.
    std::vector<Index> pick(static_cast<std::size_t>(d), 0);
    while (true) {
      rows.push_back(pick);
      Index k = d - 1;
      while (k >= 0 && pick[static_cast<std::size_t>(k)] == slots - 1) --k;
      if (k < 0) break;
      const Index v = pick[static_cast<std::size_t>(k)] + 1;
      for (Index m = k; m < d; ++m) pick[static_cast<std::size_t>(m)] = v;
    }
  }
  RowMatrixi out = RowMatrixi::Zero(static_cast<Index>(rows.size()), slots);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (Index s : rows[r]) ++out(static_cast<Index>(r), s);
  return out;
}

LegendreBasis legendre_target_basis(const Eigen::VectorXd& u, Index tau_s, Index n_s, Index k_delay) {
  if (k_delay < 1) throw ParameterError("k_delay must be >= 1");
  if (!u.allFinite()) throw ParameterError("basis input must be finite");
  LegendreBasis b;
  b.tau_s = tau_s;
  b.n_s = n_s;
  b.k_delay = k_delay;
  b.exponents = exponent_basis(tau_s, n_s);
  b.offset = tau_s * k_delay;
  const Index T = u.size();
  if (T <= b.offset) throw ParameterError("input shorter than the basis history of " + std::to_string(b.offset) + " samples");
  const double lo = u.minCoeff(), hi = u.maxCoeff();
  if (!(hi > lo)) throw DegeneracyError("basis input is constant; cannot rescale to the Legendre domain");

  // table(n, t) = P̃_n(u_leg(t)).
  RowMatrixd table(n_s + 1, T);
  for (Index t = 0; t < T; ++t) {
    const double x = std::clamp(2.0 * (u(t) - lo) / (hi - lo) - 1.0, -1.0, 1.0);
    for (Index n = 0; n <= n_s; ++n) table(n, t) = normalized_legendre(static_cast<int>(n), x);
  }
  const Index R = b.exponents.rows(), rows = T - b.offset;
  b.degree.resize(R);
  b.targets = RowMatrixd::Ones(rows, R);
  for (Index r = 0; r < R; ++r) {
    b.degree(r) = static_cast<double>(b.exponents.row(r).sum());
    for (Index j = 0; j <= tau_s; ++j) {
      const auto a = b.exponents(r, j);
      if (a == 0) continue;
      for (Index i = 0; i < rows; ++i) b.targets(i, r) *= table(a, b.offset + i - j * k_delay);
    }
  }
  return b;
}

}  // namespace prc
