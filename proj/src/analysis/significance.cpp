#include <algorithm>
#include <numeric>

#include "prc/analysis/result.hpp"
#include "prc/error.hpp"

namespace prc {

Adjustment adjustment_from_string(const std::string& name) {
  if (name == "bonferroni") return Adjustment::Bonferroni;
  if (name == "fdr_bh") return Adjustment::FdrBh;
  throw ParameterError("unknown correction '" + name + "' (expected bonferroni or fdr_bh)");
}

Adjusted significance_adjust(const Eigen::VectorXd& p, Adjustment method, double alpha) {
  if (!(alpha > 0 && alpha < 1)) throw ParameterError("significance level must lie in (0, 1)");
  std::vector<Index> live;
  for (Index i = 0; i < p.size(); ++i) {
    if (std::isnan(p(i))) continue;
    if (!(p(i) >= 0 && p(i) <= 1)) throw ParameterError("p-value " + std::to_string(p(i)) + " outside [0, 1]");
    live.push_back(i);
  }
  Adjusted out{Eigen::VectorXd::Constant(p.size(), kUndefined), std::vector<bool>(static_cast<std::size_t>(p.size()), false)};
  const auto m = static_cast<double>(live.size());
  if (live.empty()) return out;

  if (method == Adjustment::Bonferroni) {
    for (Index i : live) out.p(i) = std::min(1.0, p(i) * m);
  } else {
    std::stable_sort(live.begin(), live.end(), [&](Index a, Index b) { return p(a) < p(b); });
    // Step-up: adjusted p_(i) = min over j >= i of p_(j)·m/j.
    double running = 1.0;
    for (auto k = live.size(); k-- > 0;) {
      running = std::min(running, p(live[k]) * m / static_cast<double>(k + 1));
      out.p(live[k]) = running;
    }
  }
  for (Index i = 0; i < p.size(); ++i) out.significant[static_cast<std::size_t>(i)] = out.p(i) <= alpha;
  return out;
}

RowMatrixi CorrelationResult::significant(Adjustment method, double alpha) const {
  RowMatrixi flags = RowMatrixi::Zero(p_values.rows(), p_values.cols());
  const bool pairwise = symmetric && p_values.rows() == p_values.cols();
  std::vector<std::pair<Index, Index>> cells;
  for (Index r = 0; r < p_values.rows(); ++r)
    for (Index c = pairwise ? r + 1 : 0; c < p_values.cols(); ++c) cells.emplace_back(r, c);
  Eigen::VectorXd flat(static_cast<Index>(cells.size()));
  for (std::size_t k = 0; k < cells.size(); ++k) flat(static_cast<Index>(k)) = p_values(cells[k].first, cells[k].second);
  const auto adj = significance_adjust(flat, method, alpha);
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (!adj.significant[k]) continue;
    flags(cells[k].first, cells[k].second) = 1;
    if (pairwise) flags(cells[k].second, cells[k].first) = 1;
  }
  return flags;
}

}  // namespace prc
