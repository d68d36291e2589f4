#include "prc/analysis/nonparametric.hpp"

#include <algorithm>
#include <cstring>
#include <numeric>
#include <random>

#include "prc/analysis/linear.hpp"
#include "prc/error.hpp"

namespace prc {

namespace {

void check_pair(const Eigen::VectorXd& x, const Eigen::VectorXd& y, Index min_rows) {
  if (x.size() != y.size())
    throw ShapeError("inputs have " + std::to_string(x.size()) + " and " + std::to_string(y.size()) + " samples");
  if (x.size() < min_rows) throw ParameterError("need at least " + std::to_string(min_rows) + " samples");
  if (!x.allFinite() || !y.allFinite()) throw ParameterError("dependence inputs must be finite");
}

bool is_constant(const Eigen::VectorXd& v) { return v.size() == 0 || v.maxCoeff() == v.minCoeff(); }

Eigen::VectorXd strided(const Eigen::VectorXd& v, Index stride) {
  if (stride == 1) return v;
  Eigen::VectorXd out((v.size() + stride - 1) / stride);
  for (Index i = 0; i < out.size(); ++i) out(i) = v(i * stride);
  return out;
}

Index stride_for(Index T) { return (T + kPairwiseSampleCap - 1) / kPairwiseSampleCap; }

// Merge sort counting strict inversions.
std::int64_t sort_count_swaps(std::vector<double>& v, std::vector<double>& buf, std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::int64_t swaps = sort_count_swaps(v, buf, lo, mid) + sort_count_swaps(v, buf, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      swaps += static_cast<std::int64_t>(mid - i);
      buf[k++] = v[j++];
    } else {
      buf[k++] = v[i++];
    }
  }
  while (i < mid) buf[k++] = v[i++];
  while (j < hi) buf[k++] = v[j++];
  std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo), buf.begin() + static_cast<std::ptrdiff_t>(hi),
            v.begin() + static_cast<std::ptrdiff_t>(lo));
  return swaps;
}

struct TieSums {
  double pairs = 0, v1 = 0, v2 = 0, v3 = 0;  // Σt(t-1)/2, Σt(t-1)(2t+5), Σt(t-1)(t-2), Σt(t-1)
  void add(double t) {
    pairs += t * (t - 1) / 2;
    v1 += t * (t - 1) * (2 * t + 5);
    v2 += t * (t - 1) * (t - 2);
    v3 += t * (t - 1);
  }
};

struct KendallParts {
  double tau = kUndefined;
  double p = kUndefined;
};

KendallParts kendall(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  const auto n = static_cast<std::size_t>(x.size());
  if (is_constant(x) || is_constant(y)) return {};
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto ia = static_cast<Index>(a), ib = static_cast<Index>(b);
    return x(ia) < x(ib) || (x(ia) == x(ib) && y(ia) < y(ib));
  });
  TieSums tx, ty;
  double joint = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && x(static_cast<Index>(order[j])) == x(static_cast<Index>(order[i]))) ++j;
    tx.add(static_cast<double>(j - i));
    for (std::size_t a = i; a < j;) {
      std::size_t b = a;
      while (b < j && y(static_cast<Index>(order[b])) == y(static_cast<Index>(order[a]))) ++b;
      joint += static_cast<double>(b - a) * static_cast<double>(b - a - 1) / 2;
      a = b;
    }
    i = j;
  }
  std::vector<double> ys(n), buf(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = y(static_cast<Index>(order[i]));
  const auto swaps = static_cast<double>(sort_count_swaps(ys, buf, 0, n));
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && ys[j] == ys[i]) ++j;
    ty.add(static_cast<double>(j - i));
    i = j;
  }
  const double dn = static_cast<double>(n), n0 = dn * (dn - 1) / 2;
  const double S = n0 - tx.pairs - ty.pairs + joint - 2 * swaps;
  KendallParts out;
  out.tau = std::clamp(S / std::sqrt((n0 - tx.pairs) * (n0 - ty.pairs)), -1.0, 1.0);
  // Tie-corrected normal approximation of S.
  double var = (dn * (dn - 1) * (2 * dn + 5) - tx.v1 - ty.v1) / 18.0;
  if (n > 2) var += tx.v2 * ty.v2 / (9.0 * dn * (dn - 1) * (dn - 2));
  var += tx.v3 * ty.v3 / (2.0 * dn * (dn - 1));
  out.p = var > 0 ? std::erfc(std::abs(S) / std::sqrt(2.0 * var)) : kUndefined;
  return out;
}

// Row means of |v_k − v_l| in O(T log T) from the sorted values.
Eigen::VectorXd distance_row_means(const Eigen::VectorXd& v) {
  const Index T = v.size();
  std::vector<Index> order(static_cast<std::size_t>(T));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Index a, Index b) { return v(a) < v(b); });
  Eigen::VectorXd prefix(T + 1);
  prefix(0) = 0;
  for (Index i = 0; i < T; ++i) prefix(i + 1) = prefix(i) + v(order[static_cast<std::size_t>(i)]);
  Eigen::VectorXd out(T);
  for (Index i = 0; i < T; ++i) {
    const double vi = v(order[static_cast<std::size_t>(i)]);
    const double below = vi * static_cast<double>(i) - prefix(i);
    const double above = (prefix(T) - prefix(i + 1)) - vi * static_cast<double>(T - i - 1);
    out(order[static_cast<std::size_t>(i)]) = (below + above) / static_cast<double>(T);
  }
  return out;
}

// Σ_kl Ã_kl B̃_kl for doubly centred kernels given by callables.
template <typename KA, typename KB>
double centred_product(Index T, KA ka, const Eigen::VectorXd& ra, double ga, KB kb, const Eigen::VectorXd& rb,
                       double gb) {
  double total = 0;
  for (Index k = 0; k < T; ++k) {
    double row = 0;
    for (Index l = 0; l < T; ++l) row += (ka(k, l) - ra(k) - ra(l) + ga) * (kb(k, l) - rb(k) - rb(l) + gb);
    total += row;
  }
  return total;
}

std::uint64_t bits(double v) {
  std::uint64_t b;
  std::memcpy(&b, &v, sizeof b);
  return b;
}

double from_bits(std::uint64_t b) {
  double v;
  std::memcpy(&v, &b, sizeof v);
  return v;
}

// Number of pairs k < l with s_l − s_k <= d on sorted s.
std::int64_t pairs_within(const std::vector<double>& s, double d) {
  std::int64_t count = 0;
  std::size_t lo = 0;
  for (std::size_t hi = 0; hi < s.size(); ++hi) {
    while (s[hi] - s[lo] > d) ++lo;
    count += static_cast<std::int64_t>(hi - lo);
  }
  return count;
}

// k-th smallest (0-based) pairwise difference by bisection on the bit
// pattern of non-negative doubles, which orders like the values.
double kth_pairwise_difference(const std::vector<double>& s, std::int64_t k) {
  std::uint64_t lo = 0, hi = bits(s.back() - s.front());
  while (lo < hi) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (pairs_within(s, from_bits(mid)) >= k + 1)
      hi = mid;
    else
      lo = mid + 1;
  }
  return from_bits(lo);
}

struct Rbf {
  const Eigen::VectorXd& v;
  double inv;  // 1 / (2σ²)
  double operator()(Index k, Index l) const {
    const double d = v(k) - v(l);
    return std::exp(-d * d * inv);
  }
};

Eigen::VectorXd kernel_row_means(const Rbf& K, Index T) {
  Eigen::VectorXd out(T);
  for (Index k = 0; k < T; ++k) {
    double s = 0;
    for (Index l = 0; l < T; ++l) s += K(k, l);
    out(k) = s / static_cast<double>(T);
  }
  return out;
}

}  // namespace

Eigen::VectorXd average_ranks(const Eigen::VectorXd& v) {
  const Index T = v.size();
  std::vector<Index> order(static_cast<std::size_t>(T));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return v(a) < v(b); });
  Eigen::VectorXd r(T);
  for (Index i = 0; i < T;) {
    Index j = i;
    while (j < T && v(order[static_cast<std::size_t>(j)]) == v(order[static_cast<std::size_t>(i)])) ++j;
    const double rank = 0.5 * static_cast<double>(i + j - 1) + 1.0;
    for (Index k = i; k < j; ++k) r(order[static_cast<std::size_t>(k)]) = rank;
    i = j;
  }
  return r;
}

double kendall_tau_b(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  check_pair(x, y, 2);
  return kendall(x, y).tau;
}

RankDependence rank_dependence(const Eigen::VectorXd& x, const RowMatrixd& Y) {
  if (x.size() != Y.rows()) throw ShapeError("input and channel lengths differ");
  if (x.size() < 3) throw ParameterError("need at least 3 samples");
  if (!x.allFinite() || !Y.allFinite()) throw ParameterError("dependence inputs must be finite");
  const Index N = Y.cols();
  RowMatrixd ranks(Y.rows(), N);
  for (Index i = 0; i < N; ++i) ranks.col(i) = average_ranks(Y.col(i));
  RankDependence out;
  out.spearman = pearson_channels(average_ranks(x), ranks);
  out.spearman.metric = "spearman";
  out.kendall.metric = "kendall_tau_b";
  out.kendall.values.resize(1, N);
  out.kendall.p_values.resize(1, N);
  for (Index i = 0; i < N; ++i) {
    const auto k = kendall(x, Y.col(i));
    out.kendall.values(0, i) = k.tau;
    out.kendall.p_values(0, i) = k.p;
  }
  return out;
}

PairwiseStatistic distance_correlation(const Eigen::VectorXd& x_in, const Eigen::VectorXd& y_in) {
  check_pair(x_in, y_in, 4);
  PairwiseStatistic out;
  out.stride = stride_for(x_in.size());
  const Eigen::VectorXd x = strided(x_in, out.stride), y = strided(y_in, out.stride);
  if (is_constant(x) || is_constant(y)) {
    out.note = "constant input: distance correlation set to 0";
    return out;
  }
  const Index T = x.size();
  const Eigen::VectorXd ax = distance_row_means(x), ay = distance_row_means(y);
  const double gx = ax.mean(), gy = ay.mean();
  auto dx = [&](Index k, Index l) { return std::abs(x(k) - x(l)); };
  auto dy = [&](Index k, Index l) { return std::abs(y(k) - y(l)); };
  const double xy = centred_product(T, dx, ax, gx, dy, ay, gy);
  const double xx = centred_product(T, dx, ax, gx, dx, ax, gx);
  const double yy = centred_product(T, dy, ay, gy, dy, ay, gy);
  // dCor² = dCov²(x,y) / √(dCov²(x,x) dCov²(y,y)); the 1/T² factors cancel.
  out.value = std::sqrt(std::clamp(std::max(0.0, xy) / std::sqrt(xx * yy), 0.0, 1.0));
  return out;
}

double median_pairwise_distance(const Eigen::VectorXd& x) {
  if (x.size() < 2) throw ParameterError("median distance needs at least 2 samples");
  std::vector<double> s(x.data(), x.data() + x.size());
  std::sort(s.begin(), s.end());
  const auto n = static_cast<std::int64_t>(s.size());
  const std::int64_t m = n * (n - 1) / 2;
  if (m % 2 == 1) return kth_pairwise_difference(s, m / 2);
  return 0.5 * (kth_pairwise_difference(s, m / 2 - 1) + kth_pairwise_difference(s, m / 2));
}

namespace {

struct HsicSetup {
  Eigen::VectorXd x, y;
  double sx = 0, sy = 0;
  Index stride = 1;
};

HsicSetup hsic_setup(const Eigen::VectorXd& x_in, const Eigen::VectorXd& y_in) {
  check_pair(x_in, y_in, 4);
  HsicSetup s;
  s.stride = stride_for(x_in.size());
  s.x = strided(x_in, s.stride);
  s.y = strided(y_in, s.stride);
  s.sx = median_pairwise_distance(s.x);
  s.sy = median_pairwise_distance(s.y);
  return s;
}

}  // namespace

PairwiseStatistic hsic(const Eigen::VectorXd& x_in, const Eigen::VectorXd& y_in) {
  const auto s = hsic_setup(x_in, y_in);
  PairwiseStatistic out;
  out.stride = s.stride;
  if (s.sx == 0.0 || s.sy == 0.0) {
    out.note = "zero median distance: HSIC set to 0";
    return out;
  }
  const Index T = s.x.size();
  const Rbf K{s.x, 0.5 / (s.sx * s.sx)}, L{s.y, 0.5 / (s.sy * s.sy)};
  const Eigen::VectorXd rk = kernel_row_means(K, T);
  // tr(KHLH) = Σ (HKH)_kl L_kl, so only K needs centring.
  double total = 0;
  const double gk = rk.mean();
  for (Index k = 0; k < T; ++k)
    for (Index l = 0; l < T; ++l) total += (K(k, l) - rk(k) - rk(l) + gk) * L(k, l);
  out.value = std::max(0.0, total / static_cast<double>(T * T));
  return out;
}

PermutationTest hsic_permutation_test(const Eigen::VectorXd& x_in, const Eigen::VectorXd& y_in, int shuffles,
                                      std::uint64_t seed, double quantile) {
  if (shuffles < 1) throw ParameterError("permutation test needs at least one shuffle");
  if (!(quantile > 0 && quantile < 1)) throw ParameterError("quantile must lie in (0, 1)");
  const auto s = hsic_setup(x_in, y_in);
  PermutationTest out;
  out.null = Eigen::VectorXd::Zero(shuffles);
  if (s.sx == 0.0 || s.sy == 0.0) return out;
  const Index T = s.x.size();
  const Rbf K{s.x, 0.5 / (s.sx * s.sx)}, L{s.y, 0.5 / (s.sy * s.sy)};
  // Materialized once; permutations only re-index L.
  Eigen::MatrixXd Kc(T, T), Lm(T, T);
  for (Index l = 0; l < T; ++l)
    for (Index k = 0; k < T; ++k) {
      Kc(k, l) = K(k, l);
      Lm(k, l) = L(k, l);
    }
  const Eigen::VectorXd rk = Kc.colwise().mean().transpose();
  const double gk = rk.mean();
  Kc.colwise() -= rk;
  Kc.rowwise() -= rk.transpose();
  Kc.array() += gk;
  const double norm = static_cast<double>(T * T);
  out.statistic = std::max(0.0, Kc.cwiseProduct(Lm).sum() / norm);

  std::mt19937_64 rng(seed);
  std::vector<Index> perm(static_cast<std::size_t>(T));
  std::iota(perm.begin(), perm.end(), 0);
  Index exceed = 0;
  for (int b = 0; b < shuffles; ++b) {
    std::shuffle(perm.begin(), perm.end(), rng);
    double total = 0;
    for (Index l = 0; l < T; ++l) {
      const auto pl = perm[static_cast<std::size_t>(l)];
      for (Index k = 0; k < T; ++k) total += Kc(k, l) * Lm(perm[static_cast<std::size_t>(k)], pl);
    }
    out.null(b) = std::max(0.0, total / norm);
    exceed += out.null(b) >= out.statistic;
  }
  std::vector<double> sorted(out.null.data(), out.null.data() + shuffles);
  std::sort(sorted.begin(), sorted.end());
  // Linear interpolation between order statistics.
  const double pos = quantile * static_cast<double>(shuffles - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  out.threshold = sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
  out.p_value = static_cast<double>(1 + exceed) / static_cast<double>(1 + shuffles);
  return out;
}

namespace {

template <typename Fn>
CorrelationResult per_channel(const std::string& metric, const Eigen::VectorXd& x, const RowMatrixd& Y, Fn fn) {
  if (x.size() != Y.rows()) throw ShapeError("input and channel lengths differ");
  CorrelationResult r;
  r.metric = metric;
  r.values.resize(1, Y.cols());
  Index stride = 1;
  for (Index i = 0; i < Y.cols(); ++i) {
    const auto s = fn(x, Eigen::VectorXd(Y.col(i)));
    r.values(0, i) = s.value;
    stride = s.stride;
    if (!s.note.empty()) r.notes.push_back("channel " + std::to_string(i) + ": " + s.note);
  }
  r.metadata["stride"] = static_cast<double>(stride);
  return r;
}

}  // namespace

CorrelationResult distance_correlation_channels(const Eigen::VectorXd& x, const RowMatrixd& Y) {
  return per_channel("dcor", x, Y, distance_correlation);
}

CorrelationResult hsic_channels(const Eigen::VectorXd& x, const RowMatrixd& Y) {
  return per_channel("hsic", x, Y, hsic);
}

}  // namespace prc
