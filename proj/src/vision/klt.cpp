#include "prc/vision/klt.hpp"

#include <cmath>

#include "prc/error.hpp"
#include "prc/vision/pyramid.hpp"

namespace prc {

void KltConfig::check() const {
  if (window < 3 || window % 2 == 0) throw ParameterError("KLT window must be odd and >= 3");
  if (max_level < 0) throw ParameterError("KLT max_level must be >= 0");
  if (max_iterations < 1) throw ParameterError("KLT max_iterations must be >= 1");
  if (!(fb_threshold > 0)) throw ParameterError("fb_threshold must be > 0");
  if (!(epsilon > 0)) throw ParameterError("KLT epsilon must be > 0");
}

namespace {

struct Window {
  Eigen::ArrayXd values, gx, gy;
};

Window sample_template(const Image& img, double cx, double cy, int r) {
  const int n = 2 * r + 1;
  Window w{Eigen::ArrayXd(n * n), Eigen::ArrayXd(n * n), Eigen::ArrayXd(n * n)};
  int k = 0;
  for (int dy = -r; dy <= r; ++dy)
    for (int dx = -r; dx <= r; ++dx, ++k) {
      const double x = cx + dx, y = cy + dy;
      w.values(k) = sample_bilinear(img, x, y);
      w.gx(k) = 0.5 * (sample_bilinear(img, x + 1, y) - sample_bilinear(img, x - 1, y));
      w.gy(k) = 0.5 * (sample_bilinear(img, x, y + 1) - sample_bilinear(img, x, y - 1));
    }
  return w;
}

Eigen::ArrayXd sample_window(const Image& img, double cx, double cy, int r) {
  const int n = 2 * r + 1;
  Eigen::ArrayXd out(n * n);
  int k = 0;
  for (int dy = -r; dy <= r; ++dy)
    for (int dx = -r; dx <= r; ++dx, ++k) out(k) = sample_bilinear(img, cx + dx, cy + dy);
  return out;
}

}  // namespace

KltResult klt_track_pair(const std::vector<Image>& P1, const std::vector<Image>& P2, const RowMatrixd& points,
                         const KltConfig& cfg) {
  cfg.check();
  if (P1.empty() || P2.empty() || P1[0].rows() != P2[0].rows() || P1[0].cols() != P2[0].cols())
    throw ShapeError("klt_track_pair: images differ in size");
  const int r = cfg.window / 2;
  const int levels = static_cast<int>(std::min(P1.size(), P2.size()));
  const Index F = points.rows();
  KltResult out;
  out.displacements = RowMatrixd::Zero(F, 2);
  out.flags.assign(static_cast<std::size_t>(F), KltFlag::Converged);
  out.residuals = Eigen::VectorXd::Zero(F);

  for (Index i = 0; i < F; ++i) {
    Eigen::Vector2d g = Eigen::Vector2d::Zero();
    KltFlag flag = KltFlag::Converged;
    for (int L = levels - 1; L >= 0; --L) {
      const double s = std::ldexp(1.0, -L);
      const double ux = points(i, 0) * s, uy = points(i, 1) * s;
      const Window t = sample_template(P1[static_cast<std::size_t>(L)], ux, uy, r);
      Eigen::Matrix2d G;
      G << (t.gx * t.gx).sum(), (t.gx * t.gy).sum(), (t.gx * t.gy).sum(), (t.gy * t.gy).sum();
      const double area = static_cast<double>(t.values.size());
      const double lmin = 0.5 * (G(0, 0) + G(1, 1)) -
                          std::sqrt(0.25 * (G(0, 0) - G(1, 1)) * (G(0, 0) - G(1, 1)) + G(0, 1) * G(0, 1));
      if (!(lmin / area > cfg.min_eigen)) {
        if (L == 0) flag = KltFlag::Singular;
        if (L > 0) {
          g = 2.0 * g;
          continue;
        }
        break;
      }
      const Eigen::Matrix2d Ginv = G.inverse();
      Eigen::Vector2d nu = Eigen::Vector2d::Zero();
      bool settled = false;
      for (int it = 0; it < cfg.max_iterations; ++it) {
        const Eigen::ArrayXd moved =
            sample_window(P2[static_cast<std::size_t>(L)], ux + g.x() + nu.x(), uy + g.y() + nu.y(), r);
        const Eigen::ArrayXd diff = t.values - moved;
        const Eigen::Vector2d b((diff * t.gx).sum(), (diff * t.gy).sum());
        const Eigen::Vector2d eta = Ginv * b;
        nu += eta;
        if (!nu.allFinite()) break;
        if (eta.norm() < cfg.epsilon) {
          settled = true;
          break;
        }
      }
      if (L == 0 && !settled) flag = KltFlag::MaxIterations;
      if (!nu.allFinite()) nu.setZero();
      g = L > 0 ? Eigen::Vector2d(2.0 * (g + nu)) : Eigen::Vector2d(g + nu);
      if (L == 0) {
        const Eigen::ArrayXd moved = sample_window(P2[0], points(i, 0) + g.x(), points(i, 1) + g.y(), r);
        const double contrast = std::sqrt((t.values - t.values.mean()).square().mean());
        const double rms = std::sqrt((t.values - moved).square().mean());
        out.residuals(i) = contrast > 0 ? rms / contrast : (rms > 0 ? INFINITY : 0.0);
        if (flag == KltFlag::Converged && out.residuals(i) > cfg.max_residual) flag = KltFlag::LargeResidual;
      }
    }
    out.displacements.row(i) = g.transpose();
    out.flags[static_cast<std::size_t>(i)] = flag;
  }
  return out;
}

KltResult klt_track_pair(const Image& I1, const Image& I2, const RowMatrixd& points, const KltConfig& cfg) {
  cfg.check();
  if (I1.rows() != I2.rows() || I1.cols() != I2.cols()) throw ShapeError("klt_track_pair: images differ in size");
  return klt_track_pair(build_pyramid(I1, cfg.max_level), build_pyramid(I2, cfg.max_level), points, cfg);
}

}  // namespace prc
