#include "ghalab/stencil.hpp"

#include <string>

#include "ghalab/errors.hpp"

namespace ghalab {

Eigen::MatrixXd fornberg_weights(double x0, const std::vector<double>& nodes, int max_order) {
  const int n = static_cast<int>(nodes.size());
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(max_order + 1, n);
  double c1 = 1.0, c4 = nodes[0] - x0;
  c(0, 0) = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, max_order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c(k, i) = c1 * (k * c(k - 1, i - 1) - c5 * c(k, i - 1)) / c2;
        c(0, i) = -c1 * c5 * c(0, i - 1) / c2;
      }
      for (int k = mn; k >= 1; --k) c(k, j) = (c4 * c(k, j) - k * c(k - 1, j)) / c3;
      c(0, j) = c4 * c(0, j) / c3;
    }
    c1 = c2;
  }
  return c;
}

CentralStencil central_stencil(int accuracy) {
  if (accuracy < 2 || accuracy > 8 || accuracy % 2 != 0)
    throw ArgumentError("stencil accuracy must be 2, 4, 6 or 8, got " + std::to_string(accuracy));
  CentralStencil s;
  s.radius = accuracy / 2;
  std::vector<double> nodes;
  for (int j = -s.radius; j <= s.radius; ++j) nodes.push_back(j);
  const Eigen::MatrixXd w = fornberg_weights(0.0, nodes, 2);
  for (int j = 0; j < w.cols(); ++j) {
    s.first.push_back(w(1, j));
    s.second.push_back(w(2, j));
  }
  return s;
}

Eigen::ArrayXd apply_stencil(const Eigen::ArrayXd& f, const std::vector<double>& w, double scale,
                             StencilBoundary boundary) {
  const Eigen::Index n = f.size();
  const int r = static_cast<int>(w.size() / 2);
  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(n);
  for (int k = -r; k <= r; ++k) {
    const double wk = w[k + r];
    if (wk == 0.0) continue;
    // out[i] += wk * f[i + k] over the indices where i + k is inside
    const Eigen::Index lo = std::max<Eigen::Index>(0, -k), hi = std::min<Eigen::Index>(n, n - k);
    if (hi > lo) out.segment(lo, hi - lo) += wk * f.segment(lo + k, hi - lo);
    if (boundary != StencilBoundary::OddAboutEnds) continue;
    // ghosts mirrored through the end samples
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::Index j = i + k;
      if (j < 0 && -j < n) out(i) -= wk * f(-j);
      if (j >= n && 2 * (n - 1) - j >= 0) out(i) -= wk * f(2 * (n - 1) - j);
    }
  }
  return out * scale;
}

Eigen::ArrayXd differentiate(const Eigen::ArrayXd& f, double h, int order, int accuracy) {
  if (order < 1 || order > 2) throw ArgumentError("derivative order must be 1 or 2");
  const CentralStencil st = central_stencil(accuracy);
  const int r = st.radius, width = 2 * r + 1;
  const Eigen::Index n = f.size();
  if (n < width) throw ArgumentError("too few samples for the stencil");
  const double scale = order == 1 ? 1.0 / h : 1.0 / (h * h);
  Eigen::ArrayXd out = apply_stencil(f, order == 1 ? st.first : st.second, scale);
  std::vector<double> nodes(width);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < width; ++j) nodes[j] = j;
    const Eigen::MatrixXd w = fornberg_weights(i, nodes, order);
    double left = 0.0, right = 0.0;
    for (int j = 0; j < width; ++j) {
      left += w(order, j) * f(j);
      // mirror image of the window at the right end
      right += w(order, j) * f(n - 1 - j);
    }
    out(i) = left * scale;
    out(n - 1 - i) = (order == 1 ? -right : right) * scale;
  }
  return out;
}

}  // namespace ghalab
