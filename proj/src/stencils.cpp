#include "ch/stencils.hpp"

#include <algorithm>
#include <cmath>

namespace ch {

Eigen::MatrixXd fd_weights(double z, const Vector& nodes, int max_order) {
  const int n = static_cast<int>(nodes.size()) - 1;
  ensure(n >= 0 && max_order >= 0, "fd_weights needs nodes and a nonnegative order");
  ensure(max_order <= n, "not enough nodes for requested derivative order");
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n + 1, max_order + 1);
  double c1 = 1.0;
  double c4 = nodes[0] - z;
  c(0, 0) = 1.0;
  for (int i = 1; i <= n; ++i) {
    int mn = std::min(i, max_order);
    double c2 = 1.0;
    double c5 = c4;
    c4 = nodes[i] - z;
    for (int j = 0; j <= i - 1; ++j) {
      double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c(i, k) = c1 * (k * c(i - 1, k - 1) - c5 * c(i - 1, k)) / c2;
        c(i, 0) = -c1 * c5 * c(i - 1, 0) / c2;
      }
      for (int k = mn; k >= 1; --k) c(j, k) = (c4 * c(j, k) - k * c(j, k - 1)) / c3;
      c(j, 0) = c4 * c(j, 0) / c3;
    }
    c1 = c2;
  }
  // weights[k][j] layout
  return c.transpose();
}

StencilRow derivative_stencil(const Grid& grid, int j, int order) {
  ensure(order >= 1 && order <= 6, "derivative order must be in 1..6");
  ensure(grid.n_cells >= order + 2, "grid too coarse for requested derivative");
  ensure(0 <= j && j <= grid.n_cells, "node index out of range");
  const int n = grid.n_cells;
  int half = (order % 2 == 0) ? order / 2 : (order + 1) / 2;
  int start, count;
  if (j - half >= 0 && j + half <= n) {
    start = j - half;
    count = 2 * half + 1;
  } else {
    // shifted window with order+2 nodes keeps second-order accuracy
    count = order + 2;
    start = std::clamp(j - (count - 1) / 2, 0, n - count + 1);
  }
  Vector nodes(count);
  for (int i = 0; i < count; ++i) nodes[i] = grid.node(start + i);
  Eigen::MatrixXd w = fd_weights(grid.node(j), nodes, order);
  return StencilRow{start, w.row(order).transpose()};
}

ScalarField fd_derivative(const ScalarField& f, int order) {
  const Grid& g = f.grid;
  Vector out(g.n_nodes());
  for (int j = 0; j < g.n_nodes(); ++j) {
    StencilRow s = derivative_stencil(g, j, order);
    out[j] = s.weights.dot(f.values.segment(s.start, s.weights.size()));
  }
  return ScalarField(g, std::move(out));
}

double endpoint_derivative(const ScalarField& f, int order, int side) {
  int j = side < 0 ? 0 : f.grid.n_cells;
  StencilRow s = derivative_stencil(f.grid, j, order);
  return s.weights.dot(f.values.segment(s.start, s.weights.size()));
}

double interpolate(const ScalarField& f, double x) {
  const Grid& g = f.grid;
  ensure(x >= -1e-12 && x <= 1.0 + 1e-12, "interpolation point outside [0,1]");
  x = std::clamp(x, 0.0, 1.0);
  int j = std::min(static_cast<int>(x / g.h), g.n_cells - 1);
  double u = x / g.h - j;  // local coordinate in [0,1]
  if (j >= 1 && j + 2 <= g.n_cells) {
    // cubic through nodes j-1..j+2, Lagrange form in u
    double fm = f.values[j - 1], f0 = f.values[j], f1 = f.values[j + 1], f2 = f.values[j + 2];
    double a = -u * (u - 1.0) * (u - 2.0) / 6.0;
    double b = (u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0;
    double c = -(u + 1.0) * u * (u - 2.0) / 2.0;
    double d = (u + 1.0) * u * (u - 1.0) / 6.0;
    return a * fm + b * f0 + c * f1 + d * f2;
  }
  return (1.0 - u) * f.values[j] + u * f.values[j + 1];
}

}  // namespace ch
