#include "ch/elliptic.hpp"

#include <Eigen/SparseLU>
#include <cmath>
#include <map>
#include <mutex>

#include "ch/quadrature.hpp"
#include "ch/stencils.hpp"

namespace ch {

namespace {

// centered stencil offsets/weights for d^m at spacing h, second order
void centered_stencil(int m, double h, std::vector<int>& offsets, std::vector<double>& weights) {
  int half = (m % 2 == 0) ? m / 2 : (m + 1) / 2;
  int count = 2 * half + 1;
  Vector nodes(count);
  for (int i = 0; i < count; ++i) nodes[i] = (i - half) * h;
  Eigen::MatrixXd w = fd_weights(0.0, nodes, m);
  offsets.resize(count);
  weights.resize(count);
  for (int i = 0; i < count; ++i) {
    offsets[i] = i - half;
    weights[i] = w(m, i);
  }
}

// stencil of A_n = sum_k (-1)^k d^{2k}, offsets -n..n
std::vector<double> an_stencil(int n, double h) {
  std::vector<double> row(2 * n + 1, 0.0);
  row[n] = 1.0;  // k = 0
  for (int k = 1; k <= n; ++k) {
    std::vector<int> off;
    std::vector<double> w;
    centered_stencil(2 * k, h, off, w);
    double sign = (k % 2 == 0) ? 1.0 : -1.0;
    for (size_t i = 0; i < off.size(); ++i) row[n + off[i]] += sign * w[i];
  }
  return row;
}

struct FactorKey {
  int order;
  int n_cells;
  BcKind bc;
  bool operator<(const FactorKey& o) const {
    if (order != o.order) return order < o.order;
    if (n_cells != o.n_cells) return n_cells < o.n_cells;
    return static_cast<int>(bc) < static_cast<int>(o.bc);
  }
};

using Factorization = Eigen::SparseLU<Eigen::SparseMatrix<double>>;

// read-mostly factorization cache, single writer under the lock
const Factorization& cached_factorization(int order, const Grid& grid, BcKind bc) {
  static std::mutex mu;
  static std::map<FactorKey, std::unique_ptr<Factorization>> cache;
  std::lock_guard<std::mutex> lock(mu);
  FactorKey key{order, grid.n_cells, bc};
  auto it = cache.find(key);
  if (it == cache.end()) {
    BandedOperator op = assemble_an(order, grid, bc);
    auto f = std::make_unique<Factorization>();
    f->compute(op.matrix);
    ensure(f->info() == Eigen::Success, "elliptic system factorization failed (singular?)");
    it = cache.emplace(key, std::move(f)).first;
  }
  return *it->second;
}

Vector banded_solve(int order, const Grid& grid, BcKind bc, const Vector& rhs) {
  const Factorization& f = cached_factorization(order, grid, bc);
  Vector sol = f.solve(rhs);
  ensure(f.info() == Eigen::Success, "elliptic solve failed");
  return sol;
}

}  // namespace

BandedOperator assemble_an(int order, const Grid& grid, BcKind bc) {
  ensure(order >= 1 && order <= 3, "operator order must be in 1..3");
  ensure(grid.n_cells >= 4 * order + 4, "grid too coarse for operator order");
  const int n = order, N = grid.n_cells, M = N + 1 + 2 * n;
  const double h = grid.h;
  // unknown column g corresponds to node index g - n (ghosts at both ends)
  auto col = [n](int node) { return node + n; };

  std::vector<Eigen::Triplet<double>> trip;
  std::vector<double> an = an_stencil(n, h);
  // operator rows, one per physical node, placed after the left boundary rows
  for (int j = 0; j <= N; ++j)
    for (int o = -n; o <= n; ++o) trip.emplace_back(n + j, col(j + o), an[o + n]);

  std::vector<int> off;
  std::vector<double> w;
  // left boundary rows occupy row indices 0..n-1
  for (int i = 0; i < n; ++i) {
    if (bc == BcKind::dirichlet_full) {
      if (i == 0) {
        trip.emplace_back(i, col(0), 1.0);
      } else {
        centered_stencil(i, h, off, w);
        for (size_t q = 0; q < off.size(); ++q) trip.emplace_back(i, col(off[q]), w[q]);
      }
    } else {
      // B_i = sum_{k=i+1}^n (-1)^{k+i} d^{2k-1-i} evaluated at x=0
      for (int k = i + 1; k <= n; ++k) {
        int m = 2 * k - 1 - i;
        double sign = ((k + i) % 2 == 0) ? 1.0 : -1.0;
        centered_stencil(m, h, off, w);
        for (size_t q = 0; q < off.size(); ++q) trip.emplace_back(i, col(off[q]), sign * w[q]);
      }
    }
  }
  // right boundary rows occupy the last n rows; plain traces for both kinds
  for (int i = 0; i < n; ++i) {
    int row = n + N + 1 + i;
    if (i == 0) {
      trip.emplace_back(row, col(N), 1.0);
    } else {
      centered_stencil(i, h, off, w);
      for (size_t q = 0; q < off.size(); ++q) trip.emplace_back(row, col(N + off[q]), w[q]);
    }
  }

  BandedOperator op;
  op.order = n;
  op.grid = grid;
  op.bc = bc;
  op.matrix.resize(M, M);
  op.matrix.setFromTriplets(trip.begin(), trip.end());
  op.matrix.makeCompressed();
  return op;
}

ScalarField green_solve_ch(const ScalarField& y, double kappa, double v_left, double v_right) {
  const Grid& g = y.grid;
  Vector Y = cumulative_trapezoid(y);
  for (int j = 0; j < g.n_nodes(); ++j) Y[j] -= kappa * g.node(j);

  ScalarField ch_y(g, Vector(g.n_nodes())), sh_y(g, Vector(g.n_nodes()));
  for (int j = 0; j < g.n_nodes(); ++j) {
    double x = g.node(j);
    ch_y.values[j] = std::cosh(x) * Y[j];
    sh_y.values[j] = std::sinh(x) * Y[j];
  }
  Vector C = cumulative_trapezoid(ch_y);
  Vector S = cumulative_trapezoid(sh_y);

  const double s1 = std::sinh(1.0), c1 = std::cosh(1.0);
  const int N = g.n_cells;
  // I(x) = int_0^x cosh(x-s) Y(s) ds splits through the addition formula;
  // the particular solution vanishing to first order at x=0 is -I(x)
  double I1 = c1 * C[N] - s1 * S[N];
  Vector out(g.n_nodes());
  for (int j = 0; j <= N; ++j) {
    double x = g.node(j);
    double Ix = std::cosh(x) * C[j] - std::sinh(x) * S[j];
    out[j] = std::cosh(x) * v_left - Ix + std::sinh(x) / s1 * (v_right - c1 * v_left + I1);
  }
  return ScalarField(g, std::move(out));
}

ScalarField solve_an(int order, const ScalarField& rhs, const std::vector<double>& traces_left,
                     const std::vector<double>& traces_right) {
  const int n = order, N = rhs.grid.n_cells;
  ensure(static_cast<int>(traces_left.size()) == n && static_cast<int>(traces_right.size()) == n,
         "need n traces per side");
  Vector b = Vector::Zero(N + 1 + 2 * n);
  for (int i = 0; i < n; ++i) b[i] = traces_left[i];
  for (int j = 0; j <= N; ++j) b[n + j] = rhs.values[j];
  for (int i = 0; i < n; ++i) b[n + N + 1 + i] = traces_right[i];
  Vector sol = banded_solve(n, rhs.grid, BcKind::dirichlet_full, b);
  return ScalarField(rhs.grid, sol.segment(n, N + 1));
}

double boundary_B(const ScalarField& f, int order, int i, int side) {
  ensure(i >= 0 && i < order, "boundary operator index must be in 0..n-1");
  double acc = 0.0;
  for (int k = i + 1; k <= order; ++k) {
    double sign = ((k + i) % 2 == 0) ? 1.0 : -1.0;
    acc += sign * endpoint_derivative(f, 2 * k - 1 - i, side);
  }
  return acc;
}

double ul_closed_form(double x) { return -std::sinh(x) + std::cosh(x) * std::tanh(1.0); }
double ur_closed_form(double x) { return -std::sinh(x) / std::cosh(1.0); }

ScalarField homogeneous_ul(const Grid& grid) { return ScalarField::from_fn(grid, ul_closed_form); }
ScalarField homogeneous_ur(const Grid& grid) { return ScalarField::from_fn(grid, ur_closed_form); }

ScalarField solve_zaremba(int order, const Grid& grid, const std::vector<double>& neumann_left) {
  const int n = order, N = grid.n_cells;
  ensure(static_cast<int>(neumann_left.size()) == n, "need n boundary values");
  Vector b = Vector::Zero(N + 1 + 2 * n);
  for (int i = 0; i < n; ++i) b[i] = neumann_left[i];
  Vector sol = banded_solve(n, grid, BcKind::zaremba_left_neumann, b);
  return ScalarField(grid, sol.segment(n, N + 1));
}

ScalarField solve_zaremba_right(int order, const Grid& grid, const std::vector<double>& neumann_right) {
  // reflect x -> 1-x: even-order operator is invariant and
  // B_i picks up the parity factor (-1)^{i+1}
  std::vector<double> reflected(neumann_right.size());
  for (size_t i = 0; i < neumann_right.size(); ++i)
    reflected[i] = ((i % 2 == 0) ? -1.0 : 1.0) * neumann_right[i];
  ScalarField w = solve_zaremba(order, grid, reflected);
  Vector rev = w.values.reverse();
  return ScalarField(grid, std::move(rev));
}

namespace {

Poly apply_an(const Poly& f, int n) {
  Poly acc = f;
  for (int k = 1; k <= n; ++k) {
    double sign = (k % 2 == 0) ? 1.0 : -1.0;
    acc = acc + f.derivative(2 * k) * sign;
  }
  return acc;
}

Poly boundary_B_poly(const Poly& f, int n, int i) {
  Poly acc;
  for (int k = i + 1; k <= n; ++k) {
    double sign = ((k + i) % 2 == 0) ? 1.0 : -1.0;
    acc = acc + f.derivative(2 * k - 1 - i) * sign;
  }
  return acc;
}

double bracket01(const Poly& p) { return p.eval(1.0) - p.eval(0.0); }

}  // namespace

IppReport verify_ipp(const Poly& f, const Poly& g, int order) {
  ensure(order >= 1 && order <= 3, "operator order must be in 1..3");
  IppReport rep;
  rep.lhs = (apply_an(f, order) * g).integral01();
  double bulk = 0.0;
  for (int j = 0; j <= order; ++j) bulk += (f.derivative(j) * g.derivative(j)).integral01();
  double boundary = 0.0;
  for (int i = 0; i < order; ++i) boundary += bracket01(boundary_B_poly(f, order, i) * g.derivative(i));
  rep.rhs = bulk + boundary;
  rep.residual = std::abs(rep.lhs - rep.rhs);
  return rep;
}

LambsReport verify_lambs(const Poly& f, const Poly& g, const Poly& w, int order) {
  ensure(order >= 1 && order <= 3, "operator order must be in 1..3");
  const int n = order;
  LambsReport rep;

  Poly wf_prime = (w * f).derivative();
  Poly wg_prime = w * g.derivative();

  double lhs = (w * apply_an(f, n) * g.derivative()).integral01();
  lhs += (wf_prime * apply_an(g, n)).integral01();
  for (int j = 0; j <= n; ++j) {
    // commutator of f -> (w f)' with the derivative stack, component j
    Poly comm1 = (w * f.derivative(j)).derivative() - wf_prime.derivative(j);
    lhs += (comm1 * g.derivative(j)).integral01();
    // commutator of the derivative stack with g -> w g', component j
    Poly comm2 = wg_prime.derivative(j) - w * g.derivative(j + 1);
    lhs -= (f.derivative(j) * comm2).integral01();
  }

  double rhs = 0.0;
  for (int i = 0; i < n; ++i) {
    rhs += bracket01(boundary_B_poly(g, n, i) * wf_prime.derivative(i));
    rhs += bracket01(boundary_B_poly(f, n, i) * wg_prime.derivative(i));
  }
  Poly stack_dot;
  for (int j = 0; j <= n; ++j) stack_dot = stack_dot + f.derivative(j) * g.derivative(j);
  rhs += bracket01(w * stack_dot);

  rep.lhs = lhs;
  rep.rhs = rhs;
  rep.residual = std::abs(lhs - rhs);

  // smallness ratio for [w, A_n]g = w A_n g - A_n(w g), order k = 2n
  Poly comm = w * apply_an(g, n) - apply_an(w * g, n);
  double num = std::sqrt((comm * comm).integral01());
  double wnorm = 0.0;
  for (int j = 0; j <= 2 * n; ++j) wnorm = std::max(wnorm, w.derivative(j).sup01());
  double gnorm_sq = 0.0;
  for (int j = 0; j <= 2 * n - 1; ++j) {
    Poly d = g.derivative(j);
    gnorm_sq += (d * d).integral01();
  }
  double den = wnorm * std::sqrt(gnorm_sq);
  rep.commutator_ratio = den > 1e-300 ? num / den : 0.0;
  return rep;
}

}  // namespace ch
