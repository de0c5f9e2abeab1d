#pragma once

#include <Eigen/Sparse>
#include <memory>
#include <vector>

#include "ch/grid.hpp"
#include "ch/poly.hpp"

namespace ch {

enum class BcKind { dirichlet_full, zaremba_left_neumann };

// Collocation matrix for the operator sum_{k=0}^n (-d^2/dx^2)^k on the
// ghost-extended node set x_{-n}..x_{N+n}: one operator row per physical
// node plus n boundary rows per side closing the system.
struct BandedOperator {
  int order = 1;
  Grid grid;
  BcKind bc = BcKind::dirichlet_full;
  Eigen::SparseMatrix<double> matrix;

  int ghosts() const { return order; }
  int size() const { return grid.n_nodes() + 2 * order; }
};

BandedOperator assemble_an(int order, const Grid& grid, BcKind bc);

// Resolvent of the second-order problem (1 - d^2/dx^2) v = y - kappa with
// Dirichlet data v(0)=v_left, v(1)=v_right, evaluated through the explicit
// kernel formula with running trapezoid integrals.
ScalarField green_solve_ch(const ScalarField& y, double kappa, double v_left, double v_right);

// Banded solve of A_n v = rhs with traces d^i v prescribed at both ends,
// i = 0..n-1. Boundary rows are satisfied exactly by the solve.
ScalarField solve_an(int order, const ScalarField& rhs, const std::vector<double>& traces_left,
                     const std::vector<double>& traces_right);

// Boundary operator value B_i(f) at one endpoint (side < 0: x=0, else x=1),
// B_i = sum_{k=i+1}^n (-1)^{k+i} d^{2k-1-i}, one-sided second-order stencils.
double boundary_B(const ScalarField& f, int order, int i, int side);

// Closed-form boundary-layer profiles for the second-order operator.
ScalarField homogeneous_ul(const Grid& grid);
ScalarField homogeneous_ur(const Grid& grid);
double ul_closed_form(double x);
double ur_closed_form(double x);

// Mixed problem: A_n w = 0, B_i(w)(0) = neumann_left[i], d^i w(1) = 0.
ScalarField solve_zaremba(int order, const Grid& grid, const std::vector<double>& neumann_left);

// Mirrored mixed problem: A_n w = 0, B_i(w)(1) = neumann_right[i], d^i w(0) = 0.
// Reduced to solve_zaremba by the reflection x -> 1-x.
ScalarField solve_zaremba_right(int order, const Grid& grid, const std::vector<double>& neumann_right);

// Iterated integration-by-parts identity for polynomial data:
// int A_n(f) g  =  sum_j int f^(j) g^(j)  +  sum_i [B_i(f) S_i(g)]_0^1.
struct IppReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
};
IppReport verify_ipp(const Poly& f, const Poly& g, int order);

// Product-rule identity coupling A_n, the derivative stack and a weight w,
// checked in exact polynomial arithmetic; also reports the commutator
// smallness ratio ||[w,A_n]g|| / (||w||_{W^{2n,inf}} ||g||_{H^{2n-1}}).
struct LambsReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  double commutator_ratio = 0.0;
};
LambsReport verify_lambs(const Poly& f, const Poly& g, const Poly& w, int order);

}  // namespace ch
