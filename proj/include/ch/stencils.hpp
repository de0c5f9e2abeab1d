#pragma once

#include "ch/grid.hpp"

namespace ch {

// Finite-difference weights after Fornberg: weights[k][j] reproduces the k-th
// derivative at z from samples at nodes[j], exactly for polynomials of degree
// <= nodes.size()-1.
Eigen::MatrixXd fd_weights(double z, const Vector& nodes, int max_order);

// Stencil (start node index + weights) approximating the m-th derivative at
// node j to second order: centered in the interior, shifted near the ends.
struct StencilRow {
  int start = 0;
  Vector weights;
};
StencilRow derivative_stencil(const Grid& grid, int j, int order);

// Nodal m-th derivative of a field, second order accurate, exact on
// polynomials of degree <= order+1. Requires n_cells >= order+2.
ScalarField fd_derivative(const ScalarField& f, int order);

// m-th derivative at one endpoint (side < 0 for x=0, side > 0 for x=1).
double endpoint_derivative(const ScalarField& f, int order, int side);

// Local interpolation: cubic on a centered 4-node window, linear in the
// first and last cell. Reproduces nodal values exactly.
double interpolate(const ScalarField& f, double x);

}  // namespace ch
