#pragma once

#include "ch/grid.hpp"

namespace ch {

// Composite trapezoid rule over the whole grid.
double trapezoid_integrate(const ScalarField& f);

// Trapezoid over a node index range [j0, j1].
double trapezoid_integrate(const ScalarField& f, int j0, int j1);

// Running integral F(x_j) = int_0^{x_j} f, trapezoid rule, F(0) = 0.
Vector cumulative_trapezoid(const ScalarField& f);

// Gauss-Legendre quadrature on [a,b], exact for polynomials of degree <= 2*points-1.
// Supported point counts: 1..12.
template <class F>
double gauss_legendre(F&& f, double a, double b, int points);

namespace detail {
// nodes on [-1,1] and weights for the requested rule
void gauss_rule(int points, const double** nodes, const double** weights);
}  // namespace detail

template <class F>
double gauss_legendre(F&& f, double a, double b, int points) {
  const double* xs;
  const double* ws;
  detail::gauss_rule(points, &xs, &ws);
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double acc = 0.0;
  for (int i = 0; i < points; ++i) acc += ws[i] * f(mid + half * xs[i]);
  return half * acc;
}

}  // namespace ch
