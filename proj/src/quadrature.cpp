#include "ch/quadrature.hpp"

#include <cmath>

namespace ch {

double trapezoid_integrate(const ScalarField& f) { return trapezoid_integrate(f, 0, f.grid.n_cells); }

double trapezoid_integrate(const ScalarField& f, int j0, int j1) {
  ensure(0 <= j0 && j0 <= j1 && j1 <= f.grid.n_cells, "integration range out of grid");
  if (j0 == j1) return 0.0;
  double acc = 0.5 * (f.values[j0] + f.values[j1]);
  for (int j = j0 + 1; j < j1; ++j) acc += f.values[j];
  return acc * f.grid.h;
}

Vector cumulative_trapezoid(const ScalarField& f) {
  Vector out(f.grid.n_nodes());
  out[0] = 0.0;
  for (int j = 1; j < f.grid.n_nodes(); ++j)
    out[j] = out[j - 1] + 0.5 * f.grid.h * (f.values[j - 1] + f.values[j]);
  return out;
}

namespace detail {

// Gauss-Legendre nodes/weights on [-1,1], computed once by Newton iteration
// on the Legendre polynomial.
namespace {

struct Rule {
  std::vector<double> x, w;
};

Rule make_rule(int n) {
  Rule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < n; ++i) {
    // Chebyshev-like initial guess for the i-th root
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      // evaluate P_n and derivative by recurrence
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    double dp = n * (x * p1 - p0) / (x * x - 1.0);
    r.x[i] = x;
    r.w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

}  // namespace

void gauss_rule(int points, const double** nodes, const double** weights) {
  ensure(points >= 1 && points <= 12, "gauss rule supports 1..12 points");
  static std::vector<Rule> cache = [] {
    std::vector<Rule> rules;
    for (int n = 1; n <= 12; ++n) rules.push_back(make_rule(n));
    return rules;
  }();
  *nodes = cache[points - 1].x.data();
  *weights = cache[points - 1].w.data();
}

}  // namespace detail

}  // namespace ch
