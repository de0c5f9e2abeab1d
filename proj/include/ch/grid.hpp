#pragma once

#include <Eigen/Dense>

#include "ch/errors.hpp"

namespace ch {

using Vector = Eigen::VectorXd;

// Uniform grid on [0,1] with n_cells intervals and n_cells+1 nodes.
struct Grid {
  int n_cells = 0;
  double h = 0.0;

  static Grid uniform(int n_cells) {
    ensure(n_cells >= 2, "grid needs at least 2 cells");
    return Grid{n_cells, 1.0 / n_cells};
  }

  int n_nodes() const { return n_cells + 1; }
  double node(int j) const { return j * h; }
  Vector nodes() const { return Vector::LinSpaced(n_nodes(), 0.0, 1.0); }

  bool operator==(const Grid& o) const { return n_cells == o.n_cells; }
};

// Nodal scalar field on a uniform grid.
struct ScalarField {
  Grid grid;
  Vector values;

  ScalarField() = default;
  ScalarField(Grid g, Vector v) : grid(g), values(std::move(v)) {
    ensure(values.size() == grid.n_nodes(), "field size does not match grid");
  }

  static ScalarField zero(Grid g) { return ScalarField(g, Vector::Zero(g.n_nodes())); }

  template <class F>
  static ScalarField from_fn(Grid g, F&& f) {
    Vector v(g.n_nodes());
    for (int j = 0; j < g.n_nodes(); ++j) v[j] = f(g.node(j));
    return ScalarField(g, std::move(v));
  }

  double max_abs() const { return values.size() ? values.cwiseAbs().maxCoeff() : 0.0; }
};

}  // namespace ch
