#pragma once

#include <vector>

#include "ch/errors.hpp"

namespace ch {

// Dense polynomial with double coefficients, lowest degree first.
// Used where integrals and derivatives must be exact up to round-off.
struct Poly {
  std::vector<double> c;

  Poly() : c{0.0} {}
  explicit Poly(std::vector<double> coeffs) : c(std::move(coeffs)) {
    if (c.empty()) c.push_back(0.0);
  }

  static Poly monomial(int degree, double coeff = 1.0);

  int degree() const { return static_cast<int>(c.size()) - 1; }
  double eval(double x) const;

  Poly derivative(int order = 1) const;
  double integral01() const;  // exact integral over [0,1]

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly operator*(double s) const;

  double sup01(int samples = 4001) const;  // sampled sup norm on [0,1]
};

}  // namespace ch
