#include "ch/poly.hpp"

#include <algorithm>
#include <cmath>

namespace ch {

Poly Poly::monomial(int degree, double coeff) {
  ensure(degree >= 0, "monomial degree must be nonnegative");
  std::vector<double> c(degree + 1, 0.0);
  c[degree] = coeff;
  return Poly(std::move(c));
}

double Poly::eval(double x) const {
  double r = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * x + *it;
  return r;
}

Poly Poly::derivative(int order) const {
  ensure(order >= 0, "derivative order must be nonnegative");
  Poly p = *this;
  for (int k = 0; k < order; ++k) {
    if (p.degree() == 0) {
      p.c = {0.0};
      continue;
    }
    std::vector<double> d(p.c.size() - 1);
    for (size_t i = 1; i < p.c.size(); ++i) d[i - 1] = i * p.c[i];
    p.c = std::move(d);
  }
  return p;
}

double Poly::integral01() const {
  double acc = 0.0;
  for (size_t k = 0; k < c.size(); ++k) acc += c[k] / (k + 1.0);
  return acc;
}

Poly Poly::operator+(const Poly& o) const {
  std::vector<double> r(std::max(c.size(), o.c.size()), 0.0);
  for (size_t i = 0; i < c.size(); ++i) r[i] += c[i];
  for (size_t i = 0; i < o.c.size(); ++i) r[i] += o.c[i];
  return Poly(std::move(r));
}

Poly Poly::operator-(const Poly& o) const { return *this + o * -1.0; }

Poly Poly::operator*(const Poly& o) const {
  std::vector<double> r(c.size() + o.c.size() - 1, 0.0);
  for (size_t i = 0; i < c.size(); ++i)
    for (size_t j = 0; j < o.c.size(); ++j) r[i + j] += c[i] * o.c[j];
  return Poly(std::move(r));
}

Poly Poly::operator*(double s) const {
  Poly p = *this;
  for (double& v : p.c) v *= s;
  return p;
}

double Poly::sup01(int samples) const {
  double worst = 0.0;
  for (int k = 0; k < samples; ++k) worst = std::max(worst, std::abs(eval(double(k) / (samples - 1))));
  return worst;
}

}  // namespace ch
