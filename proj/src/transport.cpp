#include "ch/transport.hpp"

#include <algorithm>
#include <cmath>

#include "ch/errors.hpp"
#include "ch/stencils.hpp"

namespace ch {

VelocityHistory::VelocityHistory(std::vector<double> times, std::vector<ScalarField> fields)
    : times_(std::move(times)), v_(std::move(fields)) {
  ensure(times_.size() >= 2 && times_.size() == v_.size(), "history needs >= 2 snapshots");
  for (size_t k = 1; k < times_.size(); ++k) ensure(times_[k] > times_[k - 1], "snapshot times must increase");
  for (size_t k = 1; k < v_.size(); ++k) ensure(v_[k].grid == v_[0].grid, "snapshots must share the grid");
  dvdx_.reserve(v_.size());
  for (const auto& f : v_) {
    dvdx_.push_back(fd_derivative(f, 1));
    vmax_ = std::max(vmax_, f.max_abs());
    gmax_ = std::max(gmax_, dvdx_.back().max_abs());
  }
}

void VelocityHistory::locate(double t, int& k, double& w) const {
  ensure(t >= times_.front() - 1e-12 && t <= times_.back() + 1e-12, "time outside history span");
  t = std::clamp(t, times_.front(), times_.back());
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  k = std::clamp(static_cast<int>(it - times_.begin()) - 1, 0, static_cast<int>(times_.size()) - 2);
  w = (t - times_[k]) / (times_[k + 1] - times_[k]);
}

double VelocityHistory::velocity(double t, double x) const {
  int k;
  double w;
  locate(t, k, w);
  x = std::clamp(x, 0.0, 1.0);  // constant extension for transient stage points
  return (1.0 - w) * interpolate(v_[k], x) + w * interpolate(v_[k + 1], x);
}

double VelocityHistory::velocity_gradient(double t, double x) const {
  int k;
  double w;
  locate(t, k, w);
  x = std::clamp(x, 0.0, 1.0);
  return (1.0 - w) * interpolate(dvdx_[k], x) + w * interpolate(dvdx_[k + 1], x);
}

double VelocityHistory::boundary_velocity(double t, int side) const {
  int k;
  double w;
  locate(t, k, w);
  int j = side < 0 ? 0 : grid().n_cells;
  return (1.0 - w) * v_[k].values[j] + w * v_[k + 1].values[j];
}

namespace {

struct Rk4Step {
  double phi;     // position after the step
  double f_from;  // slope at the step start
  double f_to;    // slope at the step end
};

// one backward RK4 step from (s, phi) to s - dt
Rk4Step rk4_backward(const VelocityHistory& v, double s, double phi, double dt) {
  double k1 = v.velocity(s, phi);
  double k2 = v.velocity(s - 0.5 * dt, phi - 0.5 * dt * k1);
  double k3 = v.velocity(s - 0.5 * dt, phi - 0.5 * dt * k2);
  double k4 = v.velocity(s - dt, phi - dt * k3);
  double next = phi - dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  return Rk4Step{next, k1, v.velocity(s - dt, next)};
}

// Hermite midpoint of the step used for the Simpson sample of dv/dx
double hermite_midpoint(double phi_from, double f_from, double phi_to, double f_to, double dt) {
  return 0.5 * (phi_from + phi_to) + dt / 8.0 * (f_to - f_from);
}

bool outside(double x) { return x < 0.0 || x > 1.0; }

}  // namespace

CharacteristicTrace integrate_characteristic(const VelocityHistory& v, double t, double x) {
  const Grid& g = v.grid();
  ensure(t >= v.t_begin() && t <= v.t_end() + 1e-12, "query time outside history span");
  ensure(x >= 0.0 && x <= 1.0, "query point outside [0,1]");
  t = std::min(t, v.t_end());

  CharacteristicTrace tr;
  const double span = t - v.t_begin();
  const double time_tol = std::max(1e-12 * std::max(span, 1e-30), 1e-300);

  // starting on the boundary: the backward path leaves the domain at once
  // unless the trace pushes it inside (outgoing flux at the query time)
  if (x <= 0.0 || x >= 1.0) {
    int side = x <= 0.0 ? -1 : 1;
    double speed = v.boundary_velocity(t, side);
    bool moves_inside_backward = side < 0 ? speed < 0.0 : speed > 0.0;
    if (!moves_inside_backward) {
      tr.origin = side < 0 ? OriginKind::left : OriginKind::right;
      tr.entry_time = t;
      tr.entry_point = x;
      tr.touch_speed = speed;
      return tr;
    }
  }

  double dt_cap = g.h / (2.0 * std::max(v.max_abs_velocity(), 1e-30));
  double dt = std::min(span, dt_cap);
  if (span <= 0.0) {
    tr.entry_time = t;
    tr.entry_point = x;
    return tr;
  }
  int nsub = std::max(1, static_cast<int>(std::ceil(span / dt)));
  dt = span / nsub;

  double s = t, phi = x, stretch = 0.0;
  for (int m = 0; m < nsub; ++m) {
    Rk4Step step = rk4_backward(v, s, phi, dt);
    if (outside(step.phi)) {
      // bisect the step size until the contact time is pinned down
      double lo = 0.0, hi = dt;  // backward offsets from s; position(lo)=phi inside
      for (int it = 0; it < 200 && (hi - lo) > time_tol; ++it) {
        double mid = 0.5 * (lo + hi);
        Rk4Step probe = rk4_backward(v, s, phi, mid);
        if (outside(probe.phi))
          hi = mid;
        else
          lo = mid;
      }
      double offset = hi;
      Rk4Step last = rk4_backward(v, s, phi, offset);
      int side = last.phi < 0.5 ? -1 : 1;
      double e = s - offset;
      double speed = v.boundary_velocity(e, side);
      // partial-step stretch up to the contact time
      Rk4Step half = rk4_backward(v, s, phi, 0.5 * offset);
      double ga = v.velocity_gradient(s, phi);
      double gm = v.velocity_gradient(s - 0.5 * offset, std::clamp(half.phi, 0.0, 1.0));
      double gb = v.velocity_gradient(e, side < 0 ? 0.0 : 1.0);
      stretch += offset / 6.0 * (ga + 4.0 * gm + gb);

      tr.origin = side < 0 ? OriginKind::left : OriginKind::right;
      tr.entry_time = e;
      tr.entry_point = side < 0 ? 0.0 : 1.0;
      tr.stretch = stretch;
      tr.touch_speed = speed;
      tr.corner = (e - v.t_begin()) <= time_tol;
      return tr;
    }
    double mid = hermite_midpoint(phi, step.f_from, step.phi, step.f_to, dt);
    double ga = v.velocity_gradient(s, phi);
    double gm = v.velocity_gradient(s - 0.5 * dt, std::clamp(mid, 0.0, 1.0));
    double gb = v.velocity_gradient(s - dt, step.phi);
    stretch += dt / 6.0 * (ga + 4.0 * gm + gb);
    phi = step.phi;
    s -= dt;
  }

  tr.origin = OriginKind::interior;
  tr.entry_time = v.t_begin();
  tr.entry_point = phi;
  tr.stretch = stretch;
  tr.corner = (phi <= 0.0 || phi >= 1.0);
  return tr;
}

bool classify_singular(const CharacteristicTrace& trace, double eps_v) {
  if (trace.corner) return true;
  if (trace.origin == OriginKind::interior) return false;
  return std::abs(trace.touch_speed) < eps_v;
}

MomentumValue evaluate_momentum(const VelocityHistory& v, double t, double x,
                                const ScalarField& y_start, const TimeSampler& y_left_in,
                                const TimeSampler& y_right_in, double eps_v) {
  MomentumValue out;
  out.trace = integrate_characteristic(v, t, x);
  out.singular = classify_singular(out.trace, eps_v);
  if (out.singular) {
    out.value = out.origin_value = std::nan("");
    return out;
  }
  switch (out.trace.origin) {
    case OriginKind::interior:
      out.origin_value = interpolate(y_start, out.trace.entry_point);
      break;
    case OriginKind::left:
      if (out.trace.touch_speed < 0.0)
        throw AdmissibilityError("entering trace queried where the left flux is outgoing");
      out.origin_value = y_left_in(out.trace.entry_time);
      break;
    case OriginKind::right:
      if (out.trace.touch_speed > 0.0)
        throw AdmissibilityError("entering trace queried where the right flux is outgoing");
      out.origin_value = y_right_in(out.trace.entry_time);
      break;
  }
  out.value = out.origin_value * std::exp(-2.0 * out.trace.stretch);
  return out;
}

ScalarField transport_field(const VelocityHistory& v, double t_to, const ScalarField& y_start,
                            const TimeSampler& y_left_in, const TimeSampler& y_right_in,
                            double eps_v, TransportDiagnostics* diag) {
  const Grid& g = v.grid();
  ensure(y_start.grid == g, "state grid must match the velocity grid");
  Vector out(g.n_nodes());
  std::vector<int> singular;
  double max_origin = 0.0, max_value = 0.0;
  for (int j = 0; j < g.n_nodes(); ++j) {
    MomentumValue m = evaluate_momentum(v, t_to, g.node(j), y_start, y_left_in, y_right_in, eps_v);
    if (m.singular) {
      singular.push_back(j);
      out[j] = std::nan("");
      continue;
    }
    out[j] = m.value;
    max_origin = std::max(max_origin, std::abs(m.origin_value));
    max_value = std::max(max_value, std::abs(m.value));
  }
  ensure(singular.size() < static_cast<size_t>(g.n_nodes()), "every node classified singular");
  // singular nodes inherit the nearest regular value
  for (int j : singular) {
    for (int d = 1; d < g.n_nodes(); ++d) {
      if (j - d >= 0 && std::isfinite(out[j - d])) {
        out[j] = out[j - d];
        break;
      }
      if (j + d < g.n_nodes() && std::isfinite(out[j + d])) {
        out[j] = out[j + d];
        break;
      }
    }
  }
  double span = t_to - v.t_begin();
  double bound = max_origin * std::exp(2.0 * span * v.max_abs_gradient());
  if (max_value > bound * (1.0 + 1e-6) + 1e-300)
    throw ConvergenceError("transported field exceeds its certified growth bound");
  if (diag) {
    diag->singular_nodes = std::move(singular);
    diag->max_origin = max_origin;
    diag->certified_bound = bound;
    diag->max_value = max_value;
  }
  return ScalarField(g, std::move(out));
}

}  // namespace ch
