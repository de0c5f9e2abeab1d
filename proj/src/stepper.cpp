#include "ch/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ch/elliptic.hpp"
#include "ch/quadrature.hpp"
#include "ch/stencils.hpp"

namespace ch {

int SignPartition::interval_of(double t) const {
  for (int k = 0; k < n_intervals(); ++k)
    if (t <= breakpoints[k + 1] + 1e-12) return k;
  return n_intervals() - 1;
}

SignPartition sign_partition(const TimeSampler& v_left, const TimeSampler& v_right, double t_final,
                             int sign_change_cap, int samples) {
  ensure(t_final > 0.0 && samples >= 16, "partition needs a positive horizon");

  auto find_roots = [&](const TimeSampler& f) {
    // a stretch of zero flux is one root at its entry (and one at its exit),
    // not a root per sample
    std::vector<double> roots;
    const double dedup = 1e-12 * std::max(1.0, t_final);
    auto push_root = [&](double r) {
      if (roots.empty() || r - roots.back() > dedup) roots.push_back(r);
    };
    auto sgn = [](double v) { return v > 0.0 ? 1 : v < 0.0 ? -1 : 0; };
    double prev_t = 0.0, prev_v = f(0.0);
    int state = sgn(prev_v);
    if (state == 0) push_root(0.0);
    for (int k = 1; k <= samples; ++k) {
      double t = t_final * k / samples;
      double v = f(t);
      int s = sgn(v);
      if (s != state) {
        if (s == 0) {
          push_root(t);
        } else if (state == 0) {
          push_root(prev_t);
        } else {
          double lo = prev_t, hi = t;
          for (int it = 0; it < 200 && hi - lo > 1e-14 * t_final; ++it) {
            double mid = 0.5 * (lo + hi);
            double vm = f(mid);
            if (vm == 0.0) {
              lo = hi = mid;
            } else if ((vm < 0.0) == (prev_v < 0.0)) {
              lo = mid;
            } else {
              hi = mid;
            }
          }
          push_root(0.5 * (lo + hi));
        }
        state = s;
      }
      prev_t = t;
      prev_v = v;
    }
    return roots;
  };

  SignPartition p;
  p.roots_left = find_roots(v_left);
  p.roots_right = find_roots(v_right);
  int changes = static_cast<int>(p.roots_left.size() + p.roots_right.size());
  if (changes > sign_change_cap)
    throw AdmissibilityError("boundary fluxes change sign more than the configured cap");

  std::vector<double> bps{0.0, t_final};
  for (double r : p.roots_left) bps.push_back(r);
  for (double r : p.roots_right) bps.push_back(r);
  std::sort(bps.begin(), bps.end());
  p.breakpoints.clear();
  for (double b : bps) {
    b = std::clamp(b, 0.0, t_final);
    if (p.breakpoints.empty() || b - p.breakpoints.back() > 1e-12 * std::max(1.0, t_final))
      p.breakpoints.push_back(b);
  }
  if (p.breakpoints.back() < t_final) p.breakpoints.back() = t_final;

  auto interval_sign = [&](const TimeSampler& f, double a, double b) {
    // sample the open interval; identically tiny flux counts as sign 0
    int sgn = 0;
    double scale = 0.0;
    for (int q = 1; q < 16; ++q) {
      double v = f(a + (b - a) * q / 16.0);
      scale = std::max(scale, std::abs(v));
      if (v > 0.0 && sgn >= 0) sgn = 1;
      if (v < 0.0 && sgn <= 0) sgn = -1;
    }
    return scale <= 1e-300 ? 0 : sgn;
  };
  for (size_t k = 0; k + 1 < p.breakpoints.size(); ++k) {
    p.sign_left.push_back(interval_sign(v_left, p.breakpoints[k], p.breakpoints[k + 1]));
    p.sign_right.push_back(interval_sign(v_right, p.breakpoints[k], p.breakpoints[k + 1]));
  }
  return p;
}

SignPartition check_admissible(const Scenario& sc) {
  ensure(sc.order >= 1 && sc.order <= 3, "order must be in 1..3");
  ensure(sc.order == 1 || sc.kappa == 0.0, "the momentum shift only applies at order 1");
  ensure(sc.t_final > 0.0, "final time must be positive");
  ensure(sc.n_cells >= 4 * sc.order + 4, "grid too coarse for the operator order");
  ensure(sc.slab_dt > 0.0 && sc.slab_dt <= sc.t_final + 1e-12, "slab length must lie in (0, T]");
  ensure(static_cast<int>(sc.trace_left.size()) == sc.order &&
             static_cast<int>(sc.trace_right.size()) == sc.order,
         "need order-many boundary traces per side");
  ensure(sc.params.picard_tol > 0.0 && sc.params.picard_max_iter >= 1, "bad iteration parameters");
  ensure(sc.params.relax > 0.0 && sc.params.relax <= 1.0, "relaxation must lie in (0, 1]");

  double scale_l = 1.0, scale_r = 1.0;
  for (int k = 0; k <= 64; ++k) {
    double t = sc.t_final * k / 64.0;
    scale_l = std::max(scale_l, std::abs(sc.v_left(t)));
    scale_r = std::max(scale_r, std::abs(sc.v_right(t)));
  }
  if (sc.trace_left[0].max_difference(sc.v_left, sc.t_final) > 1e-12 * scale_l)
    throw AdmissibilityError("first left trace component must equal the left flux");
  if (sc.trace_right[0].max_difference(sc.v_right, sc.t_final) > 1e-12 * scale_r)
    throw AdmissibilityError("first right trace component must equal the right flux");

  return sign_partition(sc.v_left, sc.v_right, sc.t_final, sc.params.sign_change_cap);
}

ScalarField elliptic_velocity(const Scenario& sc, const ScalarField& y, double t) {
  ScalarField rhs = y;
  if (sc.order == 1) rhs.values.array() -= sc.kappa;
  std::vector<double> tl(sc.order), tr(sc.order);
  for (int i = 0; i < sc.order; ++i) {
    tl[i] = sc.trace_left[i](t);
    tr[i] = sc.trace_right[i](t);
  }
  return solve_an(sc.order, rhs, tl, tr);
}

namespace {

double w1inf_distance(const ScalarField& a, const ScalarField& b) {
  ScalarField diff(a.grid, a.values - b.values);
  return diff.max_abs() + fd_derivative(diff, 1).max_abs();
}

}  // namespace

PicardResult picard_map(const State& from, double t_to, const ScalarField& v_guess,
                        const Scenario& sc) {
  ensure(t_to > from.t, "slab must advance in time");
  VelocityHistory vhist({from.t, t_to}, {from.v, v_guess});
  double eps_v = sc.params.eps_v_rel * std::max(1.0, vhist.max_abs_velocity());
  PicardResult r;
  r.y_next = transport_field(vhist, t_to, from.y, sc.y_left_in, sc.y_right_in, eps_v, &r.transport);
  r.v_next = elliptic_velocity(sc, r.y_next, t_to);
  r.residual = w1inf_distance(r.v_next, v_guess);
  return r;
}

namespace {

State solve_slab_impl(const State& from, double t_to, const Scenario& sc, SlabDiag& diag, int depth) {
  if (depth > sc.params.max_halvings)
    throw ConvergenceError("fixed-point iteration failed below the smallest slab at t=" +
                           std::to_string(from.t));

  ScalarField guess = sc.params.zero_initial_guess && depth == 0
                          ? ScalarField::zero(from.v.grid)
                          : from.v;
  PicardResult r;
  for (int it = 1; it <= sc.params.picard_max_iter; ++it) {
    r = picard_map(from, t_to, guess, sc);
    diag.iterations += 1;
    if (depth == 0) diag.residual_history.push_back(r.residual);
    if (r.residual <= sc.params.picard_tol) {
      diag.residual = std::max(diag.residual, r.residual);
      diag.singular_nodes += static_cast<int>(r.transport.singular_nodes.size());
      diag.bound_margin = std::min(
          diag.bound_margin, r.transport.certified_bound * (1.0 + 1e-6) - r.transport.max_value);
      return State{t_to, r.y_next, r.v_next};
    }
    if (sc.params.relax < 1.0) {
      Vector mixed = (1.0 - sc.params.relax) * guess.values + sc.params.relax * r.v_next.values;
      guess = ScalarField(guess.grid, std::move(mixed));
    } else {
      guess = r.v_next;
    }
  }
  // stagnation: halve the slab and advance in two legs
  diag.halvings = std::max(diag.halvings, depth + 1);
  double t_mid = 0.5 * (from.t + t_to);
  State mid = solve_slab_impl(from, t_mid, sc, diag, depth + 1);
  return solve_slab_impl(mid, t_to, sc, diag, depth + 1);
}

}  // namespace

State solve_slab(const State& from, double t_to, const Scenario& sc, SlabDiag& diag) {
  diag.t0 = from.t;
  diag.t1 = t_to;
  diag.bound_margin = std::numeric_limits<double>::infinity();
  return solve_slab_impl(from, t_to, sc, diag, 0);
}

SolutionHistory run(const Scenario& sc) {
  SolutionHistory hist;
  hist.scenario = sc;
  hist.partition = check_admissible(sc);

  Grid g = sc.grid();
  ScalarField y0 = ScalarField::from_fn(g, [&](double x) { return sc.y0(x); });
  State state{0.0, y0, elliptic_velocity(sc, y0, 0.0)};
  hist.states.push_back(state);

  int n_slabs = std::max(1, static_cast<int>(std::ceil(sc.t_final / sc.slab_dt - 1e-9)));
  for (int k = 1; k <= n_slabs; ++k) {
    double t_to = std::min(k * sc.slab_dt, sc.t_final);
    SlabDiag diag;
    state = solve_slab(state, t_to, sc, diag);
    hist.states.push_back(state);
    hist.slabs.push_back(std::move(diag));
  }
  return hist;
}

double weak_form_residual(const SolutionHistory& run, const Poly& p, double a, double b) {
  ensure(run.n_states() >= 2, "need at least two states");
  const Grid& g = run.scenario.grid();
  const int K = run.n_states();

  auto phi = [&](double t, double x) { return (a + b * t) * p.eval(x); };
  auto phi_t = [&](double, double x) { return b * p.eval(x); };
  Poly dp = p.derivative();

  // interior contribution per stored time
  std::vector<double> inner(K);
  for (int k = 0; k < K; ++k) {
    const State& s = run.states[k];
    ScalarField dv = fd_derivative(s.v, 1);
    ScalarField integrand(g, Vector(g.n_nodes()));
    for (int j = 0; j < g.n_nodes(); ++j) {
      double x = g.node(j);
      integrand.values[j] = s.y.values[j] * phi_t(s.t, x) +
                            s.y.values[j] * s.v.values[j] * (a + b * s.t) * dp.eval(x) -
                            s.y.values[j] * dv.values[j] * phi(s.t, x);
    }
    inner[k] = trapezoid_integrate(integrand);
  }
  // boundary flux contribution per stored time
  std::vector<double> fluxes(K);
  for (int k = 0; k < K; ++k) {
    const State& s = run.states[k];
    double yl = s.y.values[0], yr = s.y.values[g.n_cells];
    double vl = s.v.values[0], vr = s.v.values[g.n_cells];
    fluxes[k] = yr * vr * phi(s.t, 1.0) - yl * vl * phi(s.t, 0.0);
  }
  double time_integral = 0.0, flux_integral = 0.0;
  for (int k = 1; k < K; ++k) {
    double dt = run.states[k].t - run.states[k - 1].t;
    time_integral += 0.5 * dt * (inner[k] + inner[k - 1]);
    flux_integral += 0.5 * dt * (fluxes[k] + fluxes[k - 1]);
  }

  auto mass = [&](const State& s) {
    ScalarField m(g, Vector(g.n_nodes()));
    for (int j = 0; j < g.n_nodes(); ++j) m.values[j] = s.y.values[j] * phi(s.t, g.node(j));
    return trapezoid_integrate(m);
  };
  double endpoint_diff = mass(run.states.back()) - mass(run.states.front());

  return std::abs(endpoint_diff - time_integral + flux_integral);
}

}  // namespace ch
