#include "ch/energy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "ch/elliptic.hpp"
#include "ch/quadrature.hpp"
#include "ch/stencils.hpp"

namespace ch {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

ScalarField field_diff(const ScalarField& a, const ScalarField& b) {
  return ScalarField(a.grid, a.values - b.values);
}

ScalarField field_mean(const ScalarField& a, const ScalarField& b) {
  return ScalarField(a.grid, 0.5 * (a.values + b.values));
}

// first derivative of a time series at index k from a 3-point window kept
// inside [lo, hi]; handles the non-uniform final segment
double series_ddt(const std::vector<double>& t, const std::vector<double>& s, int k, int lo, int hi) {
  int a = std::max(lo, std::min(k - 1, hi - 2));
  Vector nodes(3);
  nodes << t[a], t[a + 1], t[a + 2];
  Eigen::MatrixXd w = fd_weights(t[k], nodes, 1);
  return w(1, 0) * s[a] + w(1, 1) * s[a + 1] + w(1, 2) * s[a + 2];
}

void check_compatible(const SolutionHistory& a, const SolutionHistory& b) {
  ensure(a.scenario.order == b.scenario.order, "runs must share the operator order");
  ensure(a.scenario.n_cells == b.scenario.n_cells, "runs must share the grid");
  ensure(a.n_states() == b.n_states(), "runs must share the time points");
  for (int k = 0; k < a.n_states(); ++k)
    ensure(std::abs(a.states[k].t - b.states[k].t) <= 1e-12, "runs must share the time points");
  double T = a.scenario.t_final;
  ensure(a.scenario.v_left.max_difference(b.scenario.v_left, T) <= 1e-12 &&
             a.scenario.v_right.max_difference(b.scenario.v_right, T) <= 1e-12,
         "runs must share the boundary fluxes");
  ensure(std::abs(a.scenario.kappa - b.scenario.kappa) <= 1e-15, "runs must share the shift");
}

struct HatNorms {
  double v_inf = 0.0;   // sup |v^|
  double v1_inf = 0.0;  // sup |dx v^|
  double v2_inf = 0.0;  // sup |dxx v^|
  double y_inf = 0.0;   // sup |y^|
};

HatNorms hat_norms(const SolutionHistory& a, const SolutionHistory& b) {
  HatNorms h;
  for (int k = 0; k < a.n_states(); ++k) {
    ScalarField vh = field_mean(a.states[k].v, b.states[k].v);
    ScalarField yh = field_mean(a.states[k].y, b.states[k].y);
    h.v_inf = std::max(h.v_inf, vh.max_abs());
    h.v1_inf = std::max(h.v1_inf, fd_derivative(vh, 1).max_abs());
    h.v2_inf = std::max(h.v2_inf, fd_derivative(vh, 2).max_abs());
    h.y_inf = std::max(h.y_inf, yh.max_abs());
  }
  return h;
}

}  // namespace

double sobolev_norm_sq(const ScalarField& f, int order) {
  ensure(order >= 0 && order <= 3, "norm order must be in 0..3");
  double acc = 0.0;
  for (int k = 0; k <= order; ++k) {
    ScalarField d = k == 0 ? f : fd_derivative(f, k);
    ScalarField sq(d.grid, d.values.cwiseProduct(d.values));
    acc += trapezoid_integrate(sq);
  }
  return acc;
}

EnergyReport relative_energy(const SolutionHistory& a, const SolutionHistory& b) {
  check_compatible(a, b);
  const int n = a.scenario.order;
  EnergyReport rep;
  rep.order = n;
  rep.partition = a.partition;
  for (int k = 0; k < a.n_states(); ++k) {
    rep.times.push_back(a.states[k].t);
    ScalarField vt = field_diff(a.states[k].v, b.states[k].v);
    rep.energy.push_back(sobolev_norm_sq(vt, n));
    double dl = endpoint_derivative(vt, n, -1);
    double dr = endpoint_derivative(vt, n, +1);
    rep.energy_left.push_back(dl * dl);
    rep.energy_right.push_back(dr * dr);
  }
  rep.notes.push_back(
      "right boundary profile follows its closed form; its outgoing slope at x=1 is -1, "
      "mirroring the left profile convention");
  return rep;
}

void energy_identity_residual(EnergyReport& rep, const SolutionHistory& a,
                              const SolutionHistory& b) {
  check_compatible(a, b);
  ensure(a.scenario.order == 1, "the pointwise balance is an order-1 statement");
  const Grid g = a.scenario.grid();
  const double kappa = a.scenario.kappa;
  const int K = a.n_states();

  std::vector<double> boundary_term(K), bulk1(K), bulk2(K);
  for (int k = 0; k < K; ++k) {
    ScalarField vt = field_diff(a.states[k].v, b.states[k].v);
    ScalarField vh = field_mean(a.states[k].v, b.states[k].v);
    ScalarField yh = field_mean(a.states[k].y, b.states[k].y);
    ScalarField vtx = fd_derivative(vt, 1);
    ScalarField vhx = fd_derivative(vh, 1);
    double t = a.states[k].t;
    double dl = vtx.values[0], dr = vtx.values[g.n_cells];
    boundary_term[k] = dr * dr * a.scenario.v_right(t) - dl * dl * a.scenario.v_left(t);

    ScalarField f1(g, Vector(g.n_nodes())), f2(g, Vector(g.n_nodes()));
    for (int j = 0; j < g.n_nodes(); ++j) {
      double vtj = vt.values[j], vtxj = vtx.values[j];
      f1.values[j] = (3.0 * vtj * vtj + vtxj * vtxj) * vhx.values[j];
      f2.values[j] = 2.0 * vtj * vtxj * (vh.values[j] - yh.values[j] + kappa);
    }
    bulk1[k] = trapezoid_integrate(f1);
    bulk2[k] = trapezoid_integrate(f2);
  }

  rep.identity_residual.assign(K, 0.0);
  for (int k = 1; k < K; ++k) {
    double dt = rep.times[k] - rep.times[k - 1];
    double time_int = 0.5 * dt *
                      (boundary_term[k] + bulk1[k] + bulk2[k] + boundary_term[k - 1] +
                       bulk1[k - 1] + bulk2[k - 1]);
    rep.identity_residual[k] = (rep.energy[k] - rep.energy[k - 1]) + time_int;
  }
}

void energy_inequality_check(EnergyReport& rep, const SolutionHistory& a,
                             const SolutionHistory& b) {
  check_compatible(a, b);
  ensure(a.scenario.order == 1, "the balance inequality is an order-1 statement");
  HatNorms h = hat_norms(a, b);
  double c_expl = 4.0 * std::max(h.v_inf, h.v1_inf) + h.v_inf + h.y_inf + std::abs(a.scenario.kappa);
  rep.constants.push_back({"energy_inequality_c", c_expl, "explicit"});

  const int K = a.n_states();
  rep.energy_margin.assign(K, 0.0);
  for (int k = 0; k < K; ++k) {
    double t = rep.times[k];
    double ddt = series_ddt(rep.times, rep.energy, k, 0, K - 1);
    double flux = rep.energy_right[k] * a.scenario.v_right(t) -
                  rep.energy_left[k] * a.scenario.v_left(t);
    rep.energy_margin[k] = c_expl * rep.energy[k] - (ddt + flux);
  }
}

void aux_inequality_check(EnergyReport& rep, const SolutionHistory& a, const SolutionHistory& b,
                          int side) {
  check_compatible(a, b);
  ensure(a.scenario.order == 1, "the boundary-energy inequality is an order-1 statement");
  const Grid g = a.scenario.grid();
  const bool left = side < 0;
  HatNorms h = hat_norms(a, b);

  // profile norms entering the multiplier estimates
  ScalarField u = left ? homogeneous_ul(g) : homogeneous_ur(g);
  ScalarField ux = fd_derivative(u, 1);
  ScalarField uxx = fd_derivative(u, 2);
  auto l2sq = [&](const ScalarField& f) {
    ScalarField sq(f.grid, f.values.cwiseProduct(f.values));
    return trapezoid_integrate(sq);
  };
  double u0 = l2sq(u), u1 = l2sq(ux), u2 = l2sq(uxx);
  double th = std::tanh(1.0);
  double far_slope = std::abs(endpoint_derivative(u, 1, left ? +1 : -1));

  const TimeSampler& own_flux = left ? a.scenario.v_left : a.scenario.v_right;
  const TimeSampler& other_flux = left ? a.scenario.v_right : a.scenario.v_left;
  double other_inf = 0.0, own_inf = 0.0;
  for (int q = 0; q <= 64; ++q) {
    double t = a.scenario.t_final * q / 64.0;
    other_inf = std::max(other_inf, std::abs(other_flux(t)));
    own_inf = std::max(own_inf, std::abs(own_flux(t)));
  }

  // entering-momentum mismatch between the two runs on this side
  const TimeSampler& ya = left ? a.scenario.y_left_in : a.scenario.y_right_in;
  const TimeSampler& yb = left ? b.scenario.y_left_in : b.scenario.y_right_in;

  double c = 0.0;
  c += h.y_inf * std::max(1.0, u1) / 2.0;                                     // y^ v~ (aux)'
  c += h.y_inf * std::max(1.0, u0) / 2.0;                                     // y^ v~' aux
  c += h.v_inf * std::max(1.0, u1) / 2.0;                                     // v~ v^ (aux)'
  c += (h.v1_inf * std::max(1.0, u1) + h.v_inf * std::max(1.0, u2)) / 2.0;    // v~' (v^ aux')'
  c += far_slope * far_slope * other_inf / th;                                // far-end cross term
  c += h.v1_inf * std::max(1.0, u0) / 2.0;                                    // v~ aux v^'
  c += th * h.v1_inf;                                                         // near-end term
  c += (h.v1_inf * std::max(1.0, u1) + h.v2_inf * std::max(1.0, u0)) / 2.0;   // v~' (aux v^')'
  c += th * own_inf / 2.0;                                                    // entering-trace term
  double c_aux = 2.0 / th * c;
  rep.constants.push_back({left ? "aux_inequality_c_left" : "aux_inequality_c_right", c_aux,
                           "explicit"});

  const int K = a.n_states();
  const std::vector<double>& e_own = left ? rep.energy_left : rep.energy_right;
  const std::vector<double>& e_other = left ? rep.energy_right : rep.energy_left;
  std::vector<double>& margins = left ? rep.aux_margin_left : rep.aux_margin_right;
  margins.assign(K, kNan);

  for (int iv = 0; iv < rep.partition.n_intervals(); ++iv) {
    bool active = left ? rep.partition.inflow_left(iv) : rep.partition.inflow_right(iv);
    if (!active) continue;
    double t0 = rep.partition.breakpoints[iv], t1 = rep.partition.breakpoints[iv + 1];
    int lo = -1, hi = -1;
    for (int k = 0; k < K; ++k) {
      if (rep.times[k] >= t0 - 1e-12 && rep.times[k] <= t1 + 1e-12) {
        if (lo < 0) lo = k;
        hi = k;
      }
    }
    if (lo < 0 || hi - lo < 2) continue;  // not enough samples inside the interval
    for (int k = lo; k <= hi; ++k) {
      double t = rep.times[k];
      double ddt = series_ddt(rep.times, e_own, k, lo, hi);
      double mismatch = ya(t) - yb(t);
      margins[k] = c_aux * (rep.energy[k] + e_own[k]) +
                   0.5 * e_other[k] * std::abs(other_flux(t)) + own_inf * mismatch * mismatch -
                   ddt;
    }
  }
}

GronwallCertificate gronwall_certificate(const std::vector<double>& times,
                                         const std::vector<double>& energy,
                                         const std::vector<double>& energy_left,
                                         const std::vector<double>& energy_right,
                                         const SignPartition& partition,
                                         const GronwallOptions& opt) {
  ensure(times.size() == energy.size() && times.size() == energy_left.size() &&
             times.size() == energy_right.size(),
         "series must share their length");
  GronwallCertificate cert;
  const int K = static_cast<int>(times.size());
  const double t_tol = 1e-12 * std::max(1.0, partition.breakpoints.back());

  double prev_bound = 0.0;
  bool prev_left = false, prev_right = false;
  for (int iv = 0; iv < partition.n_intervals(); ++iv) {
    bool use_left = partition.inflow_left(iv);
    bool use_right = partition.inflow_right(iv);
    GronwallInterval rec;
    rec.t0 = partition.breakpoints[iv];
    rec.t1 = partition.breakpoints[iv + 1];
    rec.case_id = use_left && use_right ? 1 : use_left ? 2 : use_right ? 3 : 4;

    auto lyap = [&](int k) {
      double L = energy[k];
      if (use_left) L += energy_left[k];
      if (use_right) L += energy_right[k];
      return std::max(L, opt.floor);
    };

    int lo = -1, hi = -1;
    for (int k = 0; k < K; ++k) {
      if (times[k] >= rec.t0 - t_tol && times[k] <= rec.t1 + t_tol) {
        if (lo < 0) lo = k;
        hi = k;
      }
    }
    if (lo < 0 || hi == lo) {
      rec.pass = true;
      rec.c_hat = 0.0;
      cert.messages.push_back("interval without enough samples, rate not fitted");
      cert.intervals.push_back(rec);
      continue;
    }

    rec.lyapunov_start = lyap(lo);
    rec.lyapunov_end = lyap(hi);
    double c_hat = 0.0;
    for (int k = lo + 1; k <= hi; ++k) {
      double dt = times[k] - times[lo];
      if (dt <= 0.0) continue;
      c_hat = std::max(c_hat, std::log(lyap(k) / rec.lyapunov_start) / dt);
    }
    rec.c_hat = c_hat;
    rec.pass = std::isfinite(c_hat) && c_hat <= opt.c_max;
    if (!rec.pass) cert.all_pass = false;

    // continuation across the junction into this interval
    if (iv > 0) {
      double incoming = 0.0;
      if (use_left && !prev_left) incoming = std::max(incoming, energy_left[lo]);
      if (use_right && !prev_right) incoming = std::max(incoming, energy_right[lo]);
      if (incoming > opt.chain_tol && incoming > opt.blowup_factor * (prev_bound + opt.chain_tol)) {
        cert.chain_ok = false;
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "no continuation across sign change at t=%.6g: boundary energy %.6g "
                      "exceeds the certified bound %.6g",
                      rec.t0, incoming, prev_bound);
        cert.messages.push_back(buf);
      }
    }
    prev_bound = std::exp(rec.c_hat * (rec.t1 - rec.t0)) * rec.lyapunov_start;
    prev_left = use_left;
    prev_right = use_right;
    cert.intervals.push_back(rec);
  }

  // sign change sitting exactly at the end of the horizon: the component the
  // next interval would need must stay commensurate with the certified bound
  if (!cert.intervals.empty() && K > 0) {
    double T = partition.breakpoints.back();
    auto ends_with_root = [&](const std::vector<double>& roots) {
      for (double r : roots)
        if (std::abs(r - T) <= 1e-9 * std::max(1.0, T)) return true;
      return false;
    };
    double bound = prev_bound;
    auto check_component = [&](const std::vector<double>& series, const char* name) {
      double value = series[K - 1];
      if (value > opt.chain_tol && value > opt.blowup_factor * (bound + opt.chain_tol)) {
        cert.chain_ok = false;
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "non-continuable blow-up at the horizon sign change: %s=%.6g against "
                      "certified bound %.6g",
                      name, value, bound);
        cert.messages.push_back(buf);
      }
    };
    if (ends_with_root(partition.roots_left)) check_component(energy_left, "left boundary energy");
    if (ends_with_root(partition.roots_right))
      check_component(energy_right, "right boundary energy");
  }
  return cert;
}

void higher_order_ledger(EnergyReport& rep, const SolutionHistory& a, const SolutionHistory& b,
                         double growth_constant) {
  check_compatible(a, b);
  const int n = a.scenario.order;
  ensure(n >= 2, "the ledger applies to orders 2 and 3");
  const Grid g = a.scenario.grid();
  const int K = a.n_states();

  rep.e_rel.assign(K, 0.0);
  rep.e_rel_margin.assign(K, kNan);
  rep.rellich_left.assign(K, kNan);
  rep.rellich_right.assign(K, kNan);

  for (int k = 0; k < K; ++k) {
    int iv = rep.partition.interval_of(rep.times[k]);
    ScalarField vt = field_diff(a.states[k].v, b.states[k].v);
    double total = rep.energy[k];
    if (rep.partition.inflow_left(iv)) {
      std::vector<double> data(n);
      for (int i = 0; i < n; ++i) data[i] = -boundary_B(vt, n, i, -1);
      ScalarField w = solve_zaremba(n, g, data);
      double norm_sq = sobolev_norm_sq(w, n);
      total += norm_sq;
      double trace = endpoint_derivative(w, n, +1);
      if (norm_sq > 1e-300) rep.rellich_left[k] = std::abs(trace) / std::sqrt(norm_sq);
    }
    if (rep.partition.inflow_right(iv)) {
      std::vector<double> data(n);
      for (int i = 0; i < n; ++i) data[i] = -boundary_B(vt, n, i, +1);
      ScalarField w = solve_zaremba_right(n, g, data);
      double norm_sq = sobolev_norm_sq(w, n);
      total += norm_sq;
      double trace = endpoint_derivative(w, n, -1);
      if (norm_sq > 1e-300) rep.rellich_right[k] = std::abs(trace) / std::sqrt(norm_sq);
    }
    rep.e_rel[k] = total;
  }

  for (int iv = 0; iv < rep.partition.n_intervals(); ++iv) {
    double t0 = rep.partition.breakpoints[iv], t1 = rep.partition.breakpoints[iv + 1];
    int lo = -1, hi = -1;
    for (int k = 0; k < K; ++k) {
      if (rep.times[k] >= t0 - 1e-12 && rep.times[k] <= t1 + 1e-12) {
        if (lo < 0) lo = k;
        hi = k;
      }
    }
    if (lo < 0 || hi - lo < 2) continue;
    for (int k = lo; k <= hi; ++k) {
      double ddt = series_ddt(rep.times, rep.e_rel, k, lo, hi);
      rep.e_rel_margin[k] = growth_constant * rep.e_rel[k] - ddt;
    }
  }
  rep.constants.push_back({"higher_order_growth_c", growth_constant, "fitted"});
}

}  // namespace ch
