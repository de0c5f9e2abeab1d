#pragma once

#include <string>
#include <vector>

#include "ch/grid.hpp"
#include "ch/poly.hpp"
#include "ch/sampler.hpp"
#include "ch/transport.hpp"

namespace ch {

struct SolverParams {
  double picard_tol = 1e-10;
  int picard_max_iter = 25;
  double relax = 1.0;
  int sign_change_cap = 64;
  double eps_v_rel = 1e-8;
  int max_halvings = 10;  // smallest sub-slab is slab_dt / 2^max_halvings
  bool zero_initial_guess = false;
};

struct Scenario {
  int order = 1;
  double kappa = 0.0;
  double t_final = 1.0;
  int n_cells = 64;
  double slab_dt = 0.01;
  InitialData y0;
  TimeSampler v_left, v_right;                       // boundary fluxes
  std::vector<TimeSampler> trace_left, trace_right;  // d^i traces, i=0..n-1; [0] matches the flux
  TimeSampler y_left_in, y_right_in;                 // entering momentum on the inflow sets
  SolverParams params;

  Grid grid() const { return Grid::uniform(n_cells); }
};

// Constant-sign intervals of the two boundary fluxes.
struct SignPartition {
  std::vector<double> breakpoints;            // 0 = b_0 < ... < b_m = T
  std::vector<int> sign_left, sign_right;     // per interval: -1, 0, +1
  std::vector<double> roots_left, roots_right;  // flux zeros, endpoints included

  int n_intervals() const { return static_cast<int>(sign_left.size()); }
  bool inflow_left(int k) const { return sign_left[k] > 0; }
  bool inflow_right(int k) const { return sign_right[k] < 0; }
  int interval_of(double t) const;
};

SignPartition sign_partition(const TimeSampler& v_left, const TimeSampler& v_right, double t_final,
                             int sign_change_cap, int samples = 4096);

// Validates the scenario and returns the flux sign partition. Throws
// AdmissibilityError when the first trace components disagree with the
// declared fluxes or the fluxes change sign too often.
SignPartition check_admissible(const Scenario& scenario);

struct State {
  double t = 0.0;
  ScalarField y;
  ScalarField v;
};

struct PicardResult {
  ScalarField y_next;
  ScalarField v_next;
  double residual = 0.0;  // W^{1,inf} distance between update and guess
  TransportDiagnostics transport;
};

// One application of the fixed-point map: transport the momentum under the
// guessed velocity history across [from.t, t_to], then solve the elliptic
// relation at t_to.
PicardResult picard_map(const State& from, double t_to, const ScalarField& v_guess,
                        const Scenario& scenario);

struct SlabDiag {
  double t0 = 0.0, t1 = 0.0;
  int iterations = 0;
  double residual = 0.0;
  int halvings = 0;
  int singular_nodes = 0;
  double bound_margin = 0.0;  // certified growth bound minus attained max
  std::vector<double> residual_history;
};

// Relaxed Picard iteration on one slab; halves the slab on stagnation.
State solve_slab(const State& from, double t_to, const Scenario& scenario, SlabDiag& diag);

struct SolutionHistory {
  Scenario scenario;
  std::vector<State> states;  // slab boundaries, first at t=0
  std::vector<SlabDiag> slabs;
  SignPartition partition;

  const State& at(int k) const { return states[k]; }
  int n_states() const { return static_cast<int>(states.size()); }
};

// March slabs from 0 to t_final. Every stored state satisfies the elliptic
// relation between its momentum and velocity exactly.
SolutionHistory run(const Scenario& scenario);

// Elliptic velocity reconstruction used by the stepper (second-order shift
// by kappa, boundary traces sampled at time t).
ScalarField elliptic_velocity(const Scenario& scenario, const ScalarField& y, double t);

// Space-time weak-form residual against phi(t,x) = (a + b t) p(x),
// trapezoid in both variables over the stored states.
double weak_form_residual(const SolutionHistory& run, const Poly& p, double a, double b);

}  // namespace ch
