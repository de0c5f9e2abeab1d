#pragma once

#include <string>
#include <vector>

#include "ch/grid.hpp"
#include "ch/stepper.hpp"

namespace ch {

// Squared Sobolev norm sum_{k<=n} int (d^k f)^2, trapezoid in space.
double sobolev_norm_sq(const ScalarField& f, int order);

struct NamedConstant {
  std::string name;
  double value = 0.0;
  std::string kind;  // "explicit" or "fitted"
};

struct GronwallInterval {
  double t0 = 0.0, t1 = 0.0;
  int case_id = 4;  // 1: both inflow, 2: left only, 3: right only, 4: none
  double lyapunov_start = 0.0;
  double lyapunov_end = 0.0;
  double c_hat = 0.0;
  bool pass = false;
};

struct GronwallCertificate {
  std::vector<GronwallInterval> intervals;
  bool all_pass = true;
  bool chain_ok = true;
  std::vector<std::string> messages;
};

struct GronwallOptions {
  double c_max = 1e4;          // admissible fitted rate
  double floor = 1e-30;        // absolute noise floor on energies
  double chain_tol = 1e-18;    // components below this chain trivially
  double blowup_factor = 10.0; // slack against the certified interval bound
};

struct EnergyReport {
  int order = 1;
  std::vector<double> times;
  std::vector<double> energy;              // squared H^n distance
  std::vector<double> energy_left;         // |d^n v~(t,0)|^2
  std::vector<double> energy_right;        // |d^n v~(t,1)|^2
  std::vector<double> identity_residual;   // [0] = 0, per preceding segment
  std::vector<double> energy_margin;       // order-1 balance inequality
  std::vector<double> aux_margin_left;     // NaN off the inflow set
  std::vector<double> aux_margin_right;
  std::vector<double> e_rel;               // combined higher-order energy
  std::vector<double> e_rel_margin;
  std::vector<double> rellich_left;        // observed trace/norm ratios of the aux profiles
  std::vector<double> rellich_right;
  std::vector<NamedConstant> constants;
  std::vector<std::string> notes;
  SignPartition partition;
  GronwallCertificate certificate;
};

// Pointwise-in-time relative energies between two runs sharing the grid,
// the time points and the boundary fluxes.
EnergyReport relative_energy(const SolutionHistory& a, const SolutionHistory& b);

// Signed defect of the exact order-1 balance over each stored segment.
void energy_identity_residual(EnergyReport& report, const SolutionHistory& a,
                              const SolutionHistory& b);

// Margins of dE/dt + E_r v_r - E_l v_l <= C_expl E with the explicit constant
// C_expl = 4 sup ||v^||_{W^{1,inf}} + sup ||v^|| + sup ||y^|| + |kappa|.
void energy_inequality_check(EnergyReport& report, const SolutionHistory& a,
                             const SolutionHistory& b);

// Margins of the one-sided boundary-energy inequality on the inflow set of
// the requested side (side < 0: left), explicit multiplier constants.
void aux_inequality_check(EnergyReport& report, const SolutionHistory& a, const SolutionHistory& b,
                          int side);

// Per-interval exponential rate fit of the case-dependent Lyapunov function
// with continuation analysis across sign changes.
GronwallCertificate gronwall_certificate(const std::vector<double>& times,
                                         const std::vector<double>& energy,
                                         const std::vector<double>& energy_left,
                                         const std::vector<double>& energy_right,
                                         const SignPartition& partition,
                                         const GronwallOptions& options = {});

// Higher-order route (n >= 2): auxiliary mixed-problem correctors per inflow
// side, combined energy series, growth margins against a recorded constant,
// and observed trace ratios of the correctors.
void higher_order_ledger(EnergyReport& report, const SolutionHistory& a, const SolutionHistory& b,
                         double growth_constant);

}  // namespace ch
