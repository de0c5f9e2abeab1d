#pragma once

// Tolerance constants frozen after a one-time calibration run of
// tools/calibrate on the built-in battery. Margin defects and balance
// residuals are admitted up to coeff * (h + slab_dt); do not retune ad hoc.
namespace ch::calib {

// admissible defect coefficient for inequality margins; the battery showed
// no negative margin at calibration, the allowance covers jitter only
inline constexpr double kappa_margin = 1e-2;

// admissible coefficient for the pointwise balance residual; calibrated
// worst case was 3.7e-10 * (h + slab_dt) on the delta = 1e-3 battery
inline constexpr double identity_coeff = 1e-8;

// growth constant certified for the order-2 battery ledger
inline constexpr double higher_order_c = 40.0;

// largest admissible fitted exponential rate in certificates
inline constexpr double gronwall_c_max = 1e4;

// twin runs from different iteration seeds must agree to this energy
inline constexpr double uniqueness_energy_cap = 1e-18;

}  // namespace ch::calib
