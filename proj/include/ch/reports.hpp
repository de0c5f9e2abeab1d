#pragma once

#include <string>
#include <vector>

#include "ch/energy.hpp"
#include "ch/stepper.hpp"

namespace ch {

// 17 significant digits, round-trip safe
std::string format_g17(double v);

void write_states_csv(const std::string& path, const SolutionHistory& run);
void write_meta_json(const std::string& path, const SolutionHistory& run);
void write_energy_report_csv(const std::string& path, const EnergyReport& report);
void write_certificate_json(const std::string& path, const EnergyReport& report);

struct ConvergenceRow {
  int n_cells = 0;
  double err_v = 0.0;
  double err_y = 0.0;
  double identity_residual = 0.0;
  double order_v = 0.0;
  double order_y = 0.0;
  double order_residual = 0.0;
};

void write_orders_csv(const std::string& path, const std::vector<ConvergenceRow>& rows);

}  // namespace ch
