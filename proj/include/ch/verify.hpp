#pragma once

#include <string>
#include <vector>

#include "ch/energy.hpp"
#include "ch/scenario_io.hpp"

namespace ch {

struct VerifyCheck {
    std::string name;
    double observed = 0.0;
    double threshold = 0.0;
    bool pass = false;
    std::string detail;
};

struct VerifyResult {
    std::vector<VerifyCheck> checks;
    bool all_pass = true;
};

// canned scenarios used by the verification battery and the test suite
Scenario battery_order1(int n_cells = 96, double slab_dt = 0.01);
Scenario battery_outflow(int n_cells = 96, double slab_dt = 0.01);
Scenario battery_order2(int n_cells = 64, double slab_dt = 0.01);
Scenario battery_signchange(int n_cells = 64, double slab_dt = 0.0125);
Perturbation battery_perturbation(double amplitude);

// synthetic energy triple that satisfies the interval bound yet blows up
// at a flux sign change; certificates must refuse to chain across it
void counterexample_series(std::vector<double>& times,
                           std::vector<double>& energy,
                           std::vector<double>& energy_left,
                           std::vector<double>& energy_right);
SignPartition counterexample_partition();

VerifyResult run_verification_battery();
void write_verify_json(const std::string& path, const VerifyResult& result);

}  // namespace ch
