// One-shot calibration helper: prints the observed extremes that back the
// frozen constants in calibration.hpp. Not part of the test suite.
#include <cmath>
#include <cstdio>

#include "ch/calibration.hpp"
#include "ch/energy.hpp"
#include "ch/scenario_io.hpp"
#include "ch/verify.hpp"

using namespace ch;

namespace {

double finite_min(const std::vector<double>& v) {
    double m = std::numeric_limits<double>::infinity();
    for (double x : v)
        if (std::isfinite(x)) m = std::min(m, x);
    return m;
}

double finite_max(const std::vector<double>& v) {
    double m = -std::numeric_limits<double>::infinity();
    for (double x : v)
        if (std::isfinite(x)) m = std::max(m, x);
    return m;
}

void margins_order1(const Scenario& sc, const char* tag) {
    SolutionHistory a = run(sc);
    SolutionHistory b = run(apply_perturbation(sc, battery_perturbation(1e-3)));
    EnergyReport rep = relative_energy(a, b);
    energy_identity_residual(rep, a, b);
    energy_inequality_check(rep, a, b);
    aux_inequality_check(rep, a, b, -1);
    aux_inequality_check(rep, a, b, +1);
    GronwallCertificate cert = gronwall_certificate(rep.times, rep.energy, rep.energy_left,
                                                    rep.energy_right, rep.partition, {});
    double scale = sc.grid().h + sc.slab_dt;
    double worst_res = 0.0;
    for (double r : rep.identity_residual) worst_res = std::max(worst_res, std::abs(r));
    std::printf("%s N=%d slab=%g  (h+dt)=%.3g\n", tag, sc.n_cells, sc.slab_dt, scale);
    std::printf("  identity |res|max %.3e  /(h+dt) %.3e\n", worst_res, worst_res / scale);
    std::printf("  energy margin min %.3e  /(h+dt) %.3e\n", finite_min(rep.energy_margin),
                -finite_min(rep.energy_margin) / scale);
    std::printf("  aux L margin min  %.3e  /(h+dt) %.3e\n", finite_min(rep.aux_margin_left),
                -finite_min(rep.aux_margin_left) / scale);
    std::printf("  aux R margin min  %.3e  /(h+dt) %.3e\n", finite_min(rep.aux_margin_right),
                -finite_min(rep.aux_margin_right) / scale);
    double chat = 0.0;
    for (const auto& iv : cert.intervals) chat = std::max(chat, iv.c_hat);
    std::printf("  cert all_pass=%d chain_ok=%d max c_hat %.3e  E(T) %.3e\n", cert.all_pass,
                cert.chain_ok, chat, rep.energy.back());
    for (const auto& m : cert.messages) std::printf("    note: %s\n", m.c_str());
}

void margins_order2(const Scenario& sc, const char* tag) {
    SolutionHistory a = run(sc);
    SolutionHistory b = run(apply_perturbation(sc, battery_perturbation(1e-3)));
    EnergyReport rep = relative_energy(a, b);
    higher_order_ledger(rep, a, b, calib::higher_order_c);
    double scale = sc.grid().h + sc.slab_dt;
    double fitted = 0.0;
    for (const auto& c : rep.constants)
        if (c.kind == "fitted") fitted = std::max(fitted, c.value);
    std::printf("%s N=%d slab=%g\n", tag, sc.n_cells, sc.slab_dt);
    std::printf("  e_rel margin min %.3e  /(h+dt) %.3e  max fitted const %.3e\n",
                finite_min(rep.e_rel_margin), -finite_min(rep.e_rel_margin) / scale, fitted);
    std::printf("  rellich ratio max L %.3e R %.3e\n", finite_max(rep.rellich_left),
                finite_max(rep.rellich_right));
}

}  // namespace

int main() {
    for (int n : {64, 96, 128}) {
        margins_order1(battery_order1(n, 0.96 / n), "order1");
        margins_order1(battery_outflow(n, 0.96 / n), "outflow");
        margins_order1(battery_signchange(n, 0.8 / n), "signchange");
    }
    for (int n : {64, 128}) margins_order2(battery_order2(n, 0.64 / n), "order2");

    // quadratic perturbation scaling at fixed resolution
    {
        Scenario sc = battery_order1(96, 0.01);
        SolutionHistory a = run(sc);
        SolutionHistory b1 = run(apply_perturbation(sc, battery_perturbation(1e-3)));
        SolutionHistory b2 = run(apply_perturbation(sc, battery_perturbation(5e-4)));
        EnergyReport r1 = relative_energy(a, b1);
        EnergyReport r2 = relative_energy(a, b2);
        double m1 = finite_max(r1.energy), m2 = finite_max(r2.energy);
        std::printf("delta scaling: maxE(1e-3)=%.6e maxE(5e-4)=%.6e ratio %.4f (want ~4)\n", m1,
                    m2, m1 / m2);
    }

    // twin runs started from different iteration seeds
    {
        Scenario sc = battery_order1(64, 0.01);
        sc.t_final = 0.2;
        sc.params.picard_tol = 1e-13;
        Scenario alt = sc;
        alt.params.zero_initial_guess = true;
        EnergyReport rep = relative_energy(run(sc), run(alt));
        std::printf("uniqueness: max E %.3e\n", finite_max(rep.energy));
    }
    return 0;
}
