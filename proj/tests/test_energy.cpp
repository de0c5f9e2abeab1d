#include <doctest.h>

#include <cmath>
#include <limits>
#include <string>

#include "ch/calibration.hpp"
#include "ch/energy.hpp"
#include "ch/verify.hpp"

using namespace ch;

namespace {
double finite_min(const std::vector<double>& v) {
    double m = std::numeric_limits<double>::infinity();
    for (double x : v)
        if (std::isfinite(x)) m = std::min(m, x);
    return m;
}
}  // namespace

TEST_CASE("sobolev norm") {
    Grid g = Grid::uniform(256);
    ScalarField f = ScalarField::from_fn(g, [](double x) { return std::sin(3.141592653589793 * x); });
    double pi2 = 3.141592653589793 * 3.141592653589793;
    CHECK(sobolev_norm_sq(f, 1) == doctest::Approx(0.5 + pi2 * 0.5).epsilon(1e-3));
    CHECK(sobolev_norm_sq(f, 0) == doctest::Approx(0.5).epsilon(1e-4));
}

TEST_CASE("identical twins carry zero relative energy") {
    Scenario s = battery_order1(48, 0.02);
    s.t_final = 0.1;
    SolutionHistory a = run(s);
    EnergyReport rep = relative_energy(a, a);
    for (double e : rep.energy) CHECK(e == 0.0);
    for (double e : rep.energy_left) CHECK(e == 0.0);
    energy_identity_residual(rep, a, a);
    for (double r : rep.identity_residual) CHECK(std::abs(r) <= 1e-30);
}

TEST_CASE("twin runs must share their data") {
    Scenario s = battery_order1(48, 0.02);
    s.t_final = 0.1;
    SolutionHistory a = run(s);
    Scenario other = s;
    other.v_left = TimeSampler::constant(0.45);
    other.trace_left = {other.v_left};
    SolutionHistory b = run(other);
    CHECK_THROWS_AS(relative_energy(a, b), std::invalid_argument);
}

TEST_CASE("battery margins stay above the calibrated defect") {
    Scenario s = battery_order1(64, 0.015);
    SolutionHistory a = run(s);
    SolutionHistory b = run(apply_perturbation(s, battery_perturbation(1e-3)));
    EnergyReport rep = relative_energy(a, b);
    energy_identity_residual(rep, a, b);
    energy_inequality_check(rep, a, b);
    aux_inequality_check(rep, a, b, -1);
    aux_inequality_check(rep, a, b, +1);

    double tol = calib::kappa_margin * (s.grid().h + s.slab_dt);
    CHECK(finite_min(rep.energy_margin) >= -tol);
    CHECK(finite_min(rep.aux_margin_left) >= -tol);
    CHECK(finite_min(rep.aux_margin_right) >= -tol);
    for (double r : rep.identity_residual)
        CHECK(std::abs(r) <= calib::identity_coeff * (s.grid().h + s.slab_dt));

    // the explicit constant is labelled as such
    bool explicit_found = false;
    for (const NamedConstant& c : rep.constants)
        if (c.kind == "explicit") explicit_found = true;
    CHECK(explicit_found);
}

TEST_CASE("outflow intervals carry no side margins") {
    Scenario s = battery_outflow(48, 0.02);
    s.t_final = 0.2;
    SolutionHistory a = run(s);
    SolutionHistory b = run(apply_perturbation(s, battery_perturbation(1e-3)));
    EnergyReport rep = relative_energy(a, b);
    aux_inequality_check(rep, a, b, -1);
    aux_inequality_check(rep, a, b, +1);
    for (double m : rep.aux_margin_left) CHECK(std::isnan(m));
    for (double m : rep.aux_margin_right) CHECK(std::isnan(m));
}

TEST_CASE("rate certificate on synthetic growth") {
    std::vector<double> times, E, El, Er;
    for (int k = 0; k <= 100; ++k) {
        double t = 0.01 * k;
        times.push_back(t);
        E.push_back(std::exp(2.0 * t));
        El.push_back(0.5 * std::exp(2.0 * t));
        Er.push_back(0.0);
    }
    SignPartition part =
        sign_partition(TimeSampler::constant(1.0), TimeSampler::constant(-1.0), 1.0, 8);
    GronwallCertificate cert = gronwall_certificate(times, E, El, Er, part);
    CHECK(cert.all_pass);
    CHECK(cert.chain_ok);
    REQUIRE(cert.intervals.size() == 1);
    CHECK(cert.intervals[0].case_id == 1);
    CHECK(cert.intervals[0].c_hat == doctest::Approx(2.0).epsilon(1e-3));

    // an admissible rate cap turns the same series into a failure
    GronwallOptions strict;
    strict.c_max = 1.0;
    GronwallCertificate fail = gronwall_certificate(times, E, El, Er, part, strict);
    CHECK(!fail.all_pass);
}

TEST_CASE("certificate chains across a benign sign change") {
    Scenario s = battery_signchange(64, 0.0125);
    SolutionHistory a = run(s);
    SolutionHistory b = run(apply_perturbation(s, battery_perturbation(1e-3)));
    EnergyReport rep = relative_energy(a, b);
    GronwallCertificate cert = gronwall_certificate(rep.times, rep.energy, rep.energy_left,
                                                    rep.energy_right, rep.partition, {});
    CHECK(cert.all_pass);
    CHECK(cert.chain_ok);
    CHECK(cert.intervals.size() == 2);
}

TEST_CASE("synthetic blow-up triple is refused at the horizon") {
    std::vector<double> times, E, El, Er;
    counterexample_series(times, E, El, Er);
    SignPartition part = counterexample_partition();

    // the four-case differential system holds pointwise with C = 1
    for (std::size_t k = 0; k < times.size(); ++k) {
        double t = times[k];
        double lhs = 0.5 * std::exp(t) + 0.5 * El[k] * std::abs(-1.0 + t) + 0.5 * Er[k] * 1.0;
        CHECK(lhs <= E[k] + 1e-12);
    }

    GronwallCertificate cert = gronwall_certificate(times, E, El, Er, part);
    CHECK(cert.all_pass);  // the interval rate itself is tame
    CHECK(!cert.chain_ok);
    bool flagged = false;
    for (const std::string& m : cert.messages)
        if (m.find("non-continuable blow-up") != std::string::npos) flagged = true;
    CHECK(flagged);
}

TEST_CASE("higher-order ledger on the second-order battery") {
    Scenario s = battery_order2(64, 0.01);
    SolutionHistory a = run(s);
    SolutionHistory b = run(apply_perturbation(s, battery_perturbation(1e-3)));
    EnergyReport rep = relative_energy(a, b);
    higher_order_ledger(rep, a, b, calib::higher_order_c);

    CHECK(rep.order == 2);
    CHECK(rep.e_rel.size() == rep.times.size());
    double tol = calib::kappa_margin * (s.grid().h + s.slab_dt);
    CHECK(finite_min(rep.e_rel_margin) >= -tol);
    for (double r : rep.rellich_left)
        if (std::isfinite(r)) CHECK(r <= 3.0);
    for (double r : rep.rellich_right)
        if (std::isfinite(r)) CHECK(r <= 3.0);
    bool fitted = false;
    for (const NamedConstant& c : rep.constants)
        if (c.kind == "fitted") fitted = true;
    CHECK(fitted);
}
