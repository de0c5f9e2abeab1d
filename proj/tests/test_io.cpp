#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "ch/commands.hpp"
#include "ch/energy.hpp"
#include "ch/errors.hpp"
#include "ch/reports.hpp"
#include "ch/scenario_io.hpp"
#include "ch/verify.hpp"

using namespace ch;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(bool(in));
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string out_dir() {
    static std::string dir = [] {
        std::string d = "io_test_out";
        std::filesystem::create_directories(d);
        return d;
    }();
    return dir;
}

std::string write_text(const std::string& name, const std::string& text) {
    std::string path = out_dir() + "/" + name;
    std::ofstream out(path, std::ios::binary);
    out << text;
    return path;
}

const char* kFullScenario = R"({
  "order": {"n": 2, "kappa": 0.0},
  "domain": {"t_final": 0.25, "n_cells": 48, "slab_dt": 0.0125},
  "initial": {"y0": {"type": "gaussian_bump", "amplitude": 0.5, "center": 0.4, "width": 0.2}},
  "boundary": {
    "v_left": {"type": "linear", "a": 0.3, "b": -0.1},
    "v_right": {"type": "constant", "value": -0.2},
    "trace_left": [{"type": "linear", "a": 0.3, "b": -0.1}, {"type": "constant", "value": 0.05}],
    "trace_right": [{"type": "constant", "value": -0.2}, {"type": "sine", "amplitude": 0.1, "omega": 2.0, "phase": 0.5, "offset": 0.0}],
    "y_left_in": {"type": "polynomial", "coeffs": [0.1, 0.2]},
    "y_right_in": {"type": "table", "times": [0.0, 1.0], "values": [-0.1, -0.3]}
  },
  "solver": {"picard_tol": 1e-11, "picard_max_iter": 40, "relax": 0.9,
             "sign_change_cap": 8, "eps_v_rel": 1e-7, "max_halvings": 6,
             "zero_initial_guess": true}
})";

}  // namespace

TEST_CASE("scenario parsing restores every field") {
    Scenario sc = parse_scenario(kFullScenario);
    CHECK(sc.order == 2);
    CHECK(sc.kappa == 0.0);
    CHECK(sc.t_final == 0.25);
    CHECK(sc.n_cells == 48);
    CHECK(sc.slab_dt == 0.0125);

    CHECK(sc.y0.kind() == "gaussian_bump");
    CHECK(sc.y0(0.4) == doctest::Approx(0.5));
    CHECK(sc.v_left(2.0) == doctest::Approx(0.1));
    CHECK(sc.v_right(0.7) == doctest::Approx(-0.2));
    REQUIRE(sc.trace_left.size() == 2);
    REQUIRE(sc.trace_right.size() == 2);
    CHECK(sc.trace_left[1](3.0) == doctest::Approx(0.05));
    CHECK(sc.trace_right[1](0.0) == doctest::Approx(0.1 * std::sin(0.5)));
    CHECK(sc.y_left_in(0.5) == doctest::Approx(0.2));
    CHECK(sc.y_right_in(0.5) == doctest::Approx(-0.2));
    CHECK(sc.y_right_in(4.0) == doctest::Approx(-0.3));  // table clamps

    CHECK(sc.params.picard_tol == 1e-11);
    CHECK(sc.params.picard_max_iter == 40);
    CHECK(sc.params.relax == 0.9);
    CHECK(sc.params.sign_change_cap == 8);
    CHECK(sc.params.eps_v_rel == 1e-7);
    CHECK(sc.params.max_halvings == 6);
    CHECK(sc.params.zero_initial_guess);
}

TEST_CASE("omitted sections fall back to defaults") {
    const char* minimal = R"({
      "order": {"n": 3},
      "domain": {"t_final": 0.1, "n_cells": 32, "slab_dt": 0.01},
      "initial": {"y0": {"type": "constant", "value": 1.0}},
      "boundary": {"v_left": {"type": "constant", "value": 0.2},
                   "v_right": {"type": "constant", "value": 0.2}}
    })";
    Scenario sc = parse_scenario(minimal);
    CHECK(sc.kappa == 0.0);
    REQUIRE(sc.trace_left.size() == 3);
    CHECK(sc.trace_left[0].max_difference(sc.v_left, 1.0) == 0.0);
    CHECK(sc.trace_left[1](0.3) == 0.0);
    CHECK(sc.trace_left[2](0.3) == 0.0);
    CHECK(sc.y_left_in(0.9) == 0.0);
    CHECK(sc.y_right_in(0.9) == 0.0);
    SolverParams defaults;
    CHECK(sc.params.picard_tol == defaults.picard_tol);
    CHECK(sc.params.max_halvings == defaults.max_halvings);
    CHECK(!sc.params.zero_initial_guess);
}

TEST_CASE("strict parsing rejects bad input") {
    CHECK_THROWS_AS(parse_scenario("{ not json"), ParseError);
    CHECK_THROWS_AS(parse_scenario(R"({"order": {"n": 1}})"), ParseError);  // missing sections

    std::string with_typo = kFullScenario;
    auto pos = with_typo.find("\"domain\"");
    with_typo.replace(pos, 8, "\"domian\"");
    CHECK_THROWS_AS(parse_scenario(with_typo), ParseError);

    std::string nested_typo = kFullScenario;
    pos = nested_typo.find("\"slab_dt\"");
    nested_typo.replace(pos, 9, "\"slabdt\"");
    CHECK_THROWS_AS(parse_scenario(nested_typo), ParseError);

    const char* bad_sampler = R"({
      "order": {"n": 1},
      "domain": {"t_final": 0.1, "n_cells": 32, "slab_dt": 0.01},
      "initial": {"y0": {"type": "constant", "value": 1.0}},
      "boundary": {"v_left": {"type": "spline", "value": 0.2},
                   "v_right": {"type": "constant", "value": 0.2}}
    })";
    CHECK_THROWS_AS(parse_scenario(bad_sampler), ParseError);

    CHECK_THROWS_AS(load_scenario("does_not_exist.json"), IoError);
    CHECK_THROWS_AS(load_perturbation("does_not_exist.json"), IoError);
}

TEST_CASE("perturbations add onto the base scenario") {
    Scenario base = parse_scenario(kFullScenario);
    Perturbation p = parse_perturbation(R"({
      "y0_delta": {"type": "constant", "value": 0.01},
      "y_left_in_delta": {"type": "constant", "value": -0.02}
    })");
    Scenario shifted = apply_perturbation(base, p);
    CHECK(shifted.y0(0.4) == doctest::Approx(base.y0(0.4) + 0.01));
    CHECK(shifted.y_left_in(0.5) == doctest::Approx(base.y_left_in(0.5) - 0.02));
    CHECK(shifted.y_right_in(0.5) == doctest::Approx(base.y_right_in(0.5)));
    CHECK(shifted.v_left.max_difference(base.v_left, base.t_final) == 0.0);

    CHECK_THROWS_AS(parse_perturbation(R"({"y0": {"type": "constant", "value": 1}})"), ParseError);
    CHECK_THROWS_AS(parse_perturbation("["), ParseError);
}

TEST_CASE("seventeen digit formatting round-trips") {
    for (double v : {1.0 / 3.0, 0.1, -2.5e17, 1e-300, 0.0, 6.02214076e23,
                     std::numeric_limits<double>::denorm_min()}) {
        std::string s = format_g17(v);
        CHECK(std::strtod(s.c_str(), nullptr) == v);  // stod throws ERANGE on subnormals
    }
    CHECK(format_g17(std::nan("")) == "nan");
}

TEST_CASE("report writers are deterministic") {
    Scenario sc = battery_order1(24, 0.02);
    sc.t_final = 0.06;
    SolutionHistory hist = run(sc);

    std::string p1 = out_dir() + "/states_a.csv";
    std::string p2 = out_dir() + "/states_b.csv";
    write_states_csv(p1, hist);
    write_states_csv(p2, hist);
    std::string text = read_file(p1);
    CHECK(text == read_file(p2));
    CHECK(text.rfind("t,x,y,v\n", 0) == 0);

    write_meta_json(p1, hist);
    write_meta_json(p2, hist);
    std::string meta = read_file(p1);
    CHECK(meta == read_file(p2));
    CHECK(meta.find("\"flux_partition\"") != std::string::npos);

    EnergyReport rep = relative_energy(hist, hist);
    energy_identity_residual(rep, hist, hist);
    write_energy_report_csv(p1, rep);
    write_energy_report_csv(p2, rep);
    std::string csv = read_file(p1);
    CHECK(csv == read_file(p2));
    CHECK(csv.rfind("t,E,E_left,E_right,identity_residual,", 0) == 0);
    CHECK(csv.find("nan") != std::string::npos);  // margins were never computed

    write_certificate_json(p1, rep);
    CHECK(read_file(p1).find("\"chain_ok\"") != std::string::npos);
}

TEST_CASE("order table encodes undefined and exact rates") {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<ConvergenceRow> rows(2);
    rows[0] = {64, 1e-2, 2e-2, 4e-3, nan, nan, nan};
    rows[1] = {128, 0.0, 5e-3, 1e-3, inf, 2.0, 2.0};
    std::string path = out_dir() + "/orders_test.csv";
    write_orders_csv(path, rows);
    std::string text = read_file(path);
    CHECK(text.find("64,") != std::string::npos);
    CHECK(text.find(",,,\n") != std::string::npos);   // first level has no rates
    CHECK(text.find(",exact,2,2\n") != std::string::npos);
}

TEST_CASE("guarded execution maps failures onto exit codes") {
    CHECK(run_guarded([] { return 0; }) == 0);
    CHECK(run_guarded([]() -> int { throw ParseError("x"); }) == 4);
    CHECK(run_guarded([]() -> int { throw AdmissibilityError("x"); }) == 2);
    CHECK(run_guarded([]() -> int { throw ConvergenceError("x"); }) == 3);
    CHECK(run_guarded([]() -> int { throw IoError("x"); }) == 5);
    CHECK(run_guarded([]() -> int { throw std::invalid_argument("x"); }) == 4);
}

TEST_CASE("solve command end to end") {
    const char* zero = R"({
      "order": {"n": 1, "kappa": 0.0},
      "domain": {"t_final": 0.06, "n_cells": 24, "slab_dt": 0.02},
      "initial": {"y0": {"type": "constant", "value": 0.0}},
      "boundary": {"v_left": {"type": "constant", "value": 0.0},
                   "v_right": {"type": "constant", "value": 0.0}}
    })";
    std::string path = write_text("zero_case.json", zero);
    std::string dir = out_dir() + "/solve_zero";
    CHECK(run_guarded([&] { return cmd_solve(path, dir); }) == 0);
    CHECK(std::filesystem::exists(dir + "/states.csv"));
    CHECK(std::filesystem::exists(dir + "/meta.json"));

    CHECK(run_guarded([&] { return cmd_solve("missing.json", dir); }) == 5);
    std::string bad = write_text("bad_case.json", "{broken");
    CHECK(run_guarded([&] { return cmd_solve(bad, dir); }) == 4);

    // first trace component contradicting the declared flux
    const char* mismatched = R"({
      "order": {"n": 1, "kappa": 0.0},
      "domain": {"t_final": 0.06, "n_cells": 24, "slab_dt": 0.02},
      "initial": {"y0": {"type": "constant", "value": 0.0}},
      "boundary": {"v_left": {"type": "constant", "value": 0.1},
                   "v_right": {"type": "constant", "value": 0.0},
                   "trace_left": [{"type": "constant", "value": 0.3}]}
    })";
    std::string clash = write_text("mismatch_case.json", mismatched);
    CHECK(run_guarded([&] { return cmd_solve(clash, dir); }) == 2);

    // unreachable tolerance with halving forbidden
    const char* doomed = R"({
      "order": {"n": 1, "kappa": 0.0},
      "domain": {"t_final": 0.06, "n_cells": 24, "slab_dt": 0.02},
      "initial": {"y0": {"type": "gaussian_bump", "amplitude": 0.7, "center": 0.5, "width": 0.2}},
      "boundary": {"v_left": {"type": "constant", "value": 0.2},
                   "v_right": {"type": "constant", "value": -0.2}},
      "solver": {"picard_tol": 1e-300, "picard_max_iter": 1, "max_halvings": 1}
    })";
    std::string hopeless = write_text("doomed_case.json", doomed);
    CHECK(run_guarded([&] { return cmd_solve(hopeless, dir); }) == 3);

    CHECK(run_guarded([&] { return cmd_convergence(path, 2, dir); }) == 4);
}
