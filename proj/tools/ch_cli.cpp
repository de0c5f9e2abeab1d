#include <CLI11.hpp>

#include "ch/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"initial boundary value solver for the Camassa-Holm family on [0,1]"};
    app.require_subcommand(1);

    std::string scenario, out_dir, perturb;
    int levels = 3;

    CLI::App* solve = app.add_subcommand("solve", "run a scenario and write the state history");
    solve->add_option("scenario", scenario, "scenario json file")->required();
    solve->add_option("-o,--out", out_dir, "output directory")->required();

    CLI::App* compare =
        app.add_subcommand("compare", "run a scenario and a perturbed twin, write stability reports");
    compare->add_option("scenario", scenario, "scenario json file")->required();
    compare->add_option("--perturb", perturb, "perturbation json file")->required();
    compare->add_option("-o,--out", out_dir, "output directory")->required();

    CLI::App* conv =
        app.add_subcommand("convergence", "self-convergence study under joint refinement");
    conv->add_option("scenario", scenario, "scenario json file")->required();
    conv->add_option("--levels", levels, "number of grid levels (>= 3)")->required();
    conv->add_option("-o,--out", out_dir, "output directory")->required();

    CLI::App* verify = app.add_subcommand("verify", "run the built-in identity and oracle battery");
    verify->add_option("-o,--out", out_dir, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 4;
    }

    return ch::run_guarded([&]() -> int {
        if (solve->parsed()) return ch::cmd_solve(scenario, out_dir);
        if (compare->parsed()) return ch::cmd_compare(scenario, perturb, out_dir);
        if (conv->parsed()) return ch::cmd_convergence(scenario, levels, out_dir);
        return ch::cmd_verify(out_dir);
    });
}
