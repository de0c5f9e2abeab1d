#include "ch/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <future>
#include <iostream>
#include <limits>
#include <vector>

#include "ch/calibration.hpp"
#include "ch/energy.hpp"
#include "ch/errors.hpp"
#include "ch/reports.hpp"
#include "ch/scenario_io.hpp"
#include "ch/verify.hpp"

namespace ch {
namespace {

void make_out_dir(const std::string& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + out_dir + ": " + ec.message());
}

std::string join(const std::string& dir, const char* name) {
    return (std::filesystem::path(dir) / name).string();
}

EnergyReport build_report(const SolutionHistory& a, const SolutionHistory& b) {
    EnergyReport rep = relative_energy(a, b);
    if (rep.order == 1) {
        energy_identity_residual(rep, a, b);
        energy_inequality_check(rep, a, b);
        aux_inequality_check(rep, a, b, -1);
        aux_inequality_check(rep, a, b, +1);
    } else {
        higher_order_ledger(rep, a, b, calib::higher_order_c);
    }
    GronwallOptions opt;
    opt.c_max = calib::gronwall_c_max;
    rep.certificate = gronwall_certificate(rep.times, rep.energy, rep.energy_left,
                                           rep.energy_right, rep.partition, opt);
    return rep;
}

int thread_count() {
    if (const char* env = std::getenv("CH_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    return 1;
}

}  // namespace

int run_guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::bad_input);
    } catch (const AdmissibilityError& e) {
        std::cerr << "admissibility error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::not_admissible);
    } catch (const ConvergenceError& e) {
        std::cerr << "convergence error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::no_convergence);
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::io_failure);
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::bad_input);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::no_convergence);
    }
}

int cmd_solve(const std::string& scenario_path, const std::string& out_dir) {
    Scenario sc = load_scenario(scenario_path);
    make_out_dir(out_dir);
    SolutionHistory hist = run(sc);
    write_states_csv(join(out_dir, "states.csv"), hist);
    write_meta_json(join(out_dir, "meta.json"), hist);
    std::cout << "solved " << hist.n_states() - 1 << " slabs, wrote states.csv and meta.json\n";
    return 0;
}

int cmd_compare(const std::string& scenario_path, const std::string& perturb_path,
                const std::string& out_dir) {
    Scenario base = load_scenario(scenario_path);
    Perturbation delta = load_perturbation(perturb_path);
    Scenario perturbed = apply_perturbation(base, delta);
    make_out_dir(out_dir);

    SolutionHistory a = run(base);
    SolutionHistory b = run(perturbed);
    EnergyReport rep = build_report(a, b);
    write_energy_report_csv(join(out_dir, "energy_report.csv"), rep);
    write_certificate_json(join(out_dir, "certificate.json"), rep);

    const GronwallCertificate& cert = rep.certificate;
    std::cout << "certificate: " << (cert.all_pass ? "bounded rates" : "rate cap exceeded") << ", "
              << (cert.chain_ok ? "chained across sign changes" : "continuation failed") << "\n";
    for (const std::string& m : cert.messages) std::cout << "  " << m << "\n";
    return 0;
}

int cmd_convergence(const std::string& scenario_path, int levels, const std::string& out_dir) {
    ensure_parse(levels >= 3, "convergence needs at least 3 levels");
    Scenario sc = load_scenario(scenario_path);
    make_out_dir(out_dir);

    struct LevelOut {
        SolutionHistory base;
        double residual = std::numeric_limits<double>::quiet_NaN();
    };

    // joint space-time refinement; the last job is the reference grid
    std::vector<int> factors;
    for (int i = 0; i < levels; ++i) factors.push_back(1 << i);
    factors.push_back((1 << (levels - 1)) * 8);

    auto job = [&](int factor, bool is_ref) {
        Scenario s = sc;
        s.n_cells = sc.n_cells * factor;
        s.slab_dt = sc.slab_dt / factor;
        LevelOut out;
        out.base = run(s);
        if (!is_ref && s.order == 1) {
            SolutionHistory twin = run(apply_perturbation(s, battery_perturbation(1e-3)));
            EnergyReport rep = relative_energy(out.base, twin);
            energy_identity_residual(rep, out.base, twin);
            double worst = 0.0;
            for (double r : rep.identity_residual) worst = std::max(worst, std::abs(r));
            out.residual = worst;
        }
        return out;
    };

    std::vector<LevelOut> results(factors.size());
    const int threads = thread_count();
    if (threads > 1) {
        for (std::size_t start = 0; start < factors.size(); start += threads) {
            std::size_t stop = std::min(factors.size(), start + threads);
            std::vector<std::future<LevelOut>> futs;
            for (std::size_t i = start; i < stop; ++i)
                futs.push_back(std::async(std::launch::async, job, factors[i],
                                          i + 1 == factors.size()));
            for (std::size_t i = start; i < stop; ++i) results[i] = futs[i - start].get();
        }
    } else {
        for (std::size_t i = 0; i < factors.size(); ++i)
            results[i] = job(factors[i], i + 1 == factors.size());
    }

    const SolutionHistory& ref = results.back().base;
    const double t_tol = 1e-9 * std::max(1.0, sc.t_final);

    std::vector<ConvergenceRow> rows(levels);
    for (int i = 0; i < levels; ++i) {
        const SolutionHistory& coarse = results[i].base;
        int stride = ref.scenario.n_cells / coarse.scenario.n_cells;
        double ev = 0.0, ey = 0.0;
        int r = 0;
        for (const State& s : coarse.states) {
            while (r < ref.n_states() && ref.states[r].t < s.t - t_tol) ++r;
            ensure(r < ref.n_states() && std::abs(ref.states[r].t - s.t) <= t_tol,
                   "reference run does not share the coarse time grid");
            const State& sr = ref.states[r];
            for (int j = 0; j <= coarse.scenario.n_cells; ++j) {
                ev = std::max(ev, std::abs(s.v.values[j] - sr.v.values[j * stride]));
                ey = std::max(ey, std::abs(s.y.values[j] - sr.y.values[j * stride]));
            }
        }
        rows[i].n_cells = coarse.scenario.n_cells;
        rows[i].err_v = ev;
        rows[i].err_y = ey;
        rows[i].identity_residual = results[i].residual;
    }
    auto rate = [](double prev, double cur) {
        if (prev == 0.0 && cur == 0.0) return std::numeric_limits<double>::infinity();
        if (prev <= 0.0 || cur <= 0.0) return std::numeric_limits<double>::quiet_NaN();
        return std::log2(prev / cur);
    };
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (int i = 0; i < levels; ++i) {
        rows[i].order_v = i == 0 ? nan : rate(rows[i - 1].err_v, rows[i].err_v);
        rows[i].order_y = i == 0 ? nan : rate(rows[i - 1].err_y, rows[i].err_y);
        rows[i].order_residual =
            i == 0 ? nan : rate(rows[i - 1].identity_residual, rows[i].identity_residual);
    }
    write_orders_csv(join(out_dir, "orders.csv"), rows);
    std::cout << "wrote orders.csv over " << levels << " levels (reference N="
              << ref.scenario.n_cells << ")\n";
    return 0;
}

int cmd_verify(const std::string& out_dir) {
    make_out_dir(out_dir);
    VerifyResult res = run_verification_battery();
    write_verify_json(join(out_dir, "verify.json"), res);
    if (!res.all_pass) {
        std::cerr << "verification failed:\n";
        for (const VerifyCheck& c : res.checks)
            if (!c.pass)
                std::cerr << "  " << c.name << ": observed " << c.observed << " > threshold "
                          << c.threshold << "\n";
        return static_cast<int>(ExitCode::verification_failed);
    }
    std::cout << "verification passed (" << res.checks.size() << " checks), wrote verify.json\n";
    return 0;
}

}  // namespace ch
