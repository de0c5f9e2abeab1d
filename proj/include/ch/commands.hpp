#pragma once

#include <functional>
#include <string>

namespace ch {

int cmd_solve(const std::string& scenario_path, const std::string& out_dir);
int cmd_compare(const std::string& scenario_path, const std::string& perturb_path,
                const std::string& out_dir);
int cmd_convergence(const std::string& scenario_path, int levels, const std::string& out_dir);
int cmd_verify(const std::string& out_dir);

// Runs a command body and maps thrown failures onto the exit-code contract:
// 1 verification, 2 admissibility, 3 non-convergence, 4 bad input, 5 I/O.
int run_guarded(const std::function<int()>& body);

}  // namespace ch
