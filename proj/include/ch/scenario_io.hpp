#pragma once

#include <optional>
#include <string>

#include "ch/stepper.hpp"

namespace ch {

// Strict JSON scenario parsing: unknown keys are rejected, malformed input
// raises ParseError, unreadable files raise IoError.
Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario(const std::string& path);

struct Perturbation {
  std::optional<InitialData> y0_delta;
  std::optional<TimeSampler> y_left_in_delta;
  std::optional<TimeSampler> y_right_in_delta;
};

Perturbation parse_perturbation(const std::string& json_text);
Perturbation load_perturbation(const std::string& path);

Scenario apply_perturbation(const Scenario& base, const Perturbation& p);

}  // namespace ch
