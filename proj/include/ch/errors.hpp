#pragma once

#include <stdexcept>
#include <string>

namespace ch {

// Exit codes reported by the command-line driver.
enum class ExitCode : int {
  ok = 0,
  verification_failed = 1,
  not_admissible = 2,
  no_convergence = 3,
  bad_input = 4,
  io_failure = 5,
};

struct AdmissibilityError : std::runtime_error {
  explicit AdmissibilityError(const std::string& what) : std::runtime_error(what) {}
};

struct ConvergenceError : std::runtime_error {
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

inline void ensure(bool cond, const std::string& what) {
  if (!cond) throw std::invalid_argument(what);
}

inline void ensure_parse(bool cond, const std::string& what) {
  if (!cond) throw ParseError(what);
}

}  // namespace ch
