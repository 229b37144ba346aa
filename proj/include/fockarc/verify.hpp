#pragma once

#include "fockarc/kernels.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fockarc {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyOptions {
  kernels::Execution exec = kernels::Execution::Serial;
  /// Test hook: the named check compares against a perturbed value and fails.
  std::optional<std::string> inject_fault;
};

/// Names of the checks run by run_verification, in order.
std::vector<std::string> verification_checks();

/// Runs the property suite over the catalog. A check that throws is reported
/// as failed with the exception message. Throws std::invalid_argument when
/// inject_fault names no check.
std::vector<CheckResult> run_verification(const VerifyOptions& options = {});

}  // namespace fockarc
