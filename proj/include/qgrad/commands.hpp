#pragma once

#include <cstdint>
#include <exception>
#include <optional>
#include <string>

#include <json.hpp>

#include "qgrad/branch.hpp"
#include "qgrad/config.hpp"

namespace qgrad::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 1,
  kCheckViolation = 2,
  kSolverError = 3,
  kVerdictFailed = 4,
};

struct Output {
  int code = kOk;
  nlohmann::ordered_json json;
  std::string csv;  // empty when the command has no tabular output
};

nlohmann::ordered_json to_json(const SolutionRecord& r);
nlohmann::ordered_json to_json(const BranchDiagram& d, std::uint64_t seed);

/// scenario,lambda,kind,energy,residual,umin,umax,ordering
std::string to_csv(const BranchDiagram& d);

Output cmd_check(const Config& cfg);
Output cmd_solve(const Config& cfg);
Output cmd_sweep(const Config& cfg);
Output cmd_eigen(const Config& cfg);
Output cmd_md(const Config& cfg);
Output cmd_scenario(const std::string& name, std::uint64_t seed, std::optional<int> grid);

/// Diagnostic document and exit code for an exception escaping a command.
Output from_exception(const std::exception& e);

}  // namespace qgrad::cli
