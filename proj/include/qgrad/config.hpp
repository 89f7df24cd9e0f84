#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qgrad/model.hpp"
#include "qgrad/solve.hpp"

namespace qgrad {

enum class LambdaMode { single, grid, bracket };

struct LambdaSpec {
  LambdaMode mode = LambdaMode::single;
  double value = 0.0;
  std::vector<double> values;  // grid
  double lo = 0.0, hi = 0.0;   // bracket
};

/// Run configuration read from an INI-style file. See README for the keys.
struct Config {
  int dim = 1;
  std::array<std::array<double, 2>, 2> bounds{{{0.0, 1.0}, {0.0, 1.0}}};
  std::array<int, 2> counts{400, 400};
  double mu = 1.0;
  std::string cplus = "1";
  std::string cminus = "0";
  std::string h = "0";
  LambdaSpec lambda;
  SolveOptions solver;
  std::uint64_t seed = 0;
  std::string json_path;
  std::string csv_path;
};

/// Throws ConfigError on unknown sections or keys and malformed values, and
/// ParseError on malformed expressions.
Config parse_config(std::istream& in);
Config load_config(const std::string& path);

/// Grid override applied to every axis.
void override_grid(Config& cfg, int n);

struct SampledProblem {
  OperatorsPtr ops;
  Field cplus, cminus, h;
};

/// Mesh, operators and sampled coefficients; no assumption checks.
SampledProblem sample_problem(const Config& cfg);

/// Validated problem at the configured (or first) lambda. Throws SpecError.
ProblemSpec build_problem(const Config& cfg);

/// The lambda values a sweep visits; a bracket contributes its two ends.
std::vector<double> lambda_values(const LambdaSpec& l);

}  // namespace qgrad
