#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qgrad/solve.hpp"
#include "qgrad/spectral.hpp"

namespace qgrad {

struct Verdict {
  std::string name;
  bool pass = false;
  std::map<std::string, double> evidence;
  std::string note;
};

struct LambdaBracket {
  double lo = 0.0;
  double hi = 0.0;
  int bisections = 0;
  double width() const { return hi - lo; }
};

struct BranchDiagram {
  std::string scenario;
  std::vector<SolutionRecord> records;
  std::optional<LambdaBracket> lambda_bar;
  std::optional<double> gamma1;
  std::vector<Verdict> verdicts;

  bool all_pass() const;
};

/// Random v-fields built from a few low sine modes; the leading amplitude is
/// uniform in [amp_lo, amp_hi].
std::vector<Field> random_starts(const Mesh& mesh, int count, std::mt19937_64& rng,
                                 double amp_lo, double amp_hi);

/// Solution of the lambda = 0 problem, or nullopt when none is found.
std::optional<SolutionRecord> solve_u0(const ProblemSpec& spec, const SolveOptions& opts = {});

/// Minimal solution above the constructed barrier. Fields in `uppers` that are
/// valid upper solutions bound the sweep from above. Throws on failure.
SolutionRecord find_minimal(const ProblemSpec& spec, const Barrier& barrier,
                            const std::vector<Field>& uppers, const SolveOptions& opts = {});

/// Seeded sweep over an increasing lambda grid: minimal solution, then a mountain
/// pass above it. Per-lambda failures become verdicts.
BranchDiagram sweep(const ProblemSpec& base, const std::vector<double>& lambdas,
                    const SolveOptions& opts = {}, const std::string& scenario = "sweep");

/// Bisection on existence of a solution with c+ u >= 0 (monotone attempt plus
/// `multistarts` Newton runs). Width <= 1e-3 lambda_hi on return.
LambdaBracket find_lambda_bar(const ProblemSpec& base, double lambda_lo, double lambda_hi,
                              std::uint64_t seed, const SolveOptions& opts = {},
                              int multistarts = 50);

const std::vector<std::string>& scenario_names();

/// Runs a canned scenario. `grid` overrides the default interior node count.
BranchDiagram verify_scenario(const std::string& name, std::uint64_t seed,
                              std::optional<int> grid = std::nullopt);

}  // namespace qgrad
