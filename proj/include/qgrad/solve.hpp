#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qgrad/linalg.hpp"
#include "qgrad/model.hpp"

namespace qgrad {

struct SolveOptions {
  double newton_tol = 1e-10;
  int max_newton = 50;
  double damping = 0.5;
  int max_halvings = 30;
  int mp_path_points = 41;
  double mp_descent_step = 0.1;
  double mp_tol = 1e-6;
  int max_mp_iters = 5000;
  double ps_guard = 1e6;
  // Newton also requires the last update to be this small in the sup norm, so
  // that roots with a singular Jacobian are resolved to the dedup distance.
  double newton_step_tol = 1e-8;
  int max_monotone = 20000;
  double tol_lu = 1e-8;

  /// Throws PreconditionError on nonpositive entries or too few path points.
  void validate() const;
};

enum class SolutionKind { minimal, local_min, mountain_pass, trivial_u0 };

std::string to_string(SolutionKind k);

struct SolutionRecord {
  double lambda = 0.0;
  Field u;
  Field v;
  double energy = 0.0;
  double residual = 0.0;
  SolutionKind kind = SolutionKind::minimal;
  int iterations = 0;
  // Ordering relative to named reference fields, e.g. "u0" -> "much_less".
  std::map<std::string, std::string> ordering;
};

struct PSDiagnostics {
  std::vector<double> energies;
  std::vector<double> norms;
  bool bounded = true;
  int iterations = 0;
};

/// Damped Newton on q A v - q f(v) = 0, backtracking on the dual residual.
SolutionRecord newton_q(const ProblemSpec& spec, const Barrier& barrier, const Field& v0,
                        const SolveOptions& opts = {});

enum class Direction { from_lower, from_upper };

/// Monotone (Picard with shift K) iteration between a lower and an optional upper
/// solution, finished by a Newton polish. Without an upper solution the sweep
/// from below is unbounded above and UnboundedError signals escape past ps_guard.
SolutionRecord monotone_iteration(const ProblemSpec& spec, const Barrier& barrier,
                                  const Field& lower, const std::optional<Field>& upper,
                                  Direction direction, const SolveOptions& opts = {});

/// Nodewise q (A w - f(w)); nonpositive for lower solutions, nonnegative for upper.
Field lower_upper_residual(const ProblemSpec& spec, const Barrier& barrier, const Field& w);

/// Strict lower solution lying below every candidate u-field. See README for
/// the construction; falls back to a validated constant level.
Barrier construct_barrier(const ProblemSpec& spec, const std::vector<Field>& candidates,
                          double tol_lu = 1e-8);

/// Path-based mountain pass between v-fields e1 and e2, polished by Newton.
std::pair<SolutionRecord, PSDiagnostics> mountain_pass(const ProblemSpec& spec,
                                                       const Barrier& barrier, const Field& e1,
                                                       const Field& e2,
                                                       const SolveOptions& opts = {});

/// Smallest t = 2^k, k >= 0, with I(base + t v) <= min(I(0), I(base)) - 1.
double ray_blowdown(const ProblemSpec& spec, const Barrier& barrier, const Field& v,
                    const std::optional<Field>& base = std::nullopt);

struct ProbeResult {
  std::vector<SolutionRecord> solutions;
  int converged = 0;
  int failed = 0;
};

using SolutionFilter = std::function<bool(const SolutionRecord&)>;

/// Newton from each start; converged roots are deduplicated at sup-distance
/// 1e-6 in u and then filtered.
ProbeResult uniqueness_probe(const ProblemSpec& spec, const Barrier& barrier,
                             const std::vector<Field>& starts, const SolutionFilter& filter = {},
                             const SolveOptions& opts = {});

}  // namespace qgrad
