#pragma once

#include <string>
#include <vector>

#include "qgrad/mesh.hpp"

namespace qgrad {

inline constexpr double kTolZero = 1e-12;

/// Problem data on a fixed mesh: mu > 0 and sampled c+, c-, h, plus lambda.
/// c_lambda = lambda c+ - c-.
struct ProblemSpec {
  OperatorsPtr ops;
  double mu = 1.0;
  Field cplus;
  Field cminus;
  Field h;
  double lambda = 0.0;

  const Operators& op() const { return *ops; }
  const Mesh& mesh() const { return ops->mesh(); }
  int size() const { return ops->size(); }
  Field c_lambda() const { return lambda * cplus - cminus; }
  ProblemSpec with_lambda(double l) const {
    ProblemSpec s = *this;
    s.lambda = l;
    return s;
  }
};

struct SpecViolation {
  std::string what;
  std::vector<int> nodes;
};

/// Every violated structural assumption (mu > 0, c+- >= 0, c+ c- = 0, c+ not
/// identically zero, finite samples). Empty when the data is admissible.
std::vector<SpecViolation> check_spec(double mu, const Field& cplus, const Field& cminus,
                                      const Field& h);

/// Validating constructor; throws SpecError on the first violation.
ProblemSpec make_problem(OperatorsPtr ops, double mu, Field cplus, Field cminus, Field h,
                         double lambda = 0.0);

enum class BarrierSource { from_solution, constructed, constant_fallback };

std::string to_string(BarrierSource s);

/// Truncation level in v-variables. alpha > -1/mu + margin at every node.
struct Barrier {
  Field alpha;
  BarrierSource source = BarrierSource::constructed;
  double margin = 0.0;
};

/// Throws BarrierError unless alpha stays strictly above -1/mu.
Barrier make_barrier(const ProblemSpec& spec, Field alpha, BarrierSource source);

double g_fun(double s, double mu);
double G_fun(double s, double mu);
/// Derivative of g; zero below -1/mu.
double g_prime(double s, double mu);

Field cole_hopf(const Field& u, double mu);
/// Throws TransformDomainError naming the first node with v <= -1/mu.
Field inverse_cole_hopf(const Field& v, double mu);

/// Truncated nonlinearity: c_lambda g(s) + (1 + mu s) h for s >= alpha, frozen at
/// s = alpha below.
Field f_lambda(const ProblemSpec& spec, const Barrier& barrier, const Field& v);
/// One-sided derivative of f_lambda in s (zero on the frozen branch).
Field f_lambda_prime(const ProblemSpec& spec, const Barrier& barrier, const Field& v);
/// Nodewise primitive F(x, s) with F(x, 0) = 0 when alpha <= 0.
Field F_lambda(const ProblemSpec& spec, const Barrier& barrier, const Field& v);

struct EnergyReport {
  double value = 0.0;
  Field gradient;  // q A v - q f(v)
  double residual_norm = 0.0;
};

double energy_value(const ProblemSpec& spec, const Barrier& barrier, const Field& v);
/// q A v - q f(v), the exact gradient of energy_value.
Field energy_gradient(const ProblemSpec& spec, const Barrier& barrier, const Field& v);
EnergyReport energy(const ProblemSpec& spec, const Barrier& barrier, const Field& v);

/// q (A u - c_lambda u - mu |grad u|^2 - h) for the untransformed problem.
Field residual_p(const ProblemSpec& spec, const Field& u);

enum class Ordering { incomparable, leq, strictly_less, much_less };

std::string to_string(Ordering o);

inline constexpr double kTolHopf = 1e-9;

/// Discrete surrogate of u << w: strict interior inequality plus a positive
/// one-sided slope of w - u at every boundary-adjacent node.
Ordering check_ordering(const Field& u, const Field& w, const Mesh& mesh);

/// True when the relation is at least `at_least` (much_less > strictly_less > leq).
bool ordered(Ordering o, Ordering at_least);

}  // namespace qgrad
