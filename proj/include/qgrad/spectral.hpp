#pragma once

#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "qgrad/model.hpp"

namespace qgrad {

struct MdResult {
  double value = std::numeric_limits<double>::infinity();
  std::optional<Field> minimizer;  // h1_norm 1, zero where d > 0
  int subspace_dim = 0;
};

/// inf of (|grad w|^2 - mu h w^2) over unit H^1_0 fields vanishing where d > 0.
MdResult compute_md(const Operators& ops, const Field& d, const Field& h, double mu);

/// Same infimum over the unit L^2 sphere.
double compute_md_l2(const Operators& ops, const Field& d, const Field& h, double mu);

/// Whether both normalizations agree in sign.
bool md_sign_equivalence(const Operators& ops, const Field& d, const Field& h, double mu);

/// Strong-form linearization at u0: A - 2 mu sum_k diag(D_k u0) D_k + diag(c-).
SparseMatrix assemble_linearized(const ProblemSpec& spec, const Field& u0);

struct EigenPair {
  double gamma1 = 0.0;
  Field phi1;  // positive, unit H^1_0 norm
  double residual = 0.0;
  std::vector<std::pair<double, double>> mu1_curve;
  bool concave = true;
};

inline constexpr double kTolEig = 1e-8;
inline constexpr double kCondMax = 1e12;

/// Principal value mu1(gamma) of (L - gamma m) phi = mu mbar phi, mbar = max(m, 1),
/// obtained by power iteration on K = (L - gamma m + gamma^+ mbar)^-1 mbar.
double principal_mu1(const SparseMatrix& l, const Field& m, double gamma, Field* phi = nullptr);

/// Root gamma1 of mu1 with a positive eigenvector.
EigenPair principal_eigenvalue(const Operators& ops, const SparseMatrix& l, const Field& m,
                               int curve_samples = 21);

enum class ProbeSign { positive, negative, no_solution_like, mixed };

std::string to_string(ProbeSign s);

/// Solves (L - gamma m) w = rhs and classifies w against 0.
ProbeSign max_antimax_probe(const Mesh& mesh, const SparseMatrix& l, const Field& m,
                            double gamma, const Field& rhs);

/// Smallest eigenvalue of the Dirichlet stiffness on a rectangle (closed form).
double stiffness_lambda_min(const Mesh& mesh);

}  // namespace qgrad
