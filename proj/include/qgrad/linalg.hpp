#pragma once

#include <memory>

#include <Eigen/SparseLU>

#include "qgrad/mesh.hpp"

namespace qgrad {

/// Sparse LU factorization with a 1-norm condition estimate.
class SparseFactor {
 public:
  /// Throws FactorizationError when the matrix is structurally or numerically singular.
  explicit SparseFactor(const SparseMatrix& a);

  Field solve(const Field& b) const;
  Field solve_transpose(const Field& b) const;

  /// Hager's estimate of ||A||_1 ||A^-1||_1.
  double condition_estimate() const;

 private:
  SparseMatrix a_;
  std::unique_ptr<Eigen::SparseLU<SparseMatrix>> lu_;
};

/// Direct solve with a normwise backward-error check
/// ||A x - b|| <= 1e-12 (||A|| ||x|| + ||b||), all in the infinity norm.
Field linear_solve(const SparseMatrix& a, const Field& rhs);

double norm_inf(const SparseMatrix& a);

SparseMatrix diagonal(const Field& d);

}  // namespace qgrad
