#include "qgrad/linalg.hpp"

#include <cmath>
#include <limits>

#include "qgrad/error.hpp"

namespace qgrad {

SparseFactor::SparseFactor(const SparseMatrix& a)
    : a_(a), lu_(std::make_unique<Eigen::SparseLU<SparseMatrix>>()) {
  if (a.rows() != a.cols()) throw DimensionError("factorization of a non-square matrix");
  a_.makeCompressed();
  lu_->compute(a_);
  if (lu_->info() != Eigen::Success)
    throw FactorizationError("sparse LU failed: " + lu_->lastErrorMessage(),
                             std::numeric_limits<double>::infinity());
}

Field SparseFactor::solve(const Field& b) const { return lu_->solve(b); }

Field SparseFactor::solve_transpose(const Field& b) const { return lu_->transpose().solve(b); }

double SparseFactor::condition_estimate() const {
  const int n = static_cast<int>(a_.rows());
  if (n == 0) return 1.0;
  Field x = Field::Constant(n, 1.0 / n);
  double est = 0.0;
  for (int iter = 0; iter < 5; ++iter) {
    const Field y = solve(x);
    if (!y.allFinite()) return std::numeric_limits<double>::infinity();
    est = y.lpNorm<1>();
    const Field xi = y.unaryExpr([](double t) { return t >= 0.0 ? 1.0 : -1.0; });
    const Field z = solve_transpose(xi);
    Eigen::Index j = 0;
    const double zmax = z.cwiseAbs().maxCoeff(&j);
    if (zmax <= z.dot(x)) break;
    x.setZero();
    x[j] = 1.0;
  }
  return norm_inf(SparseMatrix(a_.transpose())) * est;
}

double norm_inf(const SparseMatrix& a) {
  Field rows = Field::Zero(a.rows());
  for (int k = 0; k < a.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) rows[it.row()] += std::abs(it.value());
  return rows.size() ? rows.maxCoeff() : 0.0;
}

SparseMatrix diagonal(const Field& d) {
  SparseMatrix m(d.size(), d.size());
  m.reserve(Eigen::VectorXi::Constant(d.size(), 1));
  for (int i = 0; i < d.size(); ++i) m.insert(i, i) = d[i];
  m.makeCompressed();
  return m;
}

Field linear_solve(const SparseMatrix& a, const Field& rhs) {
  if (a.rows() != rhs.size()) throw DimensionError("right-hand side has wrong length");
  const SparseFactor lu(a);
  const Field x = lu.solve(rhs);
  const double r = (a * x - rhs).lpNorm<Eigen::Infinity>();
  const double scale = norm_inf(a) * x.lpNorm<Eigen::Infinity>() + rhs.lpNorm<Eigen::Infinity>();
  if (!x.allFinite() || r > 1e-12 * scale)
    throw FactorizationError("linear solve residual too large", lu.condition_estimate());
  return x;
}

}  // namespace qgrad
