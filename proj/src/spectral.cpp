#include "qgrad/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/SparseCholesky>

#include "qgrad/error.hpp"
#include "qgrad/linalg.hpp"

namespace qgrad {

double stiffness_lambda_min(const Mesh& mesh) {
  double out = 0.0;
  for (int a = 0; a < mesh.dim(); ++a) {
    const auto& ax = mesh.axis(a);
    const double s = std::sin(std::numbers::pi * ax.spacing / (2.0 * (ax.hi - ax.lo)));
    out += 4.0 * s * s / (ax.spacing * ax.spacing);
  }
  return out;
}

namespace {

std::vector<int> zero_set(const Field& d) {
  std::vector<int> s;
  for (int i = 0; i < d.size(); ++i)
    if (std::abs(d[i]) <= kTolZero) s.push_back(i);
  return s;
}

SparseMatrix restrict(const SparseMatrix& a, const std::vector<int>& idx) {
  std::vector<int> pos(a.rows(), -1);
  for (std::size_t k = 0; k < idx.size(); ++k) pos[idx[k]] = static_cast<int>(k);
  std::vector<Eigen::Triplet<double>> t;
  for (int c = 0; c < a.outerSize(); ++c)
    for (SparseMatrix::InnerIterator it(a, c); it; ++it)
      if (pos[it.row()] >= 0 && pos[it.col()] >= 0)
        t.emplace_back(pos[it.row()], pos[it.col()], it.value());
  SparseMatrix out(idx.size(), idx.size());
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

// Number of eigenvalues of the pencil (K, B) below t, by Sylvester inertia of an
// LDLT factorization of K - t B; -1 when the factorization breaks down.
int count_below(const SparseMatrix& k, const SparseMatrix& b, double t) {
  Eigen::SimplicialLDLT<SparseMatrix> ldlt(SparseMatrix(k - t * b));
  if (ldlt.info() != Eigen::Success) return -1;
  return static_cast<int>((ldlt.vectorD().array() < 0.0).count());
}

// Smallest eigenvalue of the symmetric pencil (K, B), B positive definite. The
// eigenvalue is first bracketed by inertia counts starting from a shift s below
// the spectrum, then inverse iteration from the lower end recovers the vector.
std::pair<double, Field> smallest_pencil(const SparseMatrix& k, const SparseMatrix& b,
                                         double s) {
  Field x = Field::Ones(k.rows());
  x /= std::sqrt(x.dot(b * x));
  double lo = s, hi = x.dot(k * x);
  const double scale = std::max(1.0, std::abs(hi) + std::abs(lo));
  while (hi - lo > 1e-10 * scale) {
    const double mid = 0.5 * (lo + hi);
    const int n = count_below(k, b, mid);
    if (n == 0) lo = mid;
    else hi = mid;  // a breakdown means mid is (numerically) an eigenvalue
  }

  Eigen::SimplicialLDLT<SparseMatrix> ldlt(SparseMatrix(k - lo * b));
  if (ldlt.info() != Eigen::Success) throw ConvergenceError("shifted pencil is singular");
  double rq = hi;
  for (int it = 0; it < 2000; ++it) {
    Field y = ldlt.solve(b * x);
    if (!y.allFinite()) throw ConvergenceError("inverse iteration overflowed", x, it);
    y /= std::sqrt(y.dot(b * y));
    const double next = y.dot(k * y);
    const double change = std::abs(next - rq);
    x = std::move(y);
    rq = next;
    if (it > 2 && change <= 1e-15 * scale) return {rq, x};
    // Clustered spectrum: the value is pinned by the bracket even if the
    // vector is still rotating within the cluster.
    if (it > 200 && rq <= hi + 1e-10 * scale && change <= 1e-12 * scale) return {rq, x};
  }
  throw ConvergenceError("inverse iteration stagnated", x, 2000);
}

}  // namespace

MdResult compute_md(const Operators& ops, const Field& d, const Field& h, double mu) {
  check_size(ops, d);
  check_size(ops, h);
  MdResult out;
  const auto idx = zero_set(d);
  out.subspace_dim = static_cast<int>(idx.size());
  if (idx.empty()) return out;

  const SparseMatrix as = restrict(ops.stiffness(), idx);
  Field hs(idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) hs[k] = h[idx[k]];
  const SparseMatrix kmat = as - mu * diagonal(hs);
  const double hplus = std::max(hs.maxCoeff(), 0.0);
  // Pencil eigenvalues are >= 1 - mu h+ / lambda_min(A), so this lies below them.
  const double shift = -mu * hplus / stiffness_lambda_min(ops.mesh());
  auto [value, x] = smallest_pencil(kmat, as, shift);

  Field full = Field::Zero(ops.size());
  for (std::size_t k = 0; k < idx.size(); ++k) full[idx[k]] = x[k];
  if (full.sum() < 0.0) full = -full;
  full /= h1_norm(ops, full);
  out.value = value;
  out.minimizer = std::move(full);
  return out;
}

double compute_md_l2(const Operators& ops, const Field& d, const Field& h, double mu) {
  check_size(ops, d);
  check_size(ops, h);
  const auto idx = zero_set(d);
  if (idx.empty()) return std::numeric_limits<double>::infinity();
  const SparseMatrix as = restrict(ops.stiffness(), idx);
  Field hs(idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) hs[k] = h[idx[k]];
  const SparseMatrix kmat = as - mu * diagonal(hs);
  SparseMatrix id(idx.size(), idx.size());
  id.setIdentity();
  const double hplus = std::max(hs.maxCoeff(), 0.0);
  const double shift = stiffness_lambda_min(ops.mesh()) - mu * hplus - 1.0;
  return smallest_pencil(kmat, id, shift).first;
}

bool md_sign_equivalence(const Operators& ops, const Field& d, const Field& h, double mu) {
  const double a = compute_md(ops, d, h, mu).value;
  const double b = compute_md_l2(ops, d, h, mu);
  return (a > 0.0) == (b > 0.0);
}

SparseMatrix assemble_linearized(const ProblemSpec& spec, const Field& u0) {
  check_size(spec.op(), u0);
  SparseMatrix l = spec.op().stiffness() + diagonal(spec.cminus);
  for (int a = 0; a < spec.mesh().dim(); ++a) {
    const Field slope = spec.op().diff(a) * u0;
    l -= 2.0 * spec.mu * (diagonal(slope) * spec.op().diff(a));
  }
  l.prune(0.0);
  l.makeCompressed();
  return l;
}

double principal_mu1(const SparseMatrix& l, const Field& m, double gamma, Field* phi) {
  const Field mbar = m.cwiseMax(1.0);
  const double gp = std::max(gamma, 0.0);
  const SparseMatrix shifted = l - gamma * diagonal(m) + gp * diagonal(mbar);
  const SparseFactor lu(shifted);
  Field x = Field::Ones(l.rows());
  double kappa = 0.0;
  constexpr int kMaxIter = 20000;
  for (int it = 0; it < kMaxIter; ++it) {
    Field y = lu.solve(mbar.cwiseProduct(x));
    const double scale = y.lpNorm<Eigen::Infinity>();
    if (!(scale > 0.0) || !std::isfinite(scale))
      throw ConvergenceError("power iteration collapsed", x, it);
    y /= scale;
    const double change = (y - x).lpNorm<Eigen::Infinity>();
    const double knext = scale / x.lpNorm<Eigen::Infinity>();
    x = std::move(y);
    const bool settled = std::abs(knext - kappa) <= 1e-14 * knext && change <= 1e-12;
    kappa = knext;
    if (settled) {
      if (x.minCoeff() <= 0.0)
        throw ConvergenceError("principal eigenvector is not positive", x, it);
      if (phi) *phi = x;
      return 1.0 / kappa - gp;
    }
  }
  throw ConvergenceError("power iteration stagnated", x, kMaxIter);
}

EigenPair principal_eigenvalue(const Operators& ops, const SparseMatrix& l, const Field& m,
                               int curve_samples) {
  check_size(ops, m);
  if (m.minCoeff() < 0.0) throw NoEigenvalueError("weight must be nonnegative");
  if (!(m.maxCoeff() > kTolZero)) throw NoEigenvalueError("weight vanishes identically");

  const double at_zero = principal_mu1(l, m, 0.0);
  if (!(at_zero > 0.0)) throw NoEigenvalueError("mu1(0) is not positive");

  double lo = 0.0, flo = at_zero;
  double hi = 1.0, fhi = principal_mu1(l, m, hi);
  for (int k = 0; fhi > 0.0; ++k) {
    if (k > 80) throw NoEigenvalueError("mu1 does not change sign");
    lo = hi;
    flo = fhi;
    hi *= 2.0;
    fhi = principal_mu1(l, m, hi);
  }

  // Illinois variant of regula falsi on the sign change.
  double gamma = hi;
  int side = 0;
  for (int it = 0; it < 200; ++it) {
    gamma = (lo * fhi - hi * flo) / (fhi - flo);
    const double f = principal_mu1(l, m, gamma);
    if (std::abs(f) <= 1e-10 || hi - lo <= 1e-14 * hi) break;
    if ((f > 0.0) == (flo > 0.0)) {
      lo = gamma;
      flo = f;
      if (side == -1) fhi *= 0.5;
      side = -1;
    } else {
      hi = gamma;
      fhi = f;
      if (side == 1) flo *= 0.5;
      side = 1;
    }
  }

  EigenPair out;
  out.gamma1 = gamma;
  principal_mu1(l, m, gamma, &out.phi1);
  out.phi1 /= h1_norm(ops, out.phi1);
  const double q = ops.cell_measure();
  const Field r = q * (l * out.phi1 - gamma * m.cwiseProduct(out.phi1));
  out.residual = dual_norm(ops, r);

  for (int k = 0; k < curve_samples; ++k) {
    const double g = 2.0 * gamma * k / std::max(curve_samples - 1, 1);
    out.mu1_curve.emplace_back(g, principal_mu1(l, m, g));
  }
  for (std::size_t k = 1; k + 1 < out.mu1_curve.size(); ++k) {
    const double dd = out.mu1_curve[k + 1].second - 2.0 * out.mu1_curve[k].second +
                      out.mu1_curve[k - 1].second;
    if (dd > 1e-8 * std::max(1.0, std::abs(at_zero))) out.concave = false;
  }
  return out;
}

std::string to_string(ProbeSign s) {
  switch (s) {
    case ProbeSign::positive: return "positive";
    case ProbeSign::negative: return "negative";
    case ProbeSign::no_solution_like: return "no_solution_like";
    case ProbeSign::mixed: return "mixed";
  }
  return "unknown";
}

ProbeSign max_antimax_probe(const Mesh& mesh, const SparseMatrix& l, const Field& m,
                            double gamma, const Field& rhs) {
  if (rhs.minCoeff() < 0.0 || !(rhs.maxCoeff() > 0.0))
    throw PreconditionError("probe right-hand side must be nonnegative and nonzero");
  const SparseMatrix op = l - gamma * diagonal(m);
  try {
    const SparseFactor lu(op);
    if (lu.condition_estimate() > kCondMax) return ProbeSign::no_solution_like;
    const Field w = lu.solve(rhs);
    if (!w.allFinite()) return ProbeSign::no_solution_like;
    const Field zero = Field::Zero(w.size());
    if (check_ordering(zero, w, mesh) == Ordering::much_less) return ProbeSign::positive;
    if (check_ordering(w, zero, mesh) == Ordering::much_less) return ProbeSign::negative;
    return ProbeSign::mixed;
  } catch (const FactorizationError&) {
    return ProbeSign::no_solution_like;
  }
}

}  // namespace qgrad
