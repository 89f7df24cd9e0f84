#include "qgrad/solve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/SparseCholesky>

#include "qgrad/error.hpp"

namespace qgrad {

void SolveOptions::validate() const {
  const bool positive = newton_tol > 0 && max_newton > 0 && damping > 0 && damping < 1 &&
                        max_halvings > 0 && mp_descent_step > 0 && mp_tol > 0 &&
                        max_mp_iters > 0 && ps_guard > 0 && newton_step_tol > 0 &&
                        max_monotone > 0 && tol_lu > 0;
  if (!positive) throw PreconditionError("solver options must be positive");
  if (mp_path_points < 3) throw PreconditionError("mountain pass needs at least 3 path points");
}

std::string to_string(SolutionKind k) {
  switch (k) {
    case SolutionKind::minimal: return "minimal";
    case SolutionKind::local_min: return "local_min";
    case SolutionKind::mountain_pass: return "mountain_pass";
    case SolutionKind::trivial_u0: return "trivial_u0";
  }
  return "unknown";
}

namespace {

double sup(const Field& f) { return f.size() ? f.lpNorm<Eigen::Infinity>() : 0.0; }

// Residual tolerances are relative to the size of the iterate once it exceeds
// unit H^1 norm; below that they are absolute.
double scaled(const Operators& ops, double tol, const Field& v) {
  return tol * std::max(1.0, h1_norm(ops, v));
}

SparseMatrix newton_jacobian(const ProblemSpec& spec, const Barrier& barrier, const Field& v) {
  const double q = spec.op().cell_measure();
  SparseMatrix j = spec.op().stiffness() - diagonal(f_lambda_prime(spec, barrier, v));
  return q * j;
}

SolutionRecord make_record(const ProblemSpec& spec, const Barrier& barrier, const Field& v,
                           double residual, SolutionKind kind, int iterations) {
  SolutionRecord rec;
  rec.lambda = spec.lambda;
  rec.v = v;
  rec.u = inverse_cole_hopf(v, spec.mu);
  rec.energy = energy_value(spec, barrier, v);
  rec.residual = residual;
  rec.kind = kind;
  rec.iterations = iterations;
  return rec;
}

// Newton loop without the barrier-restart logic. Returns the converged iterate.
Field newton_core(const ProblemSpec& spec, const Barrier& barrier, Field v,
                  const SolveOptions& opts, double& residual, int& iterations) {
  double last_step = std::numeric_limits<double>::infinity();
  for (int it = 0; it <= opts.max_newton; ++it) {
    const Field grad = energy_gradient(spec, barrier, v);
    const double r = dual_norm(spec.op(), grad);
    const double tol = scaled(spec.op(), opts.newton_tol, v);
    if (!std::isfinite(r)) throw ConvergenceError("Newton residual is not finite", v, it);
    if (r <= tol && last_step <= opts.newton_step_tol * std::max(1.0, sup(v))) {
      residual = r;
      iterations = it;
      return v;
    }
    if (it == opts.max_newton) break;
    if (sup(v) > opts.ps_guard) throw ConvergenceError("Newton iterate escaped", v, it);

    Field delta;
    try {
      delta = SparseFactor(newton_jacobian(spec, barrier, v)).solve(-grad);
    } catch (const FactorizationError&) {
      throw ConvergenceError("singular Newton Jacobian", v, it);
    }
    if (!delta.allFinite()) throw ConvergenceError("singular Newton Jacobian", v, it);

    double t = 1.0;
    bool accepted = false;
    Field trial;
    for (int k = 0; k <= opts.max_halvings; ++k) {
      trial = v + t * delta;
      const double rt = dual_norm(spec.op(), energy_gradient(spec, barrier, trial));
      if (std::isfinite(rt) && (rt <= (1.0 - 1e-4 * t) * r || rt <= tol)) {
        accepted = true;
        break;
      }
      t *= opts.damping;
    }
    if (!accepted) {
      if (r <= tol) {
        residual = r;
        iterations = it;
        return v;
      }
      throw ConvergenceError("Newton line search failed", v, it);
    }
    last_step = t * sup(delta);
    v = std::move(trial);
  }
  throw ConvergenceError("Newton did not converge", v, opts.max_newton);
}

}  // namespace

SolutionRecord newton_q(const ProblemSpec& spec, const Barrier& barrier, const Field& v0,
                        const SolveOptions& opts) {
  opts.validate();
  check_size(spec.op(), v0);
  Field v = v0;
  for (int attempt = 0; attempt < 2; ++attempt) {
    double residual = 0.0;
    int iterations = 0;
    v = newton_core(spec, barrier, v, opts, residual, iterations);
    if ((v - barrier.alpha).minCoeff() >= 0.0)
      return make_record(spec, barrier, v, residual, SolutionKind::local_min, iterations);
    v = v.cwiseMax(barrier.alpha);
  }
  throw BarrierError("Newton converged below the barrier");
}

Field lower_upper_residual(const ProblemSpec& spec, const Barrier& barrier, const Field& w) {
  return energy_gradient(spec, barrier, w);
}

SolutionRecord monotone_iteration(const ProblemSpec& spec, const Barrier& barrier,
                                  const Field& lower, const std::optional<Field>& upper,
                                  Direction direction, const SolveOptions& opts) {
  opts.validate();
  check_size(spec.op(), lower);
  if (upper) {
    check_size(spec.op(), *upper);
    if ((*upper - lower).minCoeff() < 0.0)
      throw PreconditionError("lower solution exceeds upper solution");
    if (lower_upper_residual(spec, barrier, *upper).minCoeff() < -opts.tol_lu)
      throw PreconditionError("upper field is not an upper solution");
  }
  if (lower_upper_residual(spec, barrier, lower).maxCoeff() > opts.tol_lu)
    throw PreconditionError("lower field is not a lower solution");
  if (direction == Direction::from_upper && !upper)
    throw PreconditionError("sweep from above needs an upper solution");

  const Field& start = direction == Direction::from_lower ? lower : *upper;
  double shift = f_lambda_prime(spec, barrier, lower).cwiseAbs().maxCoeff();
  if (upper) {
    shift = std::max(shift, f_lambda_prime(spec, barrier, *upper).cwiseAbs().maxCoeff());
    const Field mid = 0.5 * (lower + *upper);
    shift = std::max(shift, f_lambda_prime(spec, barrier, mid).cwiseAbs().maxCoeff());
  }
  shift += 1.0;

  const SparseMatrix& a = spec.op().stiffness();
  const double sign = direction == Direction::from_lower ? 1.0 : -1.0;
  for (int doubling = 0; doubling <= 8; ++doubling, shift *= 2.0) {
    SparseMatrix m = a + diagonal(Field::Constant(a.rows(), shift));
    Eigen::SimplicialLLT<SparseMatrix> llt(m);
    if (llt.info() != Eigen::Success) throw FactorizationError("shifted stiffness", 0.0);

    Field w = start;
    bool monotone = true;
    bool converged = false;
    int it = 0;
    for (; it < opts.max_monotone; ++it) {
      const Field next = llt.solve(f_lambda(spec, barrier, w) + shift * w);
      const double slack = 1e-10 * (1.0 + sup(w));
      const Field step = next - w;
      if ((sign * step).minCoeff() < -slack) {
        monotone = false;
        break;
      }
      if (upper && direction == Direction::from_lower && (next - *upper).maxCoeff() > slack) {
        monotone = false;
        break;
      }
      if (!next.allFinite() || sup(next) > opts.ps_guard)
        throw UnboundedError("monotone iteration escaped past the guard");
      w = next;
      if (sup(step) <= 1e-11 * (1.0 + sup(w))) {
        converged = true;
        break;
      }
    }
    if (!monotone) continue;
    if (!converged) throw ConvergenceError("monotone iteration did not settle", w, it);

    SolutionRecord rec = newton_q(spec, barrier, w, opts);
    if (sup(rec.v - w) > 1e-4 * (1.0 + sup(w)))
      throw ConvergenceError("Newton polish moved away from the monotone limit", rec.v, it);
    rec.kind = direction == Direction::from_lower ? SolutionKind::minimal : SolutionKind::local_min;
    rec.iterations = it;
    return rec;
  }
  throw MonotonicityError("monotone iteration lost monotonicity after 8 shift doublings");
}

namespace {

// Solves A v = lp c+ g(v) + (1 + mu v) k on (-1/mu, 0] by damped Newton from 0.
// The right-hand side is decreasing and convex in v when mu M1 >= 1.
Field solve_auxiliary(const ProblemSpec& spec, const Field& k, double lp) {
  const double mu = spec.mu;
  const SparseMatrix& a = spec.op().stiffness();
  const int n = spec.size();
  Field v = Field::Zero(n);
  for (int it = 0; it < 200; ++it) {
    Field rhs(n), slope(n);
    for (int i = 0; i < n; ++i) {
      rhs[i] = lp * spec.cplus[i] * g_fun(v[i], mu) + (1.0 + mu * v[i]) * k[i];
      slope[i] = lp * spec.cplus[i] * g_prime(v[i], mu) + mu * k[i];
    }
    const Field residual = a * v - rhs;
    Eigen::SimplicialLLT<SparseMatrix> llt(a - diagonal(slope));
    if (llt.info() != Eigen::Success) throw BarrierError("auxiliary Jacobian is not definite");
    const Field delta = llt.solve(-residual);
    double t = 1.0;
    for (int i = 0; i < n; ++i)
      if (delta[i] < 0.0) t = std::min(t, 0.99 * (1.0 + mu * v[i]) / (-mu * delta[i]));
    v += t * delta;
    if (!v.allFinite()) throw BarrierError("auxiliary solve diverged");
    if (t == 1.0 && sup(delta) <= 1e-13 * (1.0 + sup(v))) return v;
  }
  throw BarrierError("auxiliary solve did not converge");
}

}  // namespace

Barrier construct_barrier(const ProblemSpec& spec, const std::vector<Field>& candidates,
                          double tol_lu) {
  const double mu = spec.mu;
  const double lp = std::max(spec.lambda, 0.0);
  const int n = spec.size();
  const Field hminus = (-spec.h).cwiseMax(0.0);

  double m = 0.0;
  for (const auto& c : candidates) {
    check_size(spec.op(), c);
    m = std::min(m, c.minCoeff());
  }
  const double from_candidates = std::max(1.0 / mu, 1.0 - m);
  double from_companion = from_candidates;
  {
    const SparseMatrix companion = spec.op().stiffness() + diagonal(spec.cminus);
    Eigen::SimplicialLLT<SparseMatrix> llt(companion);
    const Field rhs = -hminus - lp * from_candidates * spec.cplus - Field::Ones(n);
    const Field w = llt.solve(rhs);
    if (llt.info() == Eigen::Success && w.allFinite())
      from_companion = std::max(1.0 / mu, 1.0 - std::min(m, w.minCoeff()));
  }

  // On long domains the companion level can be so deep that theta underflows
  // and alpha collapses onto -1/mu; the candidate level is the second try.
  for (double start : {from_companion, from_candidates}) {
    double m1 = start;
    for (int attempt = 0; attempt < 20; ++attempt, m1 *= 2.0) {
      try {
        const Field k = -hminus - lp * m1 * spec.cplus - Field::Ones(n);
        const Field v = solve_auxiliary(spec, k, lp);
        const double theta = std::exp(-mu * m1);
        const Field alpha = (theta * v).array() - (1.0 - theta) / mu;
        Barrier b = make_barrier(spec, alpha, BarrierSource::constructed);
        if (lower_upper_residual(spec, b, b.alpha).maxCoeff() <= tol_lu) return b;
      } catch (const Error&) {
      }
    }
    if (from_candidates == from_companion) break;
  }
  m = std::min(m, 1.0 - from_companion);

  double drop = 1.0;
  for (int attempt = 0; attempt < 20; ++attempt, drop *= 2.0) {
    try {
      const double level = std::expm1(mu * (m - drop)) / mu;
      Barrier b = make_barrier(spec, Field::Constant(n, level), BarrierSource::constant_fallback);
      if (lower_upper_residual(spec, b, b.alpha).maxCoeff() <= tol_lu) return b;
    } catch (const Error&) {
    }
  }
  throw BarrierError("no valid lower barrier found");
}

namespace {

// Resamples the polyline through `pts` at `count` points equally spaced in the
// discrete H^1 arclength. Endpoints are kept.
std::vector<Field> resample(const Operators& ops, const std::vector<Field>& pts, int count) {
  std::vector<double> s(pts.size(), 0.0);
  for (std::size_t j = 1; j < pts.size(); ++j)
    s[j] = s[j - 1] + h1_norm(ops, pts[j] - pts[j - 1]);
  std::vector<Field> out(count);
  out.front() = pts.front();
  out.back() = pts.back();
  const double total = s.back();
  std::size_t seg = 1;
  for (int i = 1; i + 1 < count; ++i) {
    const double target = total * i / (count - 1);
    while (seg + 1 < pts.size() && s[seg] < target) ++seg;
    const double len = s[seg] - s[seg - 1];
    const double w = len > 0.0 ? (target - s[seg - 1]) / len : 0.0;
    out[i] = (1.0 - w) * pts[seg - 1] + w * pts[seg];
  }
  return out;
}

}  // namespace

std::pair<SolutionRecord, PSDiagnostics> mountain_pass(const ProblemSpec& spec,
                                                       const Barrier& barrier, const Field& e1,
                                                       const Field& e2,
                                                       const SolveOptions& opts) {
  opts.validate();
  check_size(spec.op(), e1);
  check_size(spec.op(), e2);
  const Operators& ops = spec.op();
  const int count = opts.mp_path_points;
  const int middle = (count - 1) / 2;

  std::vector<Field> path(count);
  std::vector<double> level(count);
  auto evaluate = [&] {
    for (int j = 0; j < count; ++j) level[j] = energy_value(spec, barrier, path[j]);
  };
  for (int j = 0; j < count; ++j) path[j] = e1 + (static_cast<double>(j) / (count - 1)) * (e2 - e1);
  evaluate();
  const double ends = std::max(level.front(), level.back());
  const auto top = std::max_element(level.begin() + 1, level.end() - 1);
  if (*top <= ends + 1e-12) throw GeometryError("no mountain-pass geometry along the initial path");

  PSDiagnostics diag;
  double tau = opts.mp_descent_step;
  int k = static_cast<int>(top - level.begin());
  bool done = false;
  for (int iter = 0; iter < opts.max_mp_iters; ++iter) {
    k = static_cast<int>(std::max_element(level.begin() + 1, level.end() - 1) - level.begin());
    const Field& peak = path[k];
    const double norm = h1_norm(ops, peak);
    diag.energies.push_back(level[k]);
    diag.norms.push_back(norm);
    diag.iterations = iter;
    if (!std::isfinite(norm) || norm > opts.ps_guard) {
      diag.bounded = false;
      throw UnboundedError("mountain-pass iterate exceeded the norm guard");
    }
    const Field grad = energy_gradient(spec, barrier, peak);
    const Field sob = ops.riesz(grad);
    const double r = std::sqrt(std::max(grad.dot(sob), 0.0));
    if (r <= scaled(ops, opts.mp_tol, peak)) {
      done = true;
      break;
    }
    Field tangent = path[k + 1] - path[k - 1];
    const double tn = h1_norm(ops, tangent);
    if (tn > 0.0) tangent /= tn;
    // Climbing direction: descend across the path, ascend along it.
    const Field dir = -(sob - 2.0 * grad.dot(tangent) * tangent);

    Field trial;
    bool accepted = false;
    for (int h = 0; h <= opts.max_halvings; ++h) {
      trial = peak + tau * dir;
      const double rt = dual_norm(ops, energy_gradient(spec, barrier, trial));
      if (std::isfinite(rt) && rt < r) {
        accepted = true;
        break;
      }
      tau *= opts.damping;
    }
    if (!accepted) throw ConvergenceError("mountain-pass step failed", peak, iter);
    tau = std::min(1.5 * tau, 1.0);

    std::vector<Field> left(path.begin(), path.begin() + k);
    left.push_back(trial);
    std::vector<Field> right{trial};
    right.insert(right.end(), path.begin() + k + 1, path.end());
    const auto lpts = resample(ops, left, middle + 1);
    const auto rpts = resample(ops, right, count - middle);
    for (int j = 0; j <= middle; ++j) path[j] = lpts[j];
    for (int j = 1; j < count - middle; ++j) path[middle + j] = rpts[j];
    evaluate();
  }
  if (!done)
    throw ConvergenceError("mountain pass did not reach tolerance", path[k], opts.max_mp_iters);

  SolutionRecord rec = newton_q(spec, barrier, path[k], opts);
  rec.kind = SolutionKind::mountain_pass;
  rec.iterations = diag.iterations;
  return {std::move(rec), std::move(diag)};
}

double ray_blowdown(const ProblemSpec& spec, const Barrier& barrier, const Field& v,
                    const std::optional<Field>& base) {
  check_size(spec.op(), v);
  if (v.minCoeff() < 0.0 || !(v.maxCoeff() > 0.0))
    throw PreconditionError("blowdown direction must be nonnegative and nonzero");
  if (!(spec.cplus.cwiseProduct(v).maxCoeff() > kTolZero))
    throw PreconditionError("blowdown direction must charge the support of cplus");
  if (spec.cminus.cwiseProduct(v).cwiseAbs().maxCoeff() > kTolZero)
    throw PreconditionError("blowdown direction must vanish where cminus is positive");
  const Field b = base ? *base : Field::Zero(v.size());
  const double target =
      std::min(energy_value(spec, barrier, Field::Zero(v.size())), energy_value(spec, barrier, b)) -
      1.0;
  for (double t = 1.0; t <= std::ldexp(1.0, 60); t *= 2.0)
    if (energy_value(spec, barrier, b + t * v) <= target) return t;
  throw BlowdownError("energy does not fall along the ray");
}

ProbeResult uniqueness_probe(const ProblemSpec& spec, const Barrier& barrier,
                             const std::vector<Field>& starts, const SolutionFilter& filter,
                             const SolveOptions& opts) {
  ProbeResult out;
  std::vector<SolutionRecord> distinct;
  for (const auto& s : starts) {
    try {
      SolutionRecord rec = newton_q(spec, barrier, s, opts);
      ++out.converged;
      const bool seen = std::any_of(distinct.begin(), distinct.end(), [&](const auto& d) {
        return sup(d.u - rec.u) <= 1e-6;
      });
      if (!seen) distinct.push_back(std::move(rec));
    } catch (const Error&) {
      ++out.failed;
    }
  }
  for (auto& d : distinct)
    if (!filter || filter(d)) out.solutions.push_back(std::move(d));
  return out;
}

}  // namespace qgrad
