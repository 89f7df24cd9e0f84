#include "qgrad/model.hpp"

#include <cmath>
#include <limits>

#include "qgrad/error.hpp"

namespace qgrad {

std::vector<SpecViolation> check_spec(double mu, const Field& cplus, const Field& cminus,
                                      const Field& h) {
  std::vector<SpecViolation> out;
  if (!(mu > 0.0) || !std::isfinite(mu)) out.push_back({"mu must be a positive real", {}});
  if (cplus.size() != cminus.size() || cplus.size() != h.size()) {
    out.push_back({"coefficient fields have different lengths", {}});
    return out;
  }
  auto collect = [&](const std::string& what, auto&& bad) {
    std::vector<int> nodes;
    for (int i = 0; i < cplus.size(); ++i)
      if (bad(i)) nodes.push_back(i);
    if (!nodes.empty()) out.push_back({what, std::move(nodes)});
  };
  collect("coefficients must be finite", [&](int i) {
    return !std::isfinite(cplus[i]) || !std::isfinite(cminus[i]) || !std::isfinite(h[i]);
  });
  collect("cplus must be nonnegative", [&](int i) { return cplus[i] < 0.0; });
  collect("cminus must be nonnegative", [&](int i) { return cminus[i] < 0.0; });
  collect("cplus * cminus must vanish",
          [&](int i) { return std::abs(cplus[i] * cminus[i]) > kTolZero; });
  if (cplus.size() > 0 && !(cplus.maxCoeff() > kTolZero))
    out.push_back({"cplus must not vanish identically", {}});
  return out;
}

ProblemSpec make_problem(OperatorsPtr ops, double mu, Field cplus, Field cminus, Field h,
                         double lambda) {
  check_size(*ops, cplus);
  check_size(*ops, cminus);
  check_size(*ops, h);
  const auto violations = check_spec(mu, cplus, cminus, h);
  if (!violations.empty()) throw SpecError(violations.front().what, violations.front().nodes);
  if (!std::isfinite(lambda)) throw SpecError("lambda must be finite");
  return ProblemSpec{std::move(ops), mu, std::move(cplus), std::move(cminus), std::move(h),
                     lambda};
}

std::string to_string(BarrierSource s) {
  switch (s) {
    case BarrierSource::from_solution: return "from-solution";
    case BarrierSource::constructed: return "constructed";
    case BarrierSource::constant_fallback: return "constant-fallback";
  }
  return "unknown";
}

Barrier make_barrier(const ProblemSpec& spec, Field alpha, BarrierSource source) {
  check_size(spec.op(), alpha);
  const double gap = (alpha.array() + 1.0 / spec.mu).minCoeff();
  if (!(gap > 0.0) || !alpha.allFinite())
    throw BarrierError("barrier does not stay above -1/mu");
  return Barrier{std::move(alpha), source, 0.5 * gap};
}

double g_fun(double s, double mu) {
  const double t = 1.0 + mu * s;
  if (t <= 0.0) return 0.0;
  return t * std::log(t) / mu;
}

double G_fun(double s, double mu) {
  const double t = 1.0 + mu * s;
  if (t <= 0.0) return 1.0 / (4.0 * mu * mu);
  return (t * t * (2.0 * std::log(t) - 1.0) + 1.0) / (4.0 * mu * mu);
}

double g_prime(double s, double mu) {
  const double t = 1.0 + mu * s;
  if (t <= 0.0) return 0.0;
  return std::log(t) + 1.0;
}

Field cole_hopf(const Field& u, double mu) {
  return (mu * u).array().exp().matrix().unaryExpr([mu](double e) { return (e - 1.0) / mu; });
}

Field inverse_cole_hopf(const Field& v, double mu) {
  Field u(v.size());
  for (int i = 0; i < v.size(); ++i) {
    const double t = 1.0 + mu * v[i];
    if (!(t > 0.0))
      throw TransformDomainError("v <= -1/mu at node " + std::to_string(i), i);
    u[i] = std::log1p(mu * v[i]) / mu;
  }
  return u;
}

namespace {

// Upper-branch f at a single node.
double f_upper(double c, double h, double mu, double s) {
  return c * g_fun(s, mu) + (1.0 + mu * s) * h;
}

double F_upper(double c, double h, double mu, double s) {
  const double t = 1.0 + mu * s;
  return c * G_fun(s, mu) + t * t * h / (2.0 * mu);
}

}  // namespace

Field f_lambda(const ProblemSpec& spec, const Barrier& barrier, const Field& v) {
  check_size(spec.op(), v);
  const Field c = spec.c_lambda();
  Field out(v.size());
  for (int i = 0; i < v.size(); ++i)
    out[i] = f_upper(c[i], spec.h[i], spec.mu, std::max(v[i], barrier.alpha[i]));
  return out;
}

Field f_lambda_prime(const ProblemSpec& spec, const Barrier& barrier, const Field& v) {
  check_size(spec.op(), v);
  const Field c = spec.c_lambda();
  Field out(v.size());
  for (int i = 0; i < v.size(); ++i)
    out[i] = v[i] >= barrier.alpha[i] ? c[i] * g_prime(v[i], spec.mu) + spec.mu * spec.h[i]
                                      : 0.0;
  return out;
}

Field F_lambda(const ProblemSpec& spec, const Barrier& barrier, const Field& v) {
  check_size(spec.op(), v);
  const Field c = spec.c_lambda();
  Field out(v.size());
  for (int i = 0; i < v.size(); ++i) {
    const double a = barrier.alpha[i];
    if (v[i] >= a) {
      out[i] = F_upper(c[i], spec.h[i], spec.mu, v[i]);
    } else {
      out[i] = F_upper(c[i], spec.h[i], spec.mu, a) +
               f_upper(c[i], spec.h[i], spec.mu, a) * (v[i] - a);
    }
  }
  return out;
}

double energy_value(const ProblemSpec& spec, const Barrier& barrier, const Field& v) {
  const double q = spec.op().cell_measure();
  const double dirichlet = 0.5 * q * v.dot(spec.op().stiffness() * v);
  return dirichlet - integrate(spec.op(), F_lambda(spec, barrier, v));
}

Field energy_gradient(const ProblemSpec& spec, const Barrier& barrier, const Field& v) {
  const double q = spec.op().cell_measure();
  return q * (spec.op().stiffness() * v - f_lambda(spec, barrier, v));
}

EnergyReport energy(const ProblemSpec& spec, const Barrier& barrier, const Field& v) {
  EnergyReport r;
  r.value = energy_value(spec, barrier, v);
  r.gradient = energy_gradient(spec, barrier, v);
  r.residual_norm = dual_norm(spec.op(), r.gradient);
  return r;
}

Field residual_p(const ProblemSpec& spec, const Field& u) {
  check_size(spec.op(), u);
  const double q = spec.op().cell_measure();
  const Field rhs =
      spec.c_lambda().cwiseProduct(u) + spec.mu * grad_squared(spec.op(), u) + spec.h;
  return q * (spec.op().stiffness() * u - rhs);
}

std::string to_string(Ordering o) {
  switch (o) {
    case Ordering::incomparable: return "incomparable";
    case Ordering::leq: return "leq";
    case Ordering::strictly_less: return "strictly_less";
    case Ordering::much_less: return "much_less";
  }
  return "unknown";
}

Ordering check_ordering(const Field& u, const Field& w, const Mesh& mesh) {
  if (u.size() != mesh.size() || w.size() != mesh.size())
    throw DimensionError("ordering check on fields of mismatched size");
  const Field d = w - u;
  const double scale = d.size() ? d.cwiseAbs().maxCoeff() : 0.0;
  if (scale == 0.0) return Ordering::leq;
  const double tol = 1e-9 * scale;
  if (d.minCoeff() < -tol) return Ordering::incomparable;
  if (!(d.minCoeff() > tol)) return Ordering::leq;

  double h = mesh.axis(0).spacing;
  if (mesh.dim() == 2) h = std::max(h, mesh.axis(1).spacing);
  for (int k = 0; k < mesh.size(); ++k)
    if (mesh.boundary_adjacent(k) && !(d[k] / h > kTolHopf)) return Ordering::strictly_less;
  return Ordering::much_less;
}

bool ordered(Ordering o, Ordering at_least) {
  return static_cast<int>(o) >= static_cast<int>(at_least);
}

}  // namespace qgrad
