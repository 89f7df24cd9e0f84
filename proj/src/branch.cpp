#include "qgrad/branch.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qgrad/error.hpp"
#include "qgrad/expr.hpp"

namespace qgrad {

bool BranchDiagram::all_pass() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

namespace {

constexpr double kDedup = 1e-6;

double sup(const Field& f) { return f.size() ? f.lpNorm<Eigen::Infinity>() : 0.0; }

bool coincide(const Field& a, const Field& b) { return sup(a - b) <= kDedup; }

std::string lambda_tag(double lambda) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "lambda=%.6g", lambda);
  return buf;
}

void annotate(SolutionRecord& rec, const std::string& name, const Field& ref, const Mesh& mesh) {
  rec.ordering[name + "<<this"] = to_string(check_ordering(ref, rec.u, mesh));
  rec.ordering["this<<" + name] = to_string(check_ordering(rec.u, ref, mesh));
}

Field sine_mode(const Mesh& mesh, int k) {
  Field out(mesh.size());
  for (int i = 0; i < mesh.size(); ++i) {
    const auto x = mesh.coords(i);
    double v = 1.0;
    for (int a = 0; a < mesh.dim(); ++a) {
      const auto& ax = mesh.axis(a);
      const int mode = a == 0 ? k : 1;
      v *= std::sin(mode * std::numbers::pi * (x[a] - ax.lo) / (ax.hi - ax.lo));
    }
    out[i] = v;
  }
  return out;
}

Field blowdown_direction(const ProblemSpec& spec) {
  return spec.cplus.cwiseProduct(sine_bump(spec.mesh()));
}

}  // namespace

std::vector<Field> random_starts(const Mesh& mesh, int count, std::mt19937_64& rng,
                                 double amp_lo, double amp_hi) {
  std::uniform_real_distribution<double> lead(amp_lo, amp_hi);
  std::uniform_real_distribution<double> minor(-0.25, 0.25);
  const Field s1 = sine_mode(mesh, 1), s2 = sine_mode(mesh, 2), s3 = sine_mode(mesh, 3);
  std::vector<Field> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    const double a = lead(rng);
    const double scale = std::max(std::abs(a), 0.1);
    const double b = minor(rng) * scale;
    const double c = minor(rng) * scale;
    out.push_back(a * s1 + b * s2 + c * s3);
  }
  return out;
}

SolutionRecord find_minimal(const ProblemSpec& spec, const Barrier& barrier,
                            const std::vector<Field>& uppers, const SolveOptions& opts) {
  std::optional<Field> upper;
  for (const auto& c : uppers) {
    if (c.size() != spec.size()) continue;
    if ((c - barrier.alpha).minCoeff() < 0.0) continue;
    if (lower_upper_residual(spec, barrier, c).minCoeff() < -opts.tol_lu) continue;
    upper = upper ? Field(upper->cwiseMin(c)) : c;
  }
  try {
    return monotone_iteration(spec, barrier, barrier.alpha, upper, Direction::from_lower, opts);
  } catch (const ConvergenceError& e) {
    // Slow approach to a degenerate limit: finish with Newton from the last
    // iterate, which lies below the minimal solution.
    const Field& last = e.last_iterate();
    if (last.size() != spec.size()) throw;
    SolutionRecord rec = newton_q(spec, barrier, last, opts);
    if ((rec.v - last).minCoeff() < -1e-6 * (1.0 + sup(last))) throw;
    rec.kind = SolutionKind::minimal;
    return rec;
  }
}

std::optional<SolutionRecord> solve_u0(const ProblemSpec& spec, const SolveOptions& opts) {
  const ProblemSpec s0 = spec.with_lambda(0.0);
  try {
    const Barrier barrier = construct_barrier(s0, {}, opts.tol_lu);
    SolutionRecord rec = find_minimal(s0, barrier, {}, opts);
    rec.kind = SolutionKind::trivial_u0;
    return rec;
  } catch (const Error&) {
    return std::nullopt;
  }
}

BranchDiagram sweep(const ProblemSpec& base, const std::vector<double>& lambdas,
                    const SolveOptions& opts, const std::string& scenario) {
  for (std::size_t k = 1; k < lambdas.size(); ++k)
    if (!(lambdas[k] > lambdas[k - 1]))
      throw PreconditionError("lambda grid must be strictly increasing");
  BranchDiagram diag;
  diag.scenario = scenario;
  if (lambdas.empty()) return diag;

  const Mesh& mesh = base.mesh();
  const auto u0 = solve_u0(base, opts);
  if (!u0) diag.verdicts.push_back({"u0_found", false, {}, "the lambda = 0 problem has no solution"});
  std::optional<SolutionRecord> prev;

  for (double lambda : lambdas) {
    const ProblemSpec spec = base.with_lambda(lambda);
    const std::string tag = lambda_tag(lambda);
    std::vector<Field> candidates, uppers;
    if (u0) {
      candidates.push_back(u0->u);
      uppers.push_back(u0->v);
    }
    if (prev) {
      candidates.push_back(prev->u);
      uppers.push_back(prev->v);
    }

    Barrier barrier;
    SolutionRecord minimal;
    try {
      barrier = construct_barrier(spec, candidates, opts.tol_lu);
      minimal = find_minimal(spec, barrier, uppers, opts);
    } catch (const Error& e) {
      diag.verdicts.push_back({"minimal " + tag, false, {{"lambda", lambda}}, e.what()});
      continue;
    }
    if (u0) {
      if (coincide(minimal.u, u0->u)) minimal.kind = SolutionKind::trivial_u0;
      annotate(minimal, "u0", u0->u, mesh);
    }
    if (prev) annotate(minimal, "prev_minimal", prev->u, mesh);

    std::optional<SolutionRecord> second;
    if (lambda > 0.0) {
      try {
        const Field d = blowdown_direction(spec);
        const double t = ray_blowdown(spec, barrier, d, minimal.v);
        auto [mp, ps] = mountain_pass(spec, barrier, minimal.v, minimal.v + t * d, opts);
        if (coincide(mp.u, minimal.u)) {
          diag.verdicts.push_back({"second " + tag, false, {{"lambda", lambda}},
                                   "mountain pass returned the minimal solution"});
        } else {
          if (u0) {
            if (coincide(mp.u, u0->u)) mp.kind = SolutionKind::trivial_u0;
            annotate(mp, "u0", u0->u, mesh);
          }
          annotate(mp, "minimal", minimal.u, mesh);
          second = std::move(mp);
        }
      } catch (const Error& e) {
        diag.verdicts.push_back({"second " + tag, false, {{"lambda", lambda}}, e.what()});
      }
    }
    prev = minimal;
    diag.records.push_back(std::move(minimal));
    if (second) diag.records.push_back(std::move(*second));
  }
  return diag;
}

LambdaBracket find_lambda_bar(const ProblemSpec& base, double lambda_lo, double lambda_hi,
                              std::uint64_t seed, const SolveOptions& opts, int multistarts) {
  if (!(lambda_hi > lambda_lo)) throw BracketError("empty lambda bracket");
  const auto u0 = solve_u0(base, opts);
  std::mt19937_64 rng(seed);
  const auto admissible = [&](const SolutionRecord& r) {
    return base.cplus.cwiseProduct(r.u).minCoeff() >= -1e-10;
  };
  const auto success = [&](double lambda) {
    const ProblemSpec spec = base.with_lambda(lambda);
    Barrier barrier;
    try {
      barrier = construct_barrier(spec, u0 ? std::vector<Field>{u0->u} : std::vector<Field>{},
                                  opts.tol_lu);
    } catch (const Error&) {
      return false;
    }
    try {
      const SolutionRecord rec =
          find_minimal(spec, barrier, u0 ? std::vector<Field>{u0->v} : std::vector<Field>{}, opts);
      if (admissible(rec)) return true;
    } catch (const Error&) {
    }
    const auto starts = random_starts(spec.mesh(), multistarts, rng, 0.0, 8.0);
    return !uniqueness_probe(spec, barrier, starts, admissible, opts).solutions.empty();
  };

  if (!success(lambda_lo)) throw BracketError("no admissible solution at the lower end");
  if (success(lambda_hi)) throw BracketError("admissible solution persists at the upper end");
  LambdaBracket b{lambda_lo, lambda_hi, 0};
  while (b.hi - b.lo > 1e-3 * b.hi) {
    const double mid = 0.5 * (b.lo + b.hi);
    (success(mid) ? b.lo : b.hi) = mid;
    ++b.bisections;
  }
  return b;
}

namespace {

struct Canned {
  double lo, hi;
  int n;
  double mu;
  std::string cplus, cminus, h;
};

ProblemSpec build(const Canned& c, int n) {
  const std::array<std::array<double, 2>, 1> bounds{{{c.lo, c.hi}}};
  const std::array<int, 1> counts{n};
  const Mesh mesh = build_mesh(1, bounds, counts);
  auto ops = assemble_operators(mesh);
  return make_problem(ops, c.mu, expr::sample(expr::parse(c.cplus), mesh),
                      expr::sample(expr::parse(c.cminus), mesh),
                      expr::sample(expr::parse(c.h), mesh));
}

const SolutionRecord* find_record(const BranchDiagram& d, double lambda, SolutionKind kind) {
  for (const auto& r : d.records)
    if (r.lambda == lambda && r.kind == kind) return &r;
  return nullptr;
}

// Record at lambda that differs from u0 (the second solution).
const SolutionRecord* nontrivial(const BranchDiagram& d, double lambda) {
  for (const auto& r : d.records)
    if (r.lambda == lambda && r.kind != SolutionKind::trivial_u0) return &r;
  return nullptr;
}

bool much_less(const Field& a, const Field& b, const Mesh& mesh) {
  return check_ordering(a, b, mesh) == Ordering::much_less;
}

void energy_verdict(BranchDiagram& d) {
  Verdict v{"mountain_pass_energy_above_minimal", true, {}, ""};
  int pairs = 0;
  for (const auto& r : d.records) {
    if (!r.ordering.count("minimal<<this")) continue;
    for (const auto& m : d.records) {
      if (m.lambda != r.lambda || &m == &r || m.ordering.count("minimal<<this")) continue;
      ++pairs;
      if (!(r.energy > m.energy)) v.pass = false;
      v.evidence["gap " + lambda_tag(r.lambda)] = r.energy - m.energy;
    }
  }
  v.evidence["pairs"] = pairs;
  if (pairs == 0) v.pass = false;
  d.verdicts.push_back(std::move(v));
}

BranchDiagram scenario_example1d(int n) {
  const Canned c{-2.0 * std::numbers::pi, 2.0 * std::numbers::pi, n, 1.0,
                 "if x < 0 then 0 else cos(x) + 1", "0",
                 "if x < 0 then cos(x) - sin(x)^2 else 0"};
  const auto exact = expr::parse("if x < 0 then cos(x) - 1 else 0");
  BranchDiagram d;
  d.scenario = "example1d";
  double err[2] = {0.0, 0.0};
  for (int level = 0; level < 2; ++level) {
    const ProblemSpec spec = build(c, n << level);
    const auto u0 = solve_u0(spec);
    if (!u0) {
      d.verdicts.push_back({"u0_found", false, {{"grid", double(n << level)}}, "no solution"});
      return d;
    }
    err[level] = sup(u0->u - expr::sample(exact, spec.mesh()));
    if (level > 0) continue;
    d.records.push_back(*u0);
    const double cu = sup(spec.cplus.cwiseProduct(u0->u));
    d.verdicts.push_back({"u0_error", err[0] <= 5e-4, {{"error", err[0]}, {"grid", double(n)}}, ""});
    d.verdicts.push_back({"cplus_u0_vanishes", cu <= 5e-4, {{"max_abs_cplus_u0", cu}}, ""});
    d.verdicts.push_back({"u0_nonpositive",
                          u0->u.maxCoeff() <= 5e-4 && u0->u.minCoeff() < 0.0,
                          {{"umax", u0->u.maxCoeff()}, {"umin", u0->u.minCoeff()}},
                          ""});
    d.verdicts.push_back(
        {"residual", u0->residual <= 1e-9, {{"residual", u0->residual}}, ""});
  }
  const double rate = std::log2(err[0] / err[1]);
  d.verdicts.push_back({"convergence_rate", rate >= 1.7 && rate <= 2.3,
                        {{"rate", rate}, {"error_fine", err[1]}},
                        ""});
  return d;
}

BranchDiagram scenario_flip(int n, std::uint64_t seed) {
  const Canned c{0.0, 1.0, n, 1.0, "1", "0", "0"};
  const ProblemSpec base = build(c, n);
  const Mesh& mesh = base.mesh();
  const auto u0 = solve_u0(base);
  BranchDiagram d;
  d.scenario = "th_h0_flip";
  if (!u0) {
    d.verdicts.push_back({"u0_found", false, {}, "no solution"});
    return d;
  }
  const EigenPair ep =
      principal_eigenvalue(base.op(), assemble_linearized(base, u0->u), base.cplus);
  const double g1 = ep.gamma1;
  d.gamma1 = g1;
  const std::vector<double> factors{0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75};
  std::vector<double> grid;
  for (double f : factors) grid.push_back(f * g1);
  BranchDiagram s = sweep(base, grid, {}, d.scenario);
  d.records = s.records;

  d.verdicts.push_back({"u0_trivial", sup(u0->u) <= 1e-10, {{"sup_u0", sup(u0->u)}}, ""});
  d.verdicts.push_back({"eigen_residual", ep.residual <= kTolEig && ep.phi1.minCoeff() > 0.0,
                        {{"gamma1", g1}, {"residual", ep.residual}},
                        ""});
  d.verdicts.push_back({"mu1_concave", ep.concave, {}, ""});

  Verdict below{"second_positive_below_gamma1", true, {}, ""};
  Verdict above{"second_negative_above_gamma1", true, {}, ""};
  Verdict first{"minimal_is_u0_below_gamma1", true, {}, ""};
  Verdict mp_u0{"u0_is_mountain_pass_above_gamma1", true, {}, ""};
  const Field zero = Field::Zero(base.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double lambda = grid[k];
    if (factors[k] == 1.0) continue;
    const SolutionRecord* r = nontrivial(d, lambda);
    const std::string tag = lambda_tag(lambda);
    if (factors[k] < 1.0) {
      const bool ok = r && much_less(zero, r->u, mesh);
      below.pass = below.pass && ok;
      below.evidence["umin " + tag] = r ? r->u.minCoeff() : NAN;
      const SolutionRecord* m = find_record(d, lambda, SolutionKind::trivial_u0);
      first.pass = first.pass && m && !m->ordering.count("minimal<<this");
    } else {
      const bool ok = r && much_less(r->u, zero, mesh);
      above.pass = above.pass && ok;
      above.evidence["umax " + tag] = r ? r->u.maxCoeff() : NAN;
      const SolutionRecord* m = find_record(d, lambda, SolutionKind::trivial_u0);
      mp_u0.pass = mp_u0.pass && m && m->ordering.count("minimal<<this");
    }
  }
  d.verdicts.push_back(below);
  d.verdicts.push_back(above);
  d.verdicts.push_back(first);
  d.verdicts.push_back(mp_u0);

  const ProblemSpec at = base.with_lambda(g1);
  const Barrier barrier = construct_barrier(at, {u0->u});
  std::mt19937_64 rng(seed);
  const auto probe = uniqueness_probe(at, barrier, random_starts(mesh, 20, rng, -0.5, 1.0));
  const bool only_zero = probe.solutions.size() == 1 && sup(probe.solutions[0].u) <= kDedup;
  d.verdicts.push_back({"only_trivial_at_gamma1", only_zero,
                        {{"distinct", double(probe.solutions.size())},
                         {"converged", double(probe.converged)},
                         {"failed", double(probe.failed)}},
                        ""});
  energy_verdict(d);
  return d;
}

BranchDiagram scenario_fold(int n, std::uint64_t seed) {
  const Canned c{0.0, 1.0, n, 1.0, "1", "0", "0.05"};
  const ProblemSpec base = build(c, n);
  const Mesh& mesh = base.mesh();
  BranchDiagram d;
  d.scenario = "th2_fold";
  const auto u0 = solve_u0(base);
  if (!u0) {
    d.verdicts.push_back({"u0_found", false, {}, "no solution"});
    return d;
  }
  d.gamma1 = principal_eigenvalue(base.op(), assemble_linearized(base, u0->u), base.cplus).gamma1;
  const double top = principal_eigenvalue(base.op(), base.op().stiffness(), base.cplus).gamma1;
  LambdaBracket b;
  try {
    b = find_lambda_bar(base, 0.05 * top, top, seed);
  } catch (const Error& e) {
    d.verdicts.push_back({"lambda_bar_bracket", false, {}, e.what()});
    return d;
  }
  d.lambda_bar = b;
  d.verdicts.push_back({"lambda_bar_bracket_width", b.width() <= 1e-3 * b.hi,
                        {{"lo", b.lo}, {"hi", b.hi}, {"relative_width", b.width() / b.hi}},
                        ""});

  std::vector<double> grid;
  for (double f : {0.5, 0.7, 0.85, 0.95, 0.99}) grid.push_back(f * b.lo);
  BranchDiagram s = sweep(base, grid, {}, d.scenario);
  d.records = s.records;

  Verdict ordered{"two_ordered_solutions", true, {}, ""};
  Verdict mono{"minimal_branch_monotone", true, {}, ""};
  Verdict merge{"fold_merging", true, {}, ""};
  double last_gap = INFINITY;
  const SolutionRecord* prev = nullptr;
  for (double lambda : grid) {
    const SolutionRecord* m = find_record(d, lambda, SolutionKind::minimal);
    const SolutionRecord* p = find_record(d, lambda, SolutionKind::mountain_pass);
    const std::string tag = lambda_tag(lambda);
    const bool ok = m && p && much_less(u0->u, m->u, mesh) && much_less(m->u, p->u, mesh);
    ordered.pass = ordered.pass && ok;
    if (m && p) {
      const double gap = sup(p->u - m->u);
      merge.evidence["gap " + tag] = gap;
      merge.pass = merge.pass && gap < last_gap;
      last_gap = gap;
    } else {
      merge.pass = false;
    }
    if (prev && m) mono.pass = mono.pass && much_less(prev->u, m->u, mesh);
    if (!m) mono.pass = false;
    prev = m;
  }
  d.verdicts.push_back(ordered);
  d.verdicts.push_back(mono);
  d.verdicts.push_back(merge);

  // Independent re-check at bracket-right with fresh multistarts.
  const ProblemSpec at = base.with_lambda(b.hi);
  const Barrier barrier = construct_barrier(at, {u0->u});
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  const auto admissible = [&](const SolutionRecord& r) {
    return base.cplus.cwiseProduct(r.u).minCoeff() >= -1e-10;
  };
  const auto probe =
      uniqueness_probe(at, barrier, random_starts(mesh, 50, rng, 0.0, 8.0), admissible);
  bool monotone_failed = false;
  try {
    const auto r = find_minimal(at, barrier, {u0->v});
    monotone_failed = !admissible(r);
  } catch (const Error&) {
    monotone_failed = true;
  }
  d.verdicts.push_back({"no_admissible_solution_at_bracket_right",
                        probe.solutions.empty() && monotone_failed,
                        {{"admissible", double(probe.solutions.size())},
                         {"converged", double(probe.converged)},
                         {"failed", double(probe.failed)}},
                        ""});
  energy_verdict(d);
  return d;
}

BranchDiagram scenario_sign(int n, std::uint64_t seed) {
  const Canned c{0.0, 1.0, n, 1.0, "1", "0", "-0.1"};
  const ProblemSpec base = build(c, n);
  const Mesh& mesh = base.mesh();
  BranchDiagram d;
  d.scenario = "th3_sign";
  const auto u0 = solve_u0(base);
  if (!u0) {
    d.verdicts.push_back({"u0_found", false, {}, "no solution"});
    return d;
  }
  d.gamma1 = principal_eigenvalue(base.op(), assemble_linearized(base, u0->u), base.cplus).gamma1;
  const std::vector<double> grid{1.0, 5.0, 20.0};
  BranchDiagram s = sweep(base, grid, {}, d.scenario);
  d.records = s.records;

  Verdict two{"two_solutions", true, {}, ""};
  Verdict below{"minimal_below_u0", true, {}, ""};
  Verdict sign{"second_not_nonpositive", true, {}, ""};
  Verdict unique{"unique_nonpositive_solution", true, {}, ""};
  Verdict mono{"minimal_branch_decreasing", true, {}, ""};
  std::mt19937_64 rng(seed);
  const SolutionRecord* prev = nullptr;
  for (double lambda : grid) {
    const std::string tag = lambda_tag(lambda);
    const SolutionRecord* m = find_record(d, lambda, SolutionKind::minimal);
    const SolutionRecord* p = find_record(d, lambda, SolutionKind::mountain_pass);
    two.pass = two.pass && m && p && !coincide(m->u, p->u);
    below.pass = below.pass && m && much_less(m->u, u0->u, mesh);
    const double pos = p ? base.cplus.cwiseProduct(p->u).maxCoeff() : NAN;
    sign.evidence["max_cplus_u2 " + tag] = pos;
    sign.pass = sign.pass && p && pos > 0.0;
    if (prev && m) mono.pass = mono.pass && much_less(m->u, prev->u, mesh);
    if (!m) mono.pass = false;
    prev = m;

    const ProblemSpec at = base.with_lambda(lambda);
    const Barrier barrier = construct_barrier(at, {u0->u});
    const auto nonpositive = [&](const SolutionRecord& r) {
      return base.cplus.cwiseProduct(r.u).maxCoeff() <= 1e-10;
    };
    const auto probe =
        uniqueness_probe(at, barrier, random_starts(mesh, 20, rng, -0.9, 1.0), nonpositive);
    unique.evidence["distinct " + tag] = double(probe.solutions.size());
    unique.pass = unique.pass && probe.solutions.size() == 1 && m &&
                  coincide(probe.solutions[0].u, m->u);
  }
  for (auto* v : {&two, &below, &sign, &unique, &mono}) d.verdicts.push_back(*v);
  energy_verdict(d);
  return d;
}

BranchDiagram scenario_coercive(int n) {
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const Canned c{0.0, 1.0, n, 1.0, "1", "0", "0"};
  const ProblemSpec base = build(c, n);
  BranchDiagram d;
  d.scenario = "coercive_iff";

  const auto family = [&](double s) {
    return make_problem(base.ops, base.mu, base.cplus, base.cminus,
                        Field::Constant(base.size(), s), 0.0);
  };
  const auto solvable = [&](double s, SolutionRecord* out) {
    const ProblemSpec spec = family(s);
    try {
      const Barrier barrier = construct_barrier(spec, {});
      SolutionRecord rec = find_minimal(spec, barrier, {});
      if (out) *out = std::move(rec);
      return true;
    } catch (const Error&) {
      return false;
    }
  };

  Verdict formula{"md_matches_formula", true, {}, ""};
  Verdict iff{"solvable_iff_md_positive", true, {}, ""};
  Verdict equiv{"md_sign_equivalence", true, {}, ""};
  double worst = 0.0;
  for (double r : {0.0, 0.25, 0.5, 0.9, 0.95, 1.05, 1.1, 1.5, 2.0}) {
    const double s = r * pi2;
    const ProblemSpec spec = family(s);
    const double md = compute_md(base.op(), spec.cminus, spec.h, spec.mu).value;
    worst = std::max(worst, std::abs(md - (1.0 - s / pi2)));
    SolutionRecord rec;
    const bool ok = solvable(s, &rec);
    iff.pass = iff.pass && ok == (md > 0.0);
    iff.evidence["md s/pi^2=" + std::to_string(r).substr(0, 4)] = md;
    equiv.pass = equiv.pass && md_sign_equivalence(base.op(), spec.cminus, spec.h, spec.mu);
    if (ok) d.records.push_back(std::move(rec));
  }
  formula.evidence["max_abs_error"] = worst;
  formula.pass = worst <= 1e-3;

  double lo = 0.5 * pi2, hi = 1.5 * pi2;
  Verdict onset{"solvability_onset_at_pi_squared", false, {}, ""};
  if (solvable(lo, nullptr) && !solvable(hi, nullptr)) {
    while (hi - lo > 1e-4 * hi) {
      const double mid = 0.5 * (lo + hi);
      (solvable(mid, nullptr) ? lo : hi) = mid;
    }
    const double s = 0.5 * (lo + hi);
    onset.pass = std::abs(s / pi2 - 1.0) <= 0.02;
    onset.evidence = {{"onset", s}, {"relative_offset", s / pi2 - 1.0}};
  } else {
    onset.note = "solvability does not change across [0.5, 1.5] pi^2";
  }
  for (auto* v : {&formula, &iff, &equiv, &onset}) d.verdicts.push_back(*v);
  return d;
}

}  // namespace

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names{"example1d", "th2_fold", "th3_sign", "th_h0_flip",
                                              "coercive_iff"};
  return names;
}

BranchDiagram verify_scenario(const std::string& name, std::uint64_t seed,
                              std::optional<int> grid) {
  if (name == "example1d") return scenario_example1d(grid.value_or(800));
  if (name == "th_h0_flip") return scenario_flip(grid.value_or(1000), seed);
  if (name == "th2_fold") return scenario_fold(grid.value_or(200), seed);
  if (name == "th3_sign") return scenario_sign(grid.value_or(200), seed);
  if (name == "coercive_iff") return scenario_coercive(grid.value_or(200));
  throw ConfigError("unknown scenario '" + name + "'");
}

}  // namespace qgrad
