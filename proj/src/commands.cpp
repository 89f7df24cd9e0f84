#include "qgrad/commands.hpp"

#include <cmath>
#include <cstdio>

#include "qgrad/error.hpp"
#include "qgrad/spectral.hpp"

namespace qgrad::cli {

using nlohmann::ordered_json;

namespace {

ordered_json number(double x) { return std::isfinite(x) ? ordered_json(x) : ordered_json(nullptr); }

ordered_json array(const Field& f) {
  ordered_json a = ordered_json::array();
  for (double x : f) a.push_back(number(x));
  return a;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

BranchDiagram single(const std::string& scenario, const SolutionRecord& r) {
  BranchDiagram d;
  d.scenario = scenario;
  d.records.push_back(r);
  return d;
}

}  // namespace

ordered_json to_json(const SolutionRecord& r) {
  ordered_json j;
  j["lambda"] = number(r.lambda);
  j["kind"] = to_string(r.kind);
  j["energy"] = number(r.energy);
  j["residual"] = number(r.residual);
  j["iterations"] = r.iterations;
  j["umin"] = number(r.u.size() ? r.u.minCoeff() : 0.0);
  j["umax"] = number(r.u.size() ? r.u.maxCoeff() : 0.0);
  j["ordering"] = ordered_json::object();
  for (const auto& [k, v] : r.ordering) j["ordering"][k] = v;
  j["u"] = array(r.u);
  return j;
}

ordered_json to_json(const BranchDiagram& d, std::uint64_t seed) {
  ordered_json j;
  j["schema"] = "qgrad.branch_diagram/1";
  j["scenario"] = d.scenario;
  j["seed"] = seed;
  j["pass"] = d.all_pass();
  j["gamma1"] = d.gamma1 ? number(*d.gamma1) : ordered_json(nullptr);
  if (d.lambda_bar) {
    j["lambda_bar"] = {{"lo", d.lambda_bar->lo},
                       {"hi", d.lambda_bar->hi},
                       {"width", d.lambda_bar->width()},
                       {"bisections", d.lambda_bar->bisections}};
  } else {
    j["lambda_bar"] = nullptr;
  }
  j["records"] = ordered_json::array();
  for (const auto& r : d.records) j["records"].push_back(to_json(r));
  j["verdicts"] = ordered_json::array();
  for (const auto& v : d.verdicts) {
    ordered_json e = ordered_json::object();
    for (const auto& [k, x] : v.evidence) e[k] = number(x);
    j["verdicts"].push_back({{"name", v.name}, {"pass", v.pass}, {"evidence", e}, {"note", v.note}});
  }
  return j;
}

std::string to_csv(const BranchDiagram& d) {
  std::string out = "scenario,lambda,kind,energy,residual,umin,umax,ordering\n";
  for (const auto& r : d.records) {
    std::string flags;
    for (const auto& [k, v] : r.ordering) {
      if (!flags.empty()) flags += ';';
      flags += k + "=" + v;
    }
    out += d.scenario + ',' + fmt(r.lambda) + ',' + to_string(r.kind) + ',' + fmt(r.energy) + ',' +
           fmt(r.residual) + ',' + fmt(r.u.size() ? r.u.minCoeff() : 0.0) + ',' +
           fmt(r.u.size() ? r.u.maxCoeff() : 0.0) + ',' + flags + '\n';
  }
  return out;
}

Output cmd_check(const Config& cfg) {
  const SampledProblem s = sample_problem(cfg);
  const auto violations = check_spec(cfg.mu, s.cplus, s.cminus, s.h);
  Output out;
  out.json["command"] = "check";
  out.json["ok"] = violations.empty();
  out.json["nodes"] = s.ops->size();
  out.json["violations"] = ordered_json::array();
  for (const auto& v : violations) out.json["violations"].push_back({{"what", v.what}, {"nodes", v.nodes}});
  out.code = violations.empty() ? kOk : kCheckViolation;
  return out;
}

Output cmd_solve(const Config& cfg) {
  if (cfg.lambda.mode != LambdaMode::single)
    throw ConfigError("solve needs a single lambda value");
  const ProblemSpec spec = build_problem(cfg);
  const auto u0 = solve_u0(spec, cfg.solver);
  std::vector<Field> candidates, uppers;
  if (u0) {
    candidates.push_back(u0->u);
    uppers.push_back(u0->v);
  }
  const Barrier barrier = construct_barrier(spec, candidates, cfg.solver.tol_lu);
  SolutionRecord rec = find_minimal(spec, barrier, uppers, cfg.solver);
  if (u0) {
    rec.ordering["u0<<this"] = to_string(check_ordering(u0->u, rec.u, spec.mesh()));
    rec.ordering["this<<u0"] = to_string(check_ordering(rec.u, u0->u, spec.mesh()));
  }

  Output out;
  out.json["command"] = "solve";
  out.json["lambda"] = spec.lambda;
  out.json["barrier"] = {{"source", to_string(barrier.source)}, {"margin", barrier.margin}};
  out.json["u0"] = u0 ? to_json(*u0) : ordered_json(nullptr);
  out.json["solution"] = to_json(rec);
  out.csv = to_csv(single("solve", rec));
  return out;
}

Output cmd_sweep(const Config& cfg) {
  const ProblemSpec spec = build_problem(cfg);
  BranchDiagram d;
  if (cfg.lambda.mode == LambdaMode::bracket) {
    const LambdaBracket b = find_lambda_bar(spec, cfg.lambda.lo, cfg.lambda.hi, cfg.seed, cfg.solver);
    d = sweep(spec, {b.lo}, cfg.solver, "sweep");
    d.lambda_bar = b;
  } else {
    d = sweep(spec, lambda_values(cfg.lambda), cfg.solver, "sweep");
  }
  Output out;
  out.json = to_json(d, cfg.seed);
  out.csv = to_csv(d);
  return out;
}

Output cmd_eigen(const Config& cfg) {
  const ProblemSpec spec = build_problem(cfg);
  const auto u0 = solve_u0(spec, cfg.solver);
  if (!u0) throw ConvergenceError("the lambda = 0 problem has no solution");
  const EigenPair ep =
      principal_eigenvalue(spec.op(), assemble_linearized(spec, u0->u), spec.cplus);
  Output out;
  out.json["command"] = "eigen";
  out.json["gamma1"] = ep.gamma1;
  out.json["residual"] = ep.residual;
  out.json["concave"] = ep.concave;
  out.json["mu1_curve"] = ordered_json::array();
  for (const auto& [g, m] : ep.mu1_curve) out.json["mu1_curve"].push_back({g, m});
  out.json["phi1"] = array(ep.phi1);
  return out;
}

Output cmd_md(const Config& cfg) {
  const SampledProblem s = sample_problem(cfg);
  if (!(cfg.mu > 0.0)) throw ConfigError("problem.mu: must be positive");
  const MdResult md = compute_md(*s.ops, s.cminus, s.h, cfg.mu);
  Output out;
  out.json["command"] = "md";
  out.json["md"] = number(md.value);
  out.json["md_l2"] = number(compute_md_l2(*s.ops, s.cminus, s.h, cfg.mu));
  out.json["subspace_dim"] = md.subspace_dim;
  out.json["minimizer"] = md.minimizer ? array(*md.minimizer) : ordered_json(nullptr);
  return out;
}

Output cmd_scenario(const std::string& name, std::uint64_t seed, std::optional<int> grid) {
  const BranchDiagram d = verify_scenario(name, seed, grid);
  Output out;
  out.json = to_json(d, seed);
  out.csv = to_csv(d);
  out.code = d.all_pass() ? kOk : kVerdictFailed;
  return out;
}

Output from_exception(const std::exception& e) {
  Output out;
  ordered_json err = ordered_json::object();
  std::string type = "Error";
  out.code = kSolverError;
  if (const auto* p = dynamic_cast<const ParseError*>(&e)) {
    type = "ParseError";
    err["offset"] = p->offset();
    out.code = kConfigError;
  } else if (const auto* d = dynamic_cast<const EvalDomainError*>(&e)) {
    type = "EvalDomainError";
    err["x"] = d->x();
    err["y"] = d->y();
    out.code = kConfigError;
  } else if (dynamic_cast<const ConfigError*>(&e)) {
    type = "ConfigError";
    out.code = kConfigError;
  } else if (dynamic_cast<const DimensionError*>(&e)) {
    type = "DimensionError";
    out.code = kConfigError;
  } else if (dynamic_cast<const InvalidMeshError*>(&e)) {
    type = "InvalidMeshError";
    out.code = kConfigError;
  } else if (const auto* s = dynamic_cast<const SpecError*>(&e)) {
    type = "SpecError";
    err["nodes"] = s->nodes();
    out.code = kCheckViolation;
  } else if (const auto* c = dynamic_cast<const ConvergenceError*>(&e)) {
    type = "ConvergenceError";
    err["iterations"] = c->iterations();
  } else if (const auto* f = dynamic_cast<const FactorizationError*>(&e)) {
    type = "FactorizationError";
    err["cond_estimate"] = number(f->cond_estimate());
  } else if (dynamic_cast<const BarrierError*>(&e)) {
    type = "BarrierError";
  } else if (dynamic_cast<const BracketError*>(&e)) {
    type = "BracketError";
  } else if (dynamic_cast<const NoEigenvalueError*>(&e)) {
    type = "NoEigenvalueError";
  } else if (dynamic_cast<const MonotonicityError*>(&e)) {
    type = "MonotonicityError";
  } else if (dynamic_cast<const UnboundedError*>(&e)) {
    type = "UnboundedError";
  } else if (dynamic_cast<const GeometryError*>(&e)) {
    type = "GeometryError";
  } else if (dynamic_cast<const BlowdownError*>(&e)) {
    type = "BlowdownError";
  } else if (dynamic_cast<const PreconditionError*>(&e)) {
    type = "PreconditionError";
  } else if (!dynamic_cast<const Error*>(&e)) {
    type = "InternalError";
  }
  ordered_json head = {{"type", type}, {"message", e.what()}};
  head.update(err);
  out.json["error"] = head;
  return out;
}

}  // namespace qgrad::cli
