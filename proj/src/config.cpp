#include "qgrad/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "qgrad/error.hpp"
#include "qgrad/expr.hpp"

namespace qgrad {

namespace {

namespace pt = boost::property_tree;

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string unquote(const std::string& raw) {
  std::string s = trim(raw);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

double to_number(const std::string& key, const std::string& raw) {
  const std::string s = unquote(raw);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(out))
    throw ConfigError(key + ": expected a finite number, got '" + s + "'");
  return out;
}

long long to_integer(const std::string& key, const std::string& raw) {
  const std::string s = unquote(raw);
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
    throw ConfigError(key + ": expected an integer, got '" + s + "'");
  return out;
}

std::vector<double> to_list(const std::string& key, const std::string& raw) {
  std::string s = unquote(raw);
  for (char& c : s)
    if (c == ',') c = ' ';
  std::istringstream in(s);
  std::vector<double> out;
  for (std::string tok; in >> tok;) out.push_back(to_number(key, tok));
  return out;
}

int positive_int(const std::string& key, const std::string& raw) {
  const long long v = to_integer(key, raw);
  if (v < 1 || v > 1'000'000'000) throw ConfigError(key + ": must be a positive integer");
  return static_cast<int>(v);
}

double positive(const std::string& key, const std::string& raw) {
  const double v = to_number(key, raw);
  if (!(v > 0.0)) throw ConfigError(key + ": must be positive");
  return v;
}

using Setter = std::function<void(Config&, const std::string&, const std::string&)>;

const std::map<std::string, std::map<std::string, Setter>>& schema() {
  static const std::map<std::string, std::map<std::string, Setter>> s = {
      {"domain",
       {{"dim",
         [](Config& c, const std::string& k, const std::string& v) {
           const long long d = to_integer(k, v);
           if (d != 1 && d != 2) throw ConfigError(k + ": must be 1 or 2");
           c.dim = static_cast<int>(d);
         }},
        {"x",
         [](Config& c, const std::string& k, const std::string& v) {
           const auto b = to_list(k, v);
           if (b.size() != 2) throw ConfigError(k + ": expected 'lo hi'");
           c.bounds[0] = {b[0], b[1]};
         }},
        {"y",
         [](Config& c, const std::string& k, const std::string& v) {
           const auto b = to_list(k, v);
           if (b.size() != 2) throw ConfigError(k + ": expected 'lo hi'");
           c.bounds[1] = {b[0], b[1]};
         }},
        {"n", [](Config& c, const std::string& k, const std::string& v) {
           std::string s = unquote(v);
           std::istringstream in(s);
           std::vector<int> n;
           for (std::string tok; in >> tok;) n.push_back(positive_int(k, tok));
           if (n.empty() || n.size() > 2) throw ConfigError(k + ": expected 'n' or 'nx ny'");
           c.counts = {n[0], n.size() == 2 ? n[1] : n[0]};
         }}}},
      {"problem",
       {{"mu", [](Config& c, const std::string& k,
                  const std::string& v) { c.mu = to_number(k, v); }},
        {"cplus", [](Config& c, const std::string&, const std::string& v) { c.cplus = unquote(v); }},
        {"cminus",
         [](Config& c, const std::string&, const std::string& v) { c.cminus = unquote(v); }},
        {"h", [](Config& c, const std::string&, const std::string& v) { c.h = unquote(v); }}}},
      {"lambda",
       {{"mode",
         [](Config& c, const std::string& k, const std::string& v) {
           const std::string m = unquote(v);
           if (m == "single") c.lambda.mode = LambdaMode::single;
           else if (m == "grid") c.lambda.mode = LambdaMode::grid;
           else if (m == "bracket") c.lambda.mode = LambdaMode::bracket;
           else throw ConfigError(k + ": expected single, grid or bracket");
         }},
        {"value", [](Config& c, const std::string& k,
                     const std::string& v) { c.lambda.value = to_number(k, v); }},
        {"values", [](Config& c, const std::string& k,
                      const std::string& v) { c.lambda.values = to_list(k, v); }},
        {"lo", [](Config& c, const std::string& k,
                  const std::string& v) { c.lambda.lo = to_number(k, v); }},
        {"hi", [](Config& c, const std::string& k,
                  const std::string& v) { c.lambda.hi = to_number(k, v); }}}},
      {"solver",
       {{"newton_tol", [](Config& c, const std::string& k,
                          const std::string& v) { c.solver.newton_tol = positive(k, v); }},
        {"max_newton", [](Config& c, const std::string& k,
                          const std::string& v) { c.solver.max_newton = positive_int(k, v); }},
        {"damping", [](Config& c, const std::string& k,
                       const std::string& v) { c.solver.damping = positive(k, v); }},
        {"max_halvings",
         [](Config& c, const std::string& k, const std::string& v) {
           c.solver.max_halvings = positive_int(k, v);
         }},
        {"mp_path_points",
         [](Config& c, const std::string& k, const std::string& v) {
           c.solver.mp_path_points = positive_int(k, v);
         }},
        {"mp_descent_step",
         [](Config& c, const std::string& k, const std::string& v) {
           c.solver.mp_descent_step = positive(k, v);
         }},
        {"mp_tol", [](Config& c, const std::string& k,
                      const std::string& v) { c.solver.mp_tol = positive(k, v); }},
        {"max_mp_iters",
         [](Config& c, const std::string& k, const std::string& v) {
           c.solver.max_mp_iters = positive_int(k, v);
         }},
        {"ps_guard", [](Config& c, const std::string& k,
                        const std::string& v) { c.solver.ps_guard = positive(k, v); }},
        {"newton_step_tol",
         [](Config& c, const std::string& k, const std::string& v) {
           c.solver.newton_step_tol = positive(k, v);
         }},
        {"max_monotone",
         [](Config& c, const std::string& k, const std::string& v) {
           c.solver.max_monotone = positive_int(k, v);
         }},
        {"tol_lu", [](Config& c, const std::string& k,
                      const std::string& v) { c.solver.tol_lu = positive(k, v); }},
        {"seed", [](Config& c, const std::string& k, const std::string& v) {
           const long long s = to_integer(k, v);
           if (s < 0) throw ConfigError(k + ": must be nonnegative");
           c.seed = static_cast<std::uint64_t>(s);
         }}}},
      {"output",
       {{"json", [](Config& c, const std::string&, const std::string& v) { c.json_path = unquote(v); }},
        {"csv", [](Config& c, const std::string&, const std::string& v) { c.csv_path = unquote(v); }}}},
  };
  return s;
}

void validate(const Config& c) {
  for (int a = 0; a < c.dim; ++a)
    if (!(c.bounds[a][1] > c.bounds[a][0])) throw ConfigError("domain: empty interval");
  if (!(c.mu > 0.0)) throw ConfigError("problem.mu: must be positive");
  for (const auto* e : {&c.cplus, &c.cminus, &c.h}) expr::parse(*e);
  const auto& l = c.lambda;
  if (l.mode == LambdaMode::grid) {
    if (l.values.empty()) throw ConfigError("lambda.values: grid needs at least one value");
    for (std::size_t k = 1; k < l.values.size(); ++k)
      if (!(l.values[k] > l.values[k - 1]))
        throw ConfigError("lambda.values: must be strictly increasing");
  }
  if (l.mode == LambdaMode::bracket && !(l.hi > l.lo))
    throw ConfigError("lambda: bracket needs lo < hi");
  c.solver.validate();
}

}  // namespace

Config parse_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(e.what());
  }
  Config cfg;
  bool explicit_mode = false, has_grid = false, has_bracket = false;
  for (const auto& [section, body] : tree) {
    const auto sec = schema().find(section);
    if (sec == schema().end())
      throw ConfigError("unknown section '" + section + "'");
    for (const auto& [key, node] : body) {
      const auto it = sec->second.find(key);
      if (it == sec->second.end()) throw ConfigError("unknown key '" + section + "." + key + "'");
      try {
        it->second(cfg, section + "." + key, node.data());
      } catch (const PreconditionError& e) {
        throw ConfigError(e.what());
      }
      if (section == "lambda") {
        explicit_mode |= key == "mode";
        has_grid |= key == "values";
        has_bracket |= key == "lo" || key == "hi";
      }
    }
  }
  if (!explicit_mode) {
    if (has_grid) cfg.lambda.mode = LambdaMode::grid;
    else if (has_bracket) cfg.lambda.mode = LambdaMode::bracket;
  }
  try {
    validate(cfg);
  } catch (const PreconditionError& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

void override_grid(Config& cfg, int n) {
  if (n < 1) throw ConfigError("--grid must be positive");
  cfg.counts = {n, n};
}

SampledProblem sample_problem(const Config& cfg) {
  std::vector<std::array<double, 2>> bounds(cfg.bounds.begin(), cfg.bounds.begin() + cfg.dim);
  std::vector<int> counts(cfg.counts.begin(), cfg.counts.begin() + cfg.dim);
  const Mesh mesh = build_mesh(cfg.dim, bounds, counts);
  SampledProblem out;
  out.ops = assemble_operators(mesh);
  out.cplus = expr::sample(expr::parse(cfg.cplus), mesh);
  out.cminus = expr::sample(expr::parse(cfg.cminus), mesh);
  out.h = expr::sample(expr::parse(cfg.h), mesh);
  return out;
}

ProblemSpec build_problem(const Config& cfg) {
  SampledProblem s = sample_problem(cfg);
  const auto lambdas = lambda_values(cfg.lambda);
  return make_problem(s.ops, cfg.mu, std::move(s.cplus), std::move(s.cminus), std::move(s.h),
                      lambdas.front());
}

std::vector<double> lambda_values(const LambdaSpec& l) {
  switch (l.mode) {
    case LambdaMode::single: return {l.value};
    case LambdaMode::grid: return l.values;
    case LambdaMode::bracket: return {l.lo, l.hi};
  }
  return {};
}

}  // namespace qgrad
