#include <doctest.h>

#include <numbers>
#include <sstream>

#include "qgrad/commands.hpp"
#include "qgrad/error.hpp"

using namespace qgrad;

namespace {

Config parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

std::string config_path(const std::string& name) { return std::string(QGRAD_CONFIG_DIR) + "/" + name; }

}  // namespace

TEST_CASE("config parsing") {
  const Config c = parse(
      "[domain]\ndim = 2\nx = -1 1\ny = 0, 2\nn = 30 40\n"
      "[problem]\nmu = 0.5\ncplus = \"if x < 0 then 1 else 0\"\nh = 0.1\n"
      "[lambda]\nvalues = 1 2 3\n"
      "[solver]\nnewton_tol = 1e-9\nseed = 42\n"
      "[output]\njson = out/a.json\n");
  CHECK(c.dim == 2);
  CHECK(c.bounds[0][0] == -1.0);
  CHECK(c.bounds[1][1] == 2.0);
  CHECK(c.counts[0] == 30);
  CHECK(c.counts[1] == 40);
  CHECK(c.mu == 0.5);
  CHECK(c.cplus == "if x < 0 then 1 else 0");
  CHECK(c.h == "0.1");
  CHECK(c.lambda.mode == LambdaMode::grid);
  CHECK(lambda_values(c.lambda) == std::vector<double>{1, 2, 3});
  CHECK(c.solver.newton_tol == 1e-9);
  CHECK(c.seed == 42);
  CHECK(c.json_path == "out/a.json");

  CHECK(parse("[lambda]\nlo = 1\nhi = 2\n").lambda.mode == LambdaMode::bracket);
  CHECK(parse("[lambda]\nvalue = 3\n").lambda.mode == LambdaMode::single);
  CHECK(parse("").counts[0] == 400);

  Config g = parse("[domain]\nn = 10\n");
  override_grid(g, 25);
  CHECK(g.counts[0] == 25);
  CHECK_THROWS_AS(override_grid(g, 0), ConfigError);
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse("[mesh]\nn = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse("[domain]\nnodes = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse("[problem]\nmu = abc\n"), ConfigError);
  CHECK_THROWS_AS(parse("[problem]\nmu = -1\n"), ConfigError);
  CHECK_THROWS_AS(parse("[domain]\nx = 1 0\n"), ConfigError);
  CHECK_THROWS_AS(parse("[domain]\ndim = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse("[domain]\nn = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse("[lambda]\nvalues = 1 3 2\n"), ConfigError);
  CHECK_THROWS_AS(parse("[lambda]\nlo = 2\nhi = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse("[lambda]\nmode = sideways\n"), ConfigError);
  CHECK_THROWS_AS(parse("[solver]\nmp_path_points = 2\n"), ConfigError);
  CHECK_THROWS_AS(parse("[solver]\nseed = -1\n"), ConfigError);
  CHECK_THROWS_AS(parse("not ini at all ["), ConfigError);
  CHECK_THROWS_AS(parse("[problem]\nh = \"1 +\"\n"), ParseError);
  CHECK_THROWS_AS(load_config(config_path("missing.ini")), ConfigError);
}

TEST_CASE("commands") {
  SUBCASE("check") {
    const cli::Output ok = cli::cmd_check(load_config(config_path("example1d.ini")));
    CHECK(ok.code == cli::kOk);
    CHECK(ok.json["ok"] == true);
    const cli::Output bad = cli::cmd_check(load_config(config_path("bad_split.ini")));
    CHECK(bad.code == cli::kCheckViolation);
    CHECK(bad.json["violations"].size() >= 1);
  }
  SUBCASE("md") {
    Config c = load_config(config_path("md_unit.ini"));
    override_grid(c, 100);
    const cli::Output o = cli::cmd_md(c);
    CHECK(o.json["md"].get<double>() ==
          doctest::Approx(1.0 - 1.0 / (std::numbers::pi * std::numbers::pi)).epsilon(1e-3));
    CHECK(o.json["subspace_dim"] == 100);
    CHECK(o.json["minimizer"].size() == 100);
  }
  SUBCASE("eigen") {
    Config c = load_config(config_path("h0_unit.ini"));
    override_grid(c, 100);
    const cli::Output o = cli::cmd_eigen(c);
    CHECK(o.json["gamma1"].get<double>() ==
          doctest::Approx(std::numbers::pi * std::numbers::pi).epsilon(5e-3));
    CHECK(o.json["concave"] == true);
  }
  SUBCASE("solve") {
    Config c = parse("[domain]\nn = 100\n[problem]\nh = 0.05\n[lambda]\nvalue = 2\n");
    const cli::Output o = cli::cmd_solve(c);
    CHECK(o.code == cli::kOk);
    CHECK(o.json["solution"]["kind"] == "minimal");
    CHECK(o.json["solution"]["ordering"]["u0<<this"] == "much_less");
    CHECK(o.csv.rfind("scenario,lambda,kind,energy,residual,umin,umax,ordering\n", 0) == 0);
    c.lambda.mode = LambdaMode::grid;
    c.lambda.values = {1, 2};
    CHECK_THROWS_AS(cli::cmd_solve(c), ConfigError);
  }
  SUBCASE("beyond the fold the solver reports failure") {
    const Config c = parse("[domain]\nn = 100\n[problem]\nh = 0.05\n[lambda]\nvalue = 9.5\n");
    try {
      cli::cmd_solve(c);
      FAIL("expected a solver error");
    } catch (const std::exception& e) {
      CHECK(cli::from_exception(e).code == cli::kSolverError);
    }
  }
  SUBCASE("scenario output is deterministic") {
    const cli::Output a = cli::cmd_scenario("th3_sign", 3, 80);
    const cli::Output b = cli::cmd_scenario("th3_sign", 3, 80);
    CHECK(a.json.dump() == b.json.dump());
    CHECK(a.csv == b.csv);
    CHECK(a.json["schema"] == "qgrad.branch_diagram/1");
    CHECK(a.json["seed"] == 3);
  }
}

TEST_CASE("exit codes for errors") {
  CHECK(cli::from_exception(ParseError("bad", 3)).code == cli::kConfigError);
  CHECK(cli::from_exception(ParseError("bad", 3)).json["error"]["offset"] == 3);
  CHECK(cli::from_exception(ConfigError("bad")).code == cli::kConfigError);
  CHECK(cli::from_exception(SpecError("bad", {1, 2})).code == cli::kCheckViolation);
  CHECK(cli::from_exception(ConvergenceError("bad")).code == cli::kSolverError);
  CHECK(cli::from_exception(BracketError("bad")).json["error"]["type"] == "BracketError");
  CHECK(cli::from_exception(std::runtime_error("x")).json["error"]["type"] == "InternalError");
}

TEST_CASE("non-finite numbers serialize as null") {
  BranchDiagram d;
  d.scenario = "t";
  SolutionRecord r;
  r.energy = std::numeric_limits<double>::infinity();
  r.u = Field::Zero(2);
  d.records.push_back(r);
  const auto j = cli::to_json(d, 0);
  CHECK(j["records"][0]["energy"].is_null());
  CHECK(j["lambda_bar"].is_null());
  CHECK(cli::to_csv(d).find("t,0,minimal,inf") != std::string::npos);
}
