#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qgrad/commands.hpp"
#include "qgrad/error.hpp"

namespace fs = std::filesystem;
using namespace qgrad;

namespace {

struct Flags {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> grid;
};

void write_file(const fs::path& p, const std::string& text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + p.string() + "'");
  f << text;
}

// --out DIR wins over the [output] paths; without either, JSON goes to stdout.
void emit(const cli::Output& o, const std::string& stem, const Flags& flags, const Config* cfg) {
  const std::string json = o.json.dump(2) + "\n";
  if (!flags.out.empty()) {
    write_file(fs::path(flags.out) / (stem + ".json"), json);
    if (!o.csv.empty()) write_file(fs::path(flags.out) / (stem + ".csv"), o.csv);
    return;
  }
  if (cfg && !cfg->json_path.empty()) {
    write_file(cfg->json_path, json);
  } else {
    std::cout << json;
  }
  if (cfg && !cfg->csv_path.empty() && !o.csv.empty()) write_file(cfg->csv_path, o.csv);
}

Config load(const Flags& flags) {
  if (flags.config.empty()) throw ConfigError("--config is required for this command");
  Config cfg = load_config(flags.config);
  if (flags.grid) override_grid(cfg, *flags.grid);
  if (flags.seed) cfg.seed = *flags.seed;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Solution landscapes of -Lap u = c_lambda u + mu |grad u|^2 + h"};
  app.require_subcommand(1);
  Flags flags;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", flags.config, "INI configuration file");
    sub->add_option("--out", flags.out, "Directory for <name>.json and <name>.csv");
    sub->add_option("--seed", flags.seed, "Seed for multistart randomization");
    sub->add_option("--grid", flags.grid, "Interior nodes per axis (override)")
        ->check(CLI::PositiveNumber);
  };

  std::string scenario;
  auto* check = app.add_subcommand("check", "Validate the coefficient assumptions nodewise");
  auto* solve = app.add_subcommand("solve", "Minimal solution at a single lambda");
  auto* sweep = app.add_subcommand("sweep", "Branch diagram over a lambda grid or bracket");
  auto* eigen = app.add_subcommand("eigen", "Principal eigenvalue of the linearization at u0");
  auto* md = app.add_subcommand("md", "Coercivity constant of -Lap - mu h on {c- = 0}");
  auto* scen = app.add_subcommand("scenario", "Run a canned scenario and its verdicts");
  scen->add_option("name", scenario, "Scenario name")
      ->required()
      ->check(CLI::IsMember(scenario_names()));
  for (auto* sub : {check, solve, sweep, eigen, md, scen}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kOk : cli::kConfigError;
  }

  std::string stem;
  std::optional<Config> cfg;
  cli::Output out;
  try {
    if (scen->parsed()) {
      stem = scenario;
      out = cli::cmd_scenario(scenario, flags.seed.value_or(0), flags.grid);
    } else {
      cfg = load(flags);
      if (check->parsed()) stem = "check", out = cli::cmd_check(*cfg);
      else if (solve->parsed()) stem = "solve", out = cli::cmd_solve(*cfg);
      else if (sweep->parsed()) stem = "sweep", out = cli::cmd_sweep(*cfg);
      else if (eigen->parsed()) stem = "eigen", out = cli::cmd_eigen(*cfg);
      else stem = "md", out = cli::cmd_md(*cfg);
    }
  } catch (const std::exception& e) {
    out = cli::from_exception(e);
    std::cerr << "qgrad: " << e.what() << "\n";
    std::cout << out.json.dump(2) << "\n";
    return out.code;
  }

  try {
    emit(out, stem, flags, cfg ? &*cfg : nullptr);
  } catch (const std::exception& e) {
    std::cerr << "qgrad: " << e.what() << "\n";
    return cli::kConfigError;
  }
  return out.code;
}
