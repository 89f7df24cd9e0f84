#include <sstream>
#include <string>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qgrad/commands.hpp"
#include "qgrad/error.hpp"

namespace py = pybind11;
using namespace qgrad;

namespace {

Config from_text(const std::string& text, std::optional<int> grid) {
  std::istringstream in(text);
  Config cfg = parse_config(in);
  if (grid) override_grid(cfg, *grid);
  return cfg;
}

// Commands report through JSON text; the Python side decodes it.
std::string run(cli::Output (*cmd)(const Config&), const std::string& text,
                std::optional<int> grid) {
  return cmd(from_text(text, grid)).json.dump();
}

}  // namespace

PYBIND11_MODULE(_qgrad, m) {
  m.doc() = "Solution landscapes of quadratic-gradient Dirichlet problems.";

  // Translators run newest first, so the base class goes in first.
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<SpecError>(m, "SpecError", PyExc_ValueError);

  m.def("scenario_names", &scenario_names);
  m.def(
      "scenario",
      [](const std::string& name, std::uint64_t seed, std::optional<int> grid) {
        py::gil_scoped_release release;
        return cli::cmd_scenario(name, seed, grid).json.dump();
      },
      py::arg("name"), py::arg("seed") = 0, py::arg("grid") = py::none());
  m.def("check", [](const std::string& t, std::optional<int> g) { return run(cli::cmd_check, t, g); },
        py::arg("config"), py::arg("grid") = py::none());
  m.def("solve", [](const std::string& t, std::optional<int> g) { return run(cli::cmd_solve, t, g); },
        py::arg("config"), py::arg("grid") = py::none());
  m.def("sweep", [](const std::string& t, std::optional<int> g) { return run(cli::cmd_sweep, t, g); },
        py::arg("config"), py::arg("grid") = py::none());
  m.def("eigen", [](const std::string& t, std::optional<int> g) { return run(cli::cmd_eigen, t, g); },
        py::arg("config"), py::arg("grid") = py::none());
  m.def("md", [](const std::string& t, std::optional<int> g) { return run(cli::cmd_md, t, g); },
        py::arg("config"), py::arg("grid") = py::none());

  m.def("g", &g_fun, py::arg("s"), py::arg("mu"));
  m.def("G", &G_fun, py::arg("s"), py::arg("mu"));
  m.def("cole_hopf", &cole_hopf, py::arg("u"), py::arg("mu"));
  m.def("inverse_cole_hopf", &inverse_cole_hopf, py::arg("v"), py::arg("mu"));
}
