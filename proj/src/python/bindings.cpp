#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hrmv/driver.hpp"

namespace py = pybind11;

namespace {

hrmv::DriverOptions options(const std::string& main, const std::string& solver, std::size_t max_k,
                            std::size_t bmc_bound, double budget_secs, bool dedup)
{
  hrmv::DriverOptions o;
  o.main = main;
  o.engine.solver = solver;
  o.engine.max_k = max_k;
  o.engine.bmc_bound = bmc_bound;
  o.engine.budget_secs = budget_secs;
  o.dedup = dedup;
  return o;
}

template <class Cmd>
std::string verify(Cmd cmd, const std::string& file, const std::string& main, const std::string& solver,
                   std::size_t max_k, std::size_t bmc_bound, double budget_secs, bool dedup)
{
  const auto opt = options(main, solver, max_k, bmc_bound, budget_secs, dedup);
  py::gil_scoped_release release;
  return cmd(hrmv::load_program(file), opt, file).to_json();
}

} // namespace

PYBIND11_MODULE(_core, m)
{
  m.doc() = "Compositional verification of contract-annotated Lustre";
  py::register_exception<hrmv::Error>(m, "HrmvError");

  const hrmv::mc::EngineOptions d;
  auto def_verify = [&](const char* name, auto cmd) {
    m.def(
        name,
        [cmd](const std::string& file, const std::string& main, const std::string& solver, std::size_t max_k,
              std::size_t bmc_bound, double budget_secs, bool dedup) {
          return verify(cmd, file, main, solver, max_k, bmc_bound, budget_secs, dedup);
        },
        py::arg("file"), py::arg("main") = "", py::arg("solver") = "", py::arg("max_k") = d.max_k,
        py::arg("bmc_bound") = d.bmc_bound, py::arg("budget_secs") = d.budget_secs, py::arg("dedup") = true);
  };
  def_verify("check", &hrmv::cmd_check);
  def_verify("modular", &hrmv::cmd_modular);
  def_verify("abstract", &hrmv::cmd_abstract);
  def_verify("compose", &hrmv::cmd_compose);

  m.def(
      "decompose",
      [](const std::string& file, const std::string& main) {
        auto out = hrmv::cmd_decompose(hrmv::load_program(file), main);
        return std::make_pair(out.lus, out.manifest);
      },
      py::arg("file"), py::arg("main") = "");
  m.def(
      "simulate",
      [](const std::string& file, const std::string& inputs, const std::string& main, long depth) {
        return hrmv::cmd_simulate(hrmv::load_program(file), main, inputs, depth);
      },
      py::arg("file"), py::arg("inputs"), py::arg("main") = "", py::arg("depth") = -1);
  m.def(
      "graph", [](const std::string& file, const std::string& node) { return hrmv::cmd_graph(hrmv::load_program(file), node); },
      py::arg("file"), py::arg("node") = "");
}
