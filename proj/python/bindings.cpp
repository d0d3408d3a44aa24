// Python module gsepp._core.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gsepp/acceptance.hpp"
#include "gsepp/experiments.hpp"
#include "gsepp/localfit.hpp"
#include "gsepp/localize.hpp"
#include "gsepp/mbqec.hpp"
#include "gsepp/symscale.hpp"

namespace py = pybind11;
using namespace gsepp;

namespace {

DeviationOptions deviation_options(const std::string& family, int n, const std::string& noise, int final_step, std::uint64_t seed) {
  DeviationOptions o;
  o.family = parse_graph_family(family);
  o.n = n;
  o.noise = parse_gate_noise(noise);
  o.final_step = final_step;
  o.fit.seed = seed;
  return o;
}

py::dict fit_dict(const FitReport& f) {
  py::dict d;
  d["fidelity"] = f.fidelity;
  d["one_minus_F"] = f.one_minus_f();
  d["target_fidelity"] = f.target_fidelity;
  d["relative_deviation"] = f.relative_deviation;
  d["restarts_converged"] = f.restarts_converged;
  std::vector<std::array<double, 4>> ch;
  for (const auto& c : f.model.channels) ch.push_back({c[0], c[1], c[2], c[3]});
  d["channels"] = ch;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Graph-state entanglement purification and measurement-based error correction";
  m.attr("__version__") = version();
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<Graph>(m, "Graph")
      .def(py::init<int, const std::vector<std::pair<int, int>>&>(), py::arg("n"), py::arg("edges"))
      .def_static("star", &Graph::star, py::arg("n"), py::arg("center") = 0)
      .def_static("line", &Graph::line)
      .def_static("ring", &Graph::ring)
      .def("size", &Graph::size)
      .def("edges", &Graph::edges);

  m.def(
      "fixed_point",
      [](const std::string& family, int n, const std::string& noise, double p, int final_step) {
        const auto r = family_fixed_point(deviation_options(family, n, noise, final_step, 1), p);
        py::dict d;
        d["coeffs"] = r.state.coeffs();
        d["converged"] = r.converged;
        d["distilled"] = r.distilled;
        d["cycles"] = r.cycles;
        return d;
      },
      py::arg("family"), py::arg("n"), py::arg("noise"), py::arg("p"), py::arg("final_step") = kP2,
      "EPP fixed point of a graph family under noisy gates; coefficients indexed by graph-basis pattern (bit i = qubit i).");

  m.def(
      "fit_local",
      [](const std::string& family, int n, const std::string& noise, double p, int final_step, std::uint64_t seed) {
        const auto o = deviation_options(family, n, noise, final_step, seed);
        const auto r = family_fixed_point(o, p);
        if (!r.distilled) throw std::runtime_error("EPP fixed point is not distilled");
        return fit_dict(fit_closest_local(r.state, o.fit));
      },
      py::arg("family"), py::arg("n"), py::arg("noise"), py::arg("p"), py::arg("final_step") = kP2, py::arg("seed") = 1,
      "Closest local Pauli noise model to the EPP fixed point (root fidelity convention).");

  m.def(
      "localize",
      [](int n, const std::string& noise, double p) {
        const auto r = family_fixed_point(deviation_options("ghz", n, noise, kP2, 1), p);
        if (!r.distilled) throw std::runtime_error("EPP fixed point is not distilled");
        const auto loc = localize_noise(twirl_to_standard_form(r.state));
        py::dict d;
        d["coeffs"] = loc.state.coeffs();
        d["fidelity_before"] = loc.report.fidelity_before;
        d["fidelity_after"] = loc.report.fidelity_after;
        d["relative_reduction"] = loc.report.relative_reduction;
        d["p"] = loc.report.p;
        d["Q"] = loc.report.Q;
        return d;
      },
      py::arg("n"), py::arg("noise"), py::arg("p"));

  m.def(
      "patterns",
      [](const std::string& code) {
        const Code c = parse_code(code);
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& r : no_error_patterns(c, derive_correction_table(c))) out.emplace_back(r.pattern.letters(), std::string(1, pauli_char(r.correction)));
        return out;
      },
      py::arg("code") = "repetition3");

  m.def(
      "decode_only_fidelity",
      [](const std::string& code, const std::string& prep, const std::string& noise, double p, int final_step) {
        const Code c = parse_code(code);
        MapSpec s;
        s.scenario = CommScenario::DecodeOnly;
        if (prep == "gate-based") {
          s.impl = DecodeImpl::GateBased;
          s.gate_noise = make_gate_noise(parse_gate_noise(noise), p);
        } else {
          PrepSpec ps;
          ps.kind = parse_prep(prep);
          ps.noise = parse_gate_noise(noise);
          ps.gate_param = p;
          ps.final_step = final_step;
          s.decode_resource = build_resource(c, Role::Decode, ps).state;
        }
        return jamiolkowski_fidelity(effective_map(c, s));
      },
      py::arg("code"), py::arg("prep"), py::arg("noise"), py::arg("p"), py::arg("final_step") = kP1,
      "Jamiolkowski fidelity of decoding with a perfect encoder; prep is perfect, epp, direct-gates or gate-based.");

  m.def("benefit_threshold", &benefit_threshold, py::arg("code"), py::arg("channel"), py::arg("lo"), py::arg("hi"), py::arg("tol") = 1e-6);
  m.def("parse_code", &parse_code);
  py::class_<Code>(m, "Code").def_property_readonly("name", &Code::name).def_readonly("n", &Code::n);

  m.def(
      "scaling_threshold", [](const std::string& scenario, int n) { return scaling_threshold(parse_scenario(scenario), n).threshold; },
      py::arg("scenario"), py::arg("n"));
  m.def("prep_threshold", &prep_threshold, py::arg("n"), py::arg("tolerance") = 1e-4);

  m.def(
      "run_experiment",
      [](const std::string& config_text, const std::string& output) {
        const auto s = run_experiment(parse_config(config_text), output);
        py::dict d;
        d["files"] = s.files;
        d["points"] = s.points;
        d["failed_points"] = s.failed_points;
        return d;
      },
      py::arg("config_json"), py::arg("output") = "", "Runs a JSON experiment config; raises ConfigError on invalid input.");
  m.def("validate_config", [](const std::string& text) { validate(parse_config(text)); });

  m.def(
      "run_criterion",
      [](int id, const std::string& suite) {
        const auto r = run_criterion(id, parse_suite(suite));
        py::dict d;
        d["id"] = r.id;
        d["title"] = r.title;
        d["passed"] = r.passed;
        d["expected"] = r.expected;
        d["actual"] = r.actual;
        d["notes"] = r.notes;
        return d;
      },
      py::arg("id"), py::arg("suite") = "fast");
}
