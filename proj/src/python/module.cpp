#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "jtsankov/errors.hpp"
#include "jtsankov/json_io.hpp"

namespace py = pybind11;
using namespace jts;

namespace {

json parse(const std::string& s) {
  try {
    return json::parse(s);
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  }
}

// "m14" or a model document.
Model0<Rational> load(const std::string& src) {
  if (src == "m14") return build_M14();
  return model_from_json(parse(src));
}

std::string check_model(const std::string& src, const std::vector<std::string>& properties) {
  Model0<Rational> m = load(src);
  std::vector<Property> props;
  if (properties.empty() || (properties.size() == 1 && properties[0] == "all"))
    props = all_properties();
  else
    for (const auto& s : properties) props.push_back(parse_property(s));
  json checks = json::array();
  bool holds = true;
  for (Property p : props) {
    auto r = check_property(m, p);
    holds = holds && r.holds;
    checks.push_back(report_to_json(r, m.labels()));
  }
  auto sig = signature(m.form());
  return json{{"dim", m.dim()}, {"signature", json::array({sig.p, sig.q})}, {"checks", checks}, {"holds", holds}}
      .dump();
}

std::vector<std::string> residuals(const std::string& params) {
  auto r = symmetric_space_residuals(a_family_from_json(parse(params)));
  return {r[0].str(), r[1].str(), r[2].str()};
}

std::string symmetric_check(const std::string& params, int points, std::uint64_t seed) {
  auto r = symmetric_space_check(a_family_from_json(parse(params)), points, seed);
  return report_to_json(r).dump();
}

double xi(const std::string& family, double x1, const std::string& mode) {
  PlaneWaveMetric m = build_M_Phi(phi_family_from_json(parse(family)));
  Vec<double> p(m.dim(), 0.0);
  p[0] = x1;
  return xi_invariant(m, p, parse_xi_mode(mode)).value;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact checks on the 14-dimensional Jacobi-Tsankov model and its plane wave realizations.";

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ConstraintError>(m, "ConstraintError", PyExc_ValueError);

  m.def("m14_json", [] { return to_json(build_M14()).dump(); }, "The 14-dimensional model as a JSON document.");
  m.def("check_model", &check_model, py::arg("model"), py::arg("properties") = std::vector<std::string>{},
        "Runs property checks; model is \"m14\" or a model JSON string. Returns a JSON report.");
  m.def("symmetric_space_residuals", &residuals, py::arg("params"),
        "The three parameter residuals as exact \"p/q\" strings.");
  m.def("symmetric_space_check", &symmetric_check, py::arg("params"), py::arg("points") = 20,
        py::arg("seed") = 1);
  m.def("xi", &xi, py::arg("family"), py::arg("x1"), py::arg("mode") = "frame",
        "Xi of the reciprocal-family realization at the point with only x1 set (double precision).");
  m.def("kernel_dimension", [] {
    KernelDimension d = kernel_dimension();
    return py::dict(py::arg("constraint_rank") = d.constraint_rank, py::arg("b_freedom") = d.b_freedom,
                    py::arg("c_freedom") = d.c_freedom, py::arg("dimension") = d.total);
  });
}
