#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fla/numdiff.hpp"
#include "fla/runner.hpp"

namespace py = pybind11;
using namespace fla;

namespace {

Var parse_var(const std::string& name) {
  if (name.size() < 2 || (name[0] != 'x' && name[0] != 'y'))
    throw std::invalid_argument("variable must look like x1 or y2");
  const int idx = std::stoi(name.substr(1)) - 1;
  if (idx < 0) throw std::invalid_argument("variable indices are 1-based");
  return Var{name[0] == 'x' ? VarKind::base : VarKind::fiber, idx};
}

Point make_point(const std::vector<double>& x, const std::vector<double>& y) {
  return Point{x, y};
}

py::dict check_to_dict(const CheckRecord& c) {
  py::dict d;
  d["id"] = c.id;
  d["anchor"] = c.anchor;
  d["residual"] = c.residual;
  d["tolerance"] = c.tolerance;
  d["pass"] = c.pass;
  return d;
}

py::dict dump_to_dict(const TensorDump& t) {
  py::dict d;
  d["id"] = t.id;
  d["labels"] = t.labels;
  d["values"] = t.values;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Finsler geometry on Lie algebroids: symbolic fields, derived "
            "geometric objects, and identity verification";

  py::register_exception<ParseError>(m, "ExprParseError");
  py::register_exception<ScenarioError>(m, "ScenarioFileError");
  py::register_exception<SingularMatrixError>(m, "SingularMetricError");
  py::register_exception<DomainError>(m, "EvaluationDomainError");

  py::class_<Expr>(m, "Expr")
      .def("__str__", &Expr::str)
      .def("__repr__", [](const Expr& e) { return "Expr(" + e.str() + ")"; })
      .def(
          "diff",
          [](const Expr& e, const std::string& var) { return e.diff(parse_var(var)); },
          py::arg("var"), "Exact symbolic partial with respect to x<i> or y<a>.")
      .def(
          "eval",
          [](const Expr& e, const std::vector<double>& x, const std::vector<double>& y) {
            return e.eval(make_point(x, y));
          },
          py::arg("x"), py::arg("y"))
      .def("simplified", &Expr::simplified);

  m.def(
      "parse",
      [](const std::string& text, int mdim, int ndim) {
        return parse_expr(text, Dims{mdim, ndim});
      },
      py::arg("text"), py::arg("m"), py::arg("n"),
      "Parse an expression over x1..xm, y1..yn.");

  m.def(
      "fd_oracle",
      [](const Expr& e, const std::vector<double>& x, const std::vector<double>& y,
         const std::string& var, int order) {
        return fd_oracle(e, make_point(x, y), parse_var(var), order);
      },
      py::arg("expr"), py::arg("x"), py::arg("y"), py::arg("var"), py::arg("order") = 1,
      "Central finite-difference estimate, the independent derivative oracle.");

  py::class_<Scenario>(m, "Scenario")
      .def_readonly("name", &Scenario::name)
      .def_property_readonly("m", [](const Scenario& s) { return s.dims.m; })
      .def_property_readonly("n", [](const Scenario& s) { return s.dims.n; });

  m.def("load_scenario", &load_scenario, py::arg("path"));
  m.def("parse_scenario", &parse_scenario, py::arg("text"),
        py::arg("origin") = std::string("<string>"));

  py::class_<Report>(m, "Report")
      .def_readonly("scenario", &Report::scenario)
      .def_readonly("command", &Report::command)
      .def_readonly("seed", &Report::seed)
      .def_property_readonly("passed", &Report::all_pass)
      .def_property_readonly("checks",
                             [](const Report& r) {
                               py::list out;
                               for (const auto& c : r.checks) out.append(check_to_dict(c));
                               return out;
                             })
      .def_property_readonly("dumps",
                             [](const Report& r) {
                               py::list out;
                               for (const auto& t : r.dumps) out.append(dump_to_dict(t));
                               return out;
                             })
      .def("json", [](const Report& r) { return emit_json(r); })
      .def("text", [](const Report& r) { return emit_text(r); });

  m.def(
      "run",
      [](const std::string& command, const Scenario& sc, const std::string& kind, bool torsion,
         bool curvature, bool ricci, py::object projective, py::object seed, py::object points,
         py::object tol) {
        RunOptions opt;
        opt.kind = kind;
        opt.torsion = torsion;
        opt.curvature = curvature;
        opt.ricci = ricci;
        if (!projective.is_none()) opt.projective = projective.cast<std::string>();
        if (!seed.is_none()) opt.seed = seed.cast<std::uint64_t>();
        if (!points.is_none()) opt.points = points.cast<int>();
        if (!tol.is_none()) opt.tol = tol.cast<double>();
        return run(parse_command(command), sc, opt);
      },
      py::arg("command"), py::arg("scenario"), py::arg("kind") = std::string(),
      py::arg("torsion") = false, py::arg("curvature") = false, py::arg("ricci") = false,
      py::arg("projective") = py::none(), py::arg("seed") = py::none(),
      py::arg("points") = py::none(), py::arg("tol") = py::none(),
      "Run a verification command against a scenario and return the report.");

  m.attr("commands") = std::vector<std::string>{
      "verify-algebroid", "verify-finsler", "spray",    "barthel",        "endo-report",
      "connection",       "douglas",        "classify", "berwald-derivative", "identity-suite"};

#ifdef FLA_VERSION
  m.attr("__version__") = FLA_VERSION;
#else
  m.attr("__version__") = "dev";
#endif
}
