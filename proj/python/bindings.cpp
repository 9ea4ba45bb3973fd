#include "robust/affine_solver.hpp"
#include "robust/io.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace robust;

namespace {

py::list report_rows(const std::vector<harness::PropertyReport>& reports) {
  py::list rows;
  for (const auto& r : reports)
    for (const auto& c : r.checks) {
      py::dict d;
      d["property"] = r.property;
      d["check"] = c.name;
      d["pass"] = c.pass;
      d["vacuous"] = c.vacuous;
      d["samples"] = c.checked;
      d["worst_margin"] = c.worst_margin;
      d["detail"] = c.detail;
      rows.append(d);
    }
  return rows;
}

}  // namespace

PYBIND11_MODULE(_robustfam, m) {
  m.doc() = "Maximal graphs in H^{p,q}, hyperbolic affine spheres and their property checks";

  py::register_exception<io::InputError>(m, "InputError", PyExc_ValueError);

  py::class_<forms::QuadraticForm>(m, "QuadraticForm")
      .def(py::init<int, int>(), py::arg("p"), py::arg("q_plus_1"))
      .def_property_readonly("p", &forms::QuadraticForm::p)
      .def_property_readonly("q", &forms::QuadraticForm::q)
      .def_property_readonly("dim", &forms::QuadraticForm::dim)
      .def("signature", &forms::QuadraticForm::signature)
      .def("__call__", &forms::QuadraticForm::operator());
  m.def("boost", &forms::boost, py::arg("d"), py::arg("i"), py::arg("j"), py::arg("t"));
  m.def("pseudo_distance", &hpq::pseudo_distance, py::arg("o"), py::arg("x"), py::arg("Q"));
  m.def(
      "poincare_embed",
      [](const Vec& u, const Vec& v, int p, int q) { return hpq::poincare_embed(u, v, hpq::PoincareModel::standard(p, q)); },
      py::arg("u"), py::arg("v"), py::arg("p"), py::arg("q"));

  py::class_<hpq::SpacelikeGraph>(m, "SpacelikeGraph")
      .def_property_readonly("p", [](const hpq::SpacelikeGraph& M) { return M.model().p(); })
      .def_property_readonly("q", [](const hpq::SpacelikeGraph& M) { return M.model().q(); })
      .def_property_readonly("n", &hpq::SpacelikeGraph::n)
      .def_property_readonly("r0", &hpq::SpacelikeGraph::r0)
      .def_property_readonly("transform", &hpq::SpacelikeGraph::transform)
      .def("points", [](const hpq::SpacelikeGraph& M) {
        std::vector<Vec> out;
        for (int k = 0; k < M.lattice().size(); ++k)
          if (M.lattice().valid(k)) out.push_back(M.point(k));
        return out;
      })
      .def("maximality_residual", &hpq::maximality_residual)
      .def("transformed", &hpq::transformed, py::arg("g"))
      .def("to_text", [](const hpq::SpacelikeGraph& M) {
        std::ostringstream s;
        io::write_graph(s, M);
        return s.str();
      });
  m.def("totally_geodesic", [](int p, int q, int n, double r0) {
    return hpq::totally_geodesic(p, q, n, r0, Vec::Unit(q + 1, 0));
  }, py::arg("p"), py::arg("q"), py::arg("n"), py::arg("r0") = 0.9);
  m.def("boosted_totally_geodesic", &hpq::boosted_totally_geodesic, py::arg("n"), py::arg("r0"), py::arg("b"));
  m.def("graph_from_text", [](const std::string& text) {
    std::istringstream s(text);
    return io::read_graph(s);
  });
  m.def(
      "solve_maximal",
      [](const std::string& problem_path, std::optional<int> grid, std::optional<double> target) {
        auto in = io::open_input(problem_path);
        auto prob = io::build_problem(io::read_maximal_problem(in, problem_path), grid);
        if (target) prob.params.target = *target;
        const auto res = maximal::solve_maximal(prob);
        return py::make_tuple(res.graph, res.residual, res.converged);
      },
      py::arg("problem_path"), py::arg("grid") = py::none(), py::arg("target") = py::none(),
      "Solve a maximal problem file; returns (graph, residual, converged).");

  py::class_<affine::AffineHypersurface>(m, "AffineHypersurface")
      .def_property_readonly("p", &affine::AffineHypersurface::p)
      .def_property_readonly("n", &affine::AffineHypersurface::n)
      .def("sphere_deviation",
           [](const affine::AffineHypersurface& M, double margin) { return affine::is_affine_sphere(M, 1.0, margin).max_dev; },
           py::arg("margin") = 0.1);
  m.def("hyperboloid", [](int n) { return affine::hyperboloid(2, n); }, py::arg("n"));
  m.def(
      "solve_affine",
      [](const std::string& cone_path, std::optional<int> grid) {
        auto in = io::open_input(cone_path);
        const auto cf = io::read_cone(in, cone_path);
        const auto res = affine::solve_affine_sphere(cf.cone, grid.value_or(cf.grid.value_or(33)));
        return py::make_tuple(res.surface, res.residual, res.converged);
      },
      py::arg("cone_path"), py::arg("grid") = py::none());

  m.def(
      "check",
      [](const std::string& scenario_path, std::vector<std::string> checks) {
        io::Config cfg;
        std::vector<std::string> listed;
        const auto scn = io::load_scenario(scenario_path, cfg, &listed);
        if (checks.empty()) checks = listed;
        if (checks.empty()) {
          checks = {"invariance", "compactness", "avoidance", "domination"};
          if (!scn.rho_seq.empty()) checks.push_back("closedness");
        }
        std::vector<harness::PropertyReport> reports;
        for (const auto& c : checks) {
          if (c == "invariance") reports.push_back(harness::check_invariance(scn));
          else if (c == "compactness") reports.push_back(harness::check_compactness(scn));
          else if (c == "avoidance") reports.push_back(harness::check_avoidance(scn));
          else if (c == "domination") reports.push_back(harness::check_domination(scn));
          else if (c == "closedness") reports.push_back(harness::closedness_scenario(scn));
          else throw io::InputError("unknown check '" + c + "'");
        }
        return report_rows(reports);
      },
      py::arg("scenario_path"), py::arg("checks") = std::vector<std::string>{},
      "Run property checks; returns one dict per check.");
}
