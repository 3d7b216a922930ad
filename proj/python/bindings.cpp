#include "weakbem/analytic.hpp"
#include "weakbem/error.hpp"
#include "weakbem/experiment.hpp"
#include "weakbem/formulation.hpp"
#include "weakbem/mesh.hpp"
#include "weakbem/operators.hpp"
#include "weakbem/quadrature.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <map>
#include <optional>
#include <memory>
#include <string>

namespace py = pybind11;
using namespace weakbem;

namespace {

using RowMatrix3d = Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor>;
using RowMatrix3i = Eigen::Matrix<int, Eigen::Dynamic, 3, Eigen::RowMajor>;

RowMatrix3d points_to_array(const std::vector<Point>& points) {
  RowMatrix3d out(static_cast<Eigen::Index>(points.size()), 3);
  for (std::size_t i = 0; i < points.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = points[i].transpose();
  }
  return out;
}

std::vector<Point> array_to_points(const RowMatrix3d& a) {
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(a.rows()));
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    out.emplace_back(a(i, 0), a(i, 1), a(i, 2));
  }
  return out;
}

OperatorKind parse_operator(const std::string& name) {
  for (auto kind : {OperatorKind::V, OperatorKind::K, OperatorKind::Kadj, OperatorKind::W}) {
    if (name == to_string(kind)) {
      return kind;
    }
  }
  throw ConfigError("unknown operator '" + name + "', expected V, K, Kadj or W");
}

PairTag parse_tag(const std::string& name) {
  for (auto tag : {PairTag::coincident, PairTag::edge_adjacent, PairTag::vertex_adjacent, PairTag::disjoint}) {
    if (name == to_string(tag)) {
      return tag;
    }
  }
  throw ConfigError("unknown pair class '" + name + "'");
}

QuadratureConfig make_quad(int regular_order, int singular_order) {
  QuadratureConfig q;
  q.regular_order = regular_order;
  q.singular_order = singular_order;
  return q;
}

py::dict row_to_dict(const ResultRow& r) {
  py::dict d;
  d["experiment"] = r.experiment;
  d["k"] = r.k;
  d["beta"] = Complex(r.beta_re, r.beta_im);
  d["h"] = r.h;
  d["ndofs"] = r.ndofs;
  d["iterations"] = r.iterations;
  d["converged"] = r.converged;
  d["err_u"] = r.err_u;
  d["err_lambda"] = r.err_lambda;
  d["time_s"] = r.time_s;
  d["failure"] = r.failure;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Weak-penalty Calderon boundary element method for exterior Helmholtz problems";

  // Translators run newest first, so the base class goes first.
  const auto& error = py::register_exception<Error>(m, "Error");
  py::register_exception<ConfigError>(m, "ConfigError", error.ptr());
  py::register_exception<CapacityError>(m, "CapacityError", error.ptr());
  py::register_exception<ContractError>(m, "ContractError", error.ptr());
  py::register_exception<HypothesisError>(m, "HypothesisError", error.ptr());
  py::register_exception<IoError>(m, "IoError", error.ptr());

  py::class_<Mesh, std::shared_ptr<Mesh>>(m, "Mesh")
      .def(py::init([](const RowMatrix3d& vertices, const RowMatrix3i& triangles, bool require_closed) {
             std::vector<Triangle> tris;
             for (Eigen::Index i = 0; i < triangles.rows(); ++i) {
               tris.push_back({triangles(i, 0), triangles(i, 1), triangles(i, 2)});
             }
             return std::make_shared<Mesh>(array_to_points(vertices), std::move(tris), require_closed);
           }),
           py::arg("vertices"), py::arg("triangles"), py::arg("require_closed") = true)
      .def_property_readonly("vertices", [](const Mesh& mesh) { return points_to_array(mesh.vertices()); })
      .def_property_readonly("triangles",
                             [](const Mesh& mesh) {
                               RowMatrix3i out(static_cast<Eigen::Index>(mesh.triangle_count()), 3);
                               for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
                                 for (int a = 0; a < 3; ++a) {
                                   out(static_cast<Eigen::Index>(t), a) = mesh.triangles()[t][a];
                                 }
                               }
                               return out;
                             })
      .def_property_readonly("normals", [](const Mesh& mesh) { return points_to_array(mesh.normals()); })
      .def_property_readonly("areas", [](const Mesh& mesh) { return mesh.areas(); })
      .def_property_readonly("h_max", &Mesh::h_max)
      .def_property_readonly("vertex_count", &Mesh::vertex_count)
      .def_property_readonly("triangle_count", &Mesh::triangle_count);

  m.def("build_icosphere", [](int level) { return std::make_shared<Mesh>(build_icosphere(level)); },
        py::arg("level"));
  m.def("icosphere_level_for_h", &icosphere_level_for_h, py::arg("h_target"));
  m.def("read_mesh", [](const std::filesystem::path& p) { return std::make_shared<Mesh>(read_mesh(p)); },
        py::arg("path"));
  m.def("write_mesh", [](const Mesh& mesh, const std::filesystem::path& p) { write_mesh(mesh, p); },
        py::arg("mesh"), py::arg("path"));
  m.def(
      "mesh_stats",
      [](const Mesh& mesh) {
        const MeshStats s = mesh_stats(mesh);
        py::dict d;
        d["h_max"] = s.h_max;
        d["min_area"] = s.min_area;
        d["total_area"] = s.total_area;
        d["n_vertices"] = s.n_vertices;
        d["n_triangles"] = s.n_triangles;
        return d;
      },
      py::arg("mesh"));
  m.def(
      "classify_pair",
      [](const Mesh& mesh, std::size_t i, std::size_t j) {
        if (i >= mesh.triangle_count() || j >= mesh.triangle_count()) {
          throw ContractError("triangle index out of range");
        }
        const PairClass pc = classify_pair(mesh, i, j);
        return py::make_tuple(to_string(pc.tag), pc.shared_vertices);
      },
      py::arg("mesh"), py::arg("i"), py::arg("j"));

  m.def(
      "gauss_triangle",
      [](int order) {
        const TriangleRule rule = gauss_triangle(order);
        return py::make_tuple(rule.points, rule.weights);
      },
      py::arg("order"), "Points (s, t) and weights on the reference triangle.");
  m.def(
      "singular_rule",
      [](const std::string& tag, int order) {
        const PairRule rule = singular_rule(parse_tag(tag), order);
        return py::make_tuple(rule.points, rule.weights);
      },
      py::arg("tag"), py::arg("order"));

  m.def(
      "green_kernel", [](double k, const Point& x, const Point& y) { return green_kernel(k, x, y); }, py::arg("k"),
      py::arg("x"), py::arg("y"));

  py::class_<DofSpace>(m, "DofSpace")
      .def(py::init([](const std::shared_ptr<Mesh>& mesh, const std::string& kind) {
             return DofSpace(std::shared_ptr<const Mesh>(mesh), parse_space_kind(kind));
           }),
           py::arg("mesh"), py::arg("kind"))
      .def_property_readonly("kind", [](const DofSpace& s) { return std::string(to_string(s.kind())); })
      .def_property_readonly("dof_count", &DofSpace::dof_count);

  m.def(
      "assemble_boundary_operator",
      [](const std::string& kind, const DofSpace& trial, const DofSpace& test, double k, int regular_order,
         int singular_order, int threads) {
        py::gil_scoped_release release;
        return assemble_boundary_operator(parse_operator(kind), trial, test, Wavenumber(k),
                                          make_quad(regular_order, singular_order), threads)
            .entries;
      },
      py::arg("kind"), py::arg("trial"), py::arg("test"), py::arg("k"), py::arg("regular_order") = 4,
      py::arg("singular_order") = 4, py::arg("threads") = 1,
      "Dense Galerkin matrix, rows indexed by test dofs.");
  m.def(
      "assemble_mass",
      [](const DofSpace& trial, const DofSpace& test) {
        return Eigen::MatrixXd(assemble_mass(trial, test).entries);
      },
      py::arg("trial"), py::arg("test"));

  py::class_<TraceSolution>(m, "TraceSolution")
      .def_readonly("u", &TraceSolution::u)
      .def_readonly("lam", &TraceSolution::lambda)
      .def_readonly("wavenumber", &TraceSolution::wavenumber)
      .def_readonly("beta", &TraceSolution::beta);

  py::class_<SolveReport>(m, "SolveReport")
      .def_readonly("iterations", &SolveReport::iterations)
      .def_readonly("residual_history", &SolveReport::residual_history)
      .def_readonly("converged", &SolveReport::converged)
      .def_readonly("wall_time", &SolveReport::wall_time);

  m.def(
      "solve_point_source",
      [](const std::shared_ptr<Mesh>& mesh, double k, Complex beta, const std::string& space_lambda, double tol,
         int maxiter, int regular_order, int singular_order, int threads) {
        std::optional<DirichletSolve> solved;
        ErrorMetric err;
        {
          py::gil_scoped_release release;
          const std::shared_ptr<const Mesh> shared(mesh);
          const DofSpace su(shared, SpaceKind::P1);
          const DofSpace sl(shared, parse_space_kind(space_lambda));
          const BoundaryFunction g = [k](const Point& x, const Point&) { return point_source_field(k, x); };
          const BoundaryFunction dg = [k](const Point& x, const Point& n) {
            return point_source_neumann_trace(k, x, n);
          };
          const auto system = build_dirichlet_system(su, sl, Wavenumber(k), PenaltyParameter{beta}, g,
                                                     make_quad(regular_order, singular_order), threads);
          solved = solve_dirichlet(system, tol, maxiter);
          err = relative_error(solved->solution, g, dg, system.beta);
        }
        return py::make_tuple(std::move(solved->solution), std::move(solved->report), err.rel_l2_u,
                              err.rel_l2_lambda);
      },
      py::arg("mesh"), py::arg("k"), py::arg("beta") = Complex(1.0, -1.0), py::arg("space_lambda") = "p1",
      py::arg("tol") = 1e-5, py::arg("maxiter") = 1000, py::arg("regular_order") = 4, py::arg("singular_order") = 4,
      py::arg("threads") = 1,
      "Solve with the two-point-source Dirichlet data; returns (solution, report, err_u, err_lambda).");

  m.def(
      "evaluate_representation",
      [](const TraceSolution& solution, const RowMatrix3d& points, int order) {
        const std::vector<Point> pts = array_to_points(points);
        const auto values = evaluate_representation(solution, pts, order);
        Eigen::VectorXcd out(static_cast<Eigen::Index>(values.size()));
        std::vector<bool> near(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) {
          out(static_cast<Eigen::Index>(i)) = values[i].value;
          near[i] = values[i].near_surface;
        }
        return py::make_tuple(out, near);
      },
      py::arg("solution"), py::arg("points"), py::arg("order") = 6,
      "Field values and near-surface flags.");

  m.def(
      "point_source_field", [](double k, const Point& x) { return point_source_field(k, x); }, py::arg("k"),
      py::arg("x"));
  m.def(
      "point_source_neumann_trace",
      [](double k, const Point& x, const Point& n) { return point_source_neumann_trace(k, x, n); }, py::arg("k"),
      py::arg("x"), py::arg("normal"));
  m.def(
      "sphere_symbol_oracle",
      [](const std::string& kind, int l, double k) { return sphere_symbol_oracle(parse_operator(kind), l, k); },
      py::arg("kind"), py::arg("l"), py::arg("k"));
  m.def("robin_wavenumber_oracle", &robin_wavenumber_oracle, py::arg("l"), py::arg("beta"));

  m.def(
      "run_experiment",
      [](const std::string& experiment, const std::map<std::string, std::string>& options) {
        ExperimentConfig config;
        config.kind = parse_experiment_kind(experiment);
        for (const auto& [key, value] : options) {
          apply_config_value(config, key, value);
        }
        std::vector<ResultRow> rows;
        {
          py::gil_scoped_release release;
          rows = run_experiment(config);
        }
        py::list out;
        for (const auto& r : rows) {
          out.append(row_to_dict(r));
        }
        return out;
      },
      py::arg("experiment"), py::arg("options") = std::map<std::string, std::string>{},
      "Run an experiment; options use the configuration-file keys with string values.");
}
