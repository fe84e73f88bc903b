// Copyright 2026 The nodal-lab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Python module nodal_lab._core. Vertices and edges are 0-based here, eigen
// indices n stay 1-based as in the C++ API.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nodal/discrete.hpp"
#include "nodal/discretizer.hpp"
#include "nodal/ensemble.hpp"
#include "nodal/error.hpp"
#include "nodal/graph.hpp"
#include "nodal/io.hpp"
#include "nodal/magnetic.hpp"
#include "nodal/metric.hpp"
#include "nodal/torus.hpp"

namespace py = pybind11;
using namespace nodal;

namespace {

py::object to_python(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

std::vector<Edge> edge_list(const std::vector<std::pair<int, int>>& pairs) {
  std::vector<Edge> out;
  for (auto [u, v] : pairs) out.push_back({u, v});
  return out;
}

Rational to_rational(const py::handle& h) {
  if (py::isinstance<py::int_>(h)) return Rational(h.cast<std::int64_t>());
  if (py::isinstance<py::str>(h)) return rational_from_json(Json(h.cast<std::string>()));
  if (py::hasattr(h, "numerator") && py::hasattr(h, "denominator")) {
    return Rational(h.attr("numerator").cast<std::int64_t>(), h.attr("denominator").cast<std::int64_t>());
  }
  throw InvalidInput("expected int, str or fractions.Fraction");
}

std::vector<std::vector<Rational>> to_rational_rows(const py::sequence& rows) {
  std::vector<std::vector<Rational>> out;
  for (const py::handle& row : rows) {
    std::vector<Rational> r;
    for (const py::handle& x : row) r.push_back(to_rational(x));
    out.push_back(std::move(r));
  }
  return out;
}

py::object from_rational(const Rational& r) {
  return py::module_::import("fractions").attr("Fraction")(r.numerator(), r.denominator());
}

std::vector<VertexCondition> to_conditions(const std::vector<std::string>& names) {
  std::vector<VertexCondition> out;
  for (const std::string& s : names) {
    if (s == "neumann") {
      out.push_back(VertexCondition::neumann);
    } else if (s == "dirichlet") {
      out.push_back(VertexCondition::dirichlet);
    } else {
      throw InvalidInput("vertex condition must be \"neumann\" or \"dirichlet\"");
    }
  }
  return out;
}

py::dict counts_dict(int n, double value, Genericity status, const std::optional<NodalCounts>& c, const char* key) {
  py::dict d;
  d["n"] = n;
  d[key] = value;
  d["status"] = to_string(status);
  d["phi"] = c ? py::cast(c->phi) : py::none();
  d["nu"] = c ? py::cast(c->nu) : py::none();
  d["sigma"] = c ? py::cast(c->surplus) : py::none();
  return d;
}

py::list report_rows(const NodalReport& r) {
  py::list rows;
  for (const NodalEntry& e : r.entries) rows.append(counts_dict(e.n, e.lambda, e.status, e.counts, "lambda"));
  return rows;
}

py::list report_rows(const MetricNodalReport& r) {
  py::list rows;
  for (const MetricNodalEntry& e : r.entries) rows.append(counts_dict(e.n, e.k, e.status, e.counts, "k"));
  return rows;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "nodal counts, magnetic Hessians and secular functions on graphs";

  // translators run newest first, so the base class goes in first
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
  py::register_exception<NonGenericError>(m, "NonGenericError", PyExc_ArithmeticError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

  py::class_<Graph>(m, "Graph")
      .def(py::init([](int vertices, const std::vector<std::pair<int, int>>& edges) {
             return Graph(vertices, edge_list(edges));
           }),
           py::arg("vertex_count"), py::arg("edges"))
      .def_property_readonly("vertex_count", &Graph::vertex_count)
      .def_property_readonly("edge_count", &Graph::edge_count)
      .def_property_readonly("betti_number", &Graph::betti_number)
      .def_property_readonly("edges",
                             [](const Graph& g) {
                               std::vector<std::pair<int, int>> out;
                               for (const Edge& e : g.edges()) out.emplace_back(e.u, e.v);
                               return out;
                             })
      .def("degree", &Graph::degree)
      .def("is_tree", &Graph::is_tree)
      .def("__repr__", [](const Graph& g) {
        return "Graph(" + std::to_string(g.vertex_count()) + " vertices, " + std::to_string(g.edge_count()) +
               " edges)";
      });

  m.def("graph_from_json", [](const std::string& text) { return graph_from_json(Json::parse(text)); });
  m.def("cycle_basis", [](const Graph& g) {
    CycleBasis cb = cycle_basis(g);
    py::dict d;
    d["tree_edges"] = cb.tree_edges;
    d["chords"] = cb.chords;
    d["cycles"] = cb.cycles;
    return d;
  });
  m.def("girth_oracle", &girth_oracle);
  m.def("subdivide", [](const Graph& g, const std::vector<int>& counts) { return subdivide(g, counts).graph; });

  py::class_<DiscreteOperator>(m, "DiscreteOperator")
      .def_property_readonly("matrix", [](const DiscreteOperator& op) { return op.base; })
      .def_property_readonly("graph", [](const DiscreteOperator& op) { return op.graph; })
      .def_property_readonly("betti", &DiscreteOperator::betti);

  m.def("build_normalized", &build_normalized);
  m.def("build_generalized", [](const Graph& g, const std::vector<double>& w, const std::vector<double>& d) {
    return build_generalized(g, w, d);
  });
  m.def("operator_from_json", [](const std::string& text) { return operator_from_json(Json::parse(text)); });
  m.def("apply_flux", [](const DiscreteOperator& op, const std::vector<double>& flux) { return apply_flux(op, flux); });
  m.def("eigenvalues", [](const DiscreteOperator& op, const std::vector<double>& flux) {
    return Eigen::VectorXd(eigenvalues(apply_flux(op, flux)));
  });
  m.def("nodal_report", [](const DiscreteOperator& op) { return report_rows(nodal_report(op, eigensystem(op.base))); });
  m.def("hessian", [](const DiscreteOperator& op, int n) {
    return hessian_perturbative(op, eigensystem(op.base), n).matrix;
  });
  m.def("hessian_fd", [](const DiscreteOperator& op, int n) { return hessian_fd(op, n).matrix; });
  m.def("morse_index", [](const DiscreteOperator& op, int n) {
    return hessian_perturbative(op, eigensystem(op.base), n).morse_index;
  });
  m.def("surplus_morse", [](const DiscreteOperator& op) { return to_python(to_json(verify_surplus_equals_morse(op))); });
  m.def("trace_identities", [](const DiscreteOperator& op) {
    TraceIdentityReport t = trace_identities(op);
    py::dict d;
    d["sum_residual"] = t.sum_residual;
    d["weighted_residual"] = t.weighted_residual;
    d["pass"] = t.pass;
    return d;
  });
  m.def("girth_from_traces", [](const DiscreteOperator& op) { return girth_from_traces(op).girth; });
  m.def("transition_matrix", &transition_matrix);

  py::class_<MetricGraph>(m, "MetricGraph")
      .def(py::init([](const Graph& g, const std::vector<double>& lengths, const std::vector<std::string>& conditions) {
             return MetricGraph(g, lengths, to_conditions(conditions));
           }),
           py::arg("graph"), py::arg("lengths"), py::arg("conditions") = std::vector<std::string>{})
      .def_property_readonly("graph", &MetricGraph::graph)
      .def_property_readonly("lengths", &MetricGraph::lengths)
      .def_property_readonly("total_length", &MetricGraph::total_length)
      .def_property_readonly("betti", &MetricGraph::betti);

  m.def("metric_graph_from_json", [](const std::string& text) { return metric_graph_from_json(Json::parse(text)); });
  m.def(
      "secular_value",
      [](const MetricGraph& mg, double k, const std::vector<double>& flux) { return secular_value(mg, k, flux); },
      py::arg("mg"), py::arg("k"), py::arg("flux") = std::vector<double>{});
  m.def("k_spectrum", [](const MetricGraph& mg, double k_max) {
    std::vector<std::pair<double, int>> out;
    for (const MetricRoot& r : k_spectrum(mg, k_max)) out.emplace_back(r.k, r.multiplicity);
    return out;
  });
  m.def("metric_nodal_report", [](const MetricGraph& mg, int generic_count) {
    return report_rows(metric_nodal_report_first(mg, generic_count));
  });
  m.def("k_hessian_fd", [](const MetricGraph& mg, double k) { return k_hessian_fd(mg, k).matrix; });

  py::class_<LengthDecomposition>(m, "LengthDecomposition")
      .def_readonly("generators", &LengthDecomposition::generators)
      .def_property_readonly("coefficients",
                             [](const LengthDecomposition& d) {
                               py::list rows;
                               for (const auto& row : d.coefficients) {
                                 py::list r;
                                 for (const Rational& x : row) r.append(from_rational(x));
                                 rows.append(r);
                               }
                               return rows;
                             })
      .def("periods", &LengthDecomposition::periods)
      .def("lengths_at", [](const LengthDecomposition& d, const std::vector<double>& x) { return d.lengths_at(x); });

  m.def(
      "decompose_lengths",
      [](const std::vector<double>& lengths, const py::sequence& relations) {
        return decompose_lengths(lengths, to_rational_rows(relations));
      },
      py::arg("lengths"), py::arg("relations") = py::list());
  m.def(
      "F_on_torus",
      [](const MetricGraph& mg, const LengthDecomposition& d, const std::vector<double>& x,
         const std::vector<double>& flux) { return F_on_torus(secular_system(mg), d, x, flux); },
      py::arg("mg"), py::arg("decomposition"), py::arg("x"), py::arg("flux") = std::vector<double>{});
  m.def("torus_hessian", [](const MetricGraph& mg, const LengthDecomposition& d, double k) {
    return torus_hessian(mg, d, k).matrix;
  });
  m.def("secular_symmetry", [](const MetricGraph& mg, const LengthDecomposition& d, int points, std::uint64_t seed) {
    return to_python(to_json(secular_symmetry(mg, d, points, seed)));
  });
  m.def("surplus_statistics", [](const MetricGraph& mg, int N) {
    SurplusStatistics s = surplus_statistics(mg, N);
    py::dict d;
    d["counts"] = s.counts;
    d["k_ceiling"] = s.k_ceiling;
    d["pass"] = s.pass;
    return d;
  });

  m.def("arccos_branches", [](double mu, int p_max) {
    std::vector<double> out;
    for (const BranchValue& b : arccos_branches(mu, p_max)) out.push_back(b.k);
    return out;
  });
  m.def("enumerate_discretizations", [](const LengthDecomposition& d, int bound) {
    return enumerate_discretizations(d, bound).counts;
  });
  m.def(
      "equilateral_check", [](const Graph& g, int p_max) {
        EquilateralOptions opt;
        opt.p_max = p_max;
        return to_python(to_json(verify_equilateral_connection(g, opt)));
      },
      py::arg("graph"), py::arg("p_max") = 3);
  m.def(
      "surplus_transfer", [](const Graph& g, int p_max) { return to_python(to_json(verify_surplus_transfer(g, p_max))); },
      py::arg("graph"), py::arg("p_max") = 3);

  m.def(
      "run_ensemble",
      [](std::uint64_t seed, int size) {
        EnsembleOptions opt;
        opt.seed = seed;
        opt.size = size;
        return to_python(to_json(run_ensemble(opt)));
      },
      py::arg("seed"), py::arg("size") = 1000);
}
