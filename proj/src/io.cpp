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

#include "nodal/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>

#include "nodal/error.hpp"

namespace nodal {

namespace {

const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InvalidInput(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

std::vector<double> number_list(const Json& j, const char* what) {
  if (!j.is_array()) throw InvalidInput(std::string(what) + " must be an array");
  std::vector<double> out;
  for (const Json& x : j) {
    if (!x.is_number()) throw InvalidInput(std::string(what) + " must hold numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

int as_int(const Json& j, const char* what) {
  if (!j.is_number_integer()) throw InvalidInput(std::string(what) + " must be an integer");
  return j.get<int>();
}

}  // namespace

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInput(path + ": malformed JSON (" + e.what() + ")");
  }
}

Graph graph_from_json(const Json& j) {
  int vertices = as_int(require(j, "vertices"), "vertices");
  const Json& list = require(j, "edges");
  if (!list.is_array()) throw InvalidInput("edges must be an array");
  std::vector<Edge> edges;
  for (const Json& e : list) {
    if (!e.is_array() || e.size() != 2) throw InvalidInput("each edge must be a pair [u, v]");
    edges.push_back({as_int(e[0], "edge endpoint") - 1, as_int(e[1], "edge endpoint") - 1});
  }
  return Graph(vertices, std::move(edges));
}

Json to_json(const Graph& g) {
  Json edges = Json::array();
  for (const Edge& e : g.edges()) edges.push_back({e.u + 1, e.v + 1});
  return Json{{"vertices", g.vertex_count()}, {"edges", edges}};
}

DiscreteOperator operator_from_json(const Json& j) {
  if (!j.contains("graph")) return build_normalized(graph_from_json(j));
  Graph g = graph_from_json(j.at("graph"));
  std::string kind = j.value("kind", std::string("normalized"));
  if (kind == "normalized") return build_normalized(g);
  if (kind != "generalized") throw InvalidInput("unknown operator kind \"" + kind + "\"");
  std::vector<double> weights = number_list(require(j, "edge_weights"), "edge_weights");
  std::vector<double> diagonal = number_list(require(j, "diagonal"), "diagonal");
  return build_generalized(g, weights, diagonal);
}

MetricGraph metric_graph_from_json(const Json& j) {
  const Json& body = j.contains("graph") ? j.at("graph") : j;
  Graph g = graph_from_json(body);
  std::vector<double> lengths = number_list(require(j, "lengths"), "lengths");
  std::vector<VertexCondition> conditions;
  if (j.contains("conditions")) {
    for (const Json& c : j.at("conditions")) {
      std::string s = c.is_string() ? c.get<std::string>() : "";
      if (s == "neumann") {
        conditions.push_back(VertexCondition::neumann);
      } else if (s == "dirichlet") {
        conditions.push_back(VertexCondition::dirichlet);
      } else {
        throw InvalidInput("vertex condition must be \"neumann\" or \"dirichlet\"");
      }
    }
  }
  return MetricGraph(std::move(g), std::move(lengths), std::move(conditions));
}

Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_array() && j.size() == 2 && j[0].is_number_integer() && j[1].is_number_integer()) {
    auto den = j[1].get<std::int64_t>();
    if (den == 0) throw InvalidInput("zero denominator in coefficient");
    return Rational(j[0].get<std::int64_t>(), den);
  }
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    std::int64_t num = 0, den = 1;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto r = std::from_chars(first, last, num);
    if (r.ec == std::errc() && r.ptr != last && *r.ptr == '/') {
      r = std::from_chars(r.ptr + 1, last, den);
    }
    if (r.ec != std::errc() || r.ptr != last || den == 0) throw InvalidInput("bad rational \"" + s + "\"");
    return Rational(num, den);
  }
  throw InvalidInput("coefficient must be an integer, \"p/q\" or [num, den]");
}

LengthDecomposition decomposition_from_json(const Json& j) {
  std::vector<double> generators = number_list(require(j, "generators"), "generators");
  const Json& rows = require(j, "coefficients");
  if (!rows.is_array()) throw InvalidInput("coefficients must be an array");
  std::vector<std::vector<Rational>> coefficients;
  for (const Json& row : rows) {
    std::vector<Rational> r;
    if (generators.size() == 1 && row.is_array() && row.size() == 2 && row[0].is_number_integer()) {
      r.push_back(rational_from_json(row));
    } else if (row.is_array()) {
      for (const Json& x : row) r.push_back(rational_from_json(x));
    } else {
      r.push_back(rational_from_json(row));
    }
    if (r.size() != generators.size()) throw InvalidInput("coefficient row length differs from generator count");
    coefficients.push_back(std::move(r));
  }
  return make_decomposition(std::move(generators), std::move(coefficients));
}

LengthDecomposition decomposition_for(const Json& j, const MetricGraph& mg) {
  if (j.contains("decomposition")) {
    LengthDecomposition d = decomposition_from_json(j.at("decomposition"));
    if (d.edge_count() != mg.graph().edge_count()) throw InvalidInput("decomposition has wrong edge count");
    return d;
  }
  std::vector<std::vector<Rational>> relations;
  if (j.contains("relations")) {
    for (const Json& row : j.at("relations")) {
      std::vector<Rational> r;
      for (const Json& x : row) r.push_back(rational_from_json(x));
      relations.push_back(std::move(r));
    }
  }
  return decompose_lengths(mg.lengths(), relations);
}

std::string format_number(double x) {
  if (x == 0.0) return "0";  // folds -0
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

void write_nodal_csv(std::ostream& os, const NodalReport& report) {
  os << "n,lambda,generic,phi,nu,sigma\n";
  for (const NodalEntry& e : report.entries) {
    os << e.n << ',' << format_number(e.lambda) << ',' << to_string(e.status);
    if (e.counts) {
      os << ',' << e.counts->phi << ',' << e.counts->nu << ',' << e.counts->surplus << '\n';
    } else {
      os << ",,,\n";
    }
  }
}

void write_surplus_morse_csv(std::ostream& os, const SurplusMorseTable& table) {
  os << "n,lambda,sigma,morse,pass\n";
  for (const SurplusMorseRow& r : table.rows) {
    os << r.n << ',' << format_number(r.lambda) << ',' << r.surplus << ',' << r.morse << ','
       << (r.pass ? "true" : "false") << '\n';
  }
}

void write_metric_spectrum_csv(std::ostream& os, const MetricNodalReport& report, std::span<const int> morse) {
  os << "n,k,lambda,generic,phi,nu,sigma,morse\n";
  for (std::size_t i = 0; i < report.entries.size(); ++i) {
    const MetricNodalEntry& e = report.entries[i];
    os << e.n << ',' << format_number(e.k) << ',' << format_number(e.k * e.k) << ',' << to_string(e.status);
    if (e.counts) {
      os << ',' << e.counts->phi << ',' << e.counts->nu << ',' << e.counts->surplus;
    } else {
      os << ",,,";
    }
    os << ',';
    if (i < morse.size() && morse[i] >= 0) os << morse[i];
    os << '\n';
  }
}

void write_statistics_csv(std::ostream& os, const SurplusStatistics& stats) {
  os << "sigma,count,frequency\n";
  const int total = stats.total();
  for (std::size_t s = 0; s < stats.counts.size(); ++s) {
    double freq = total > 0 ? static_cast<double>(stats.counts[s]) / total : 0.0;
    os << s << ',' << stats.counts[s] << ',' << format_number(freq) << '\n';
  }
}

void write_surplus_series_csv(std::ostream& os, std::span<const int> n, std::span<const int> sigma) {
  os << "n,sigma\n";
  for (std::size_t i = 0; i < n.size() && i < sigma.size(); ++i) os << n[i] << ',' << sigma[i] << '\n';
}

void write_flux_sweep_csv(std::ostream& os, const DiscreteOperator& op, int points) {
  if (points < 2) throw InvalidInput("a flux sweep needs at least 2 points");
  os << "alpha,n,lambda\n";
  const int beta = op.betti();
  std::vector<double> flux(beta, 0.0);
  for (int i = 0; i < points; ++i) {
    double alpha = 2.0 * std::numbers::pi * i / (points - 1);
    if (beta > 0) flux[0] = alpha;
    Eigen::VectorXd lambda = eigenvalues(apply_flux(op, flux));
    for (int n = 0; n < lambda.size(); ++n) {
      os << format_number(alpha) << ',' << n + 1 << ',' << format_number(lambda(n)) << '\n';
    }
  }
}

void write_hessian_scatter_csv(std::ostream& os, const DiscreteOperator& op) {
  os << "n,i,j,perturbative,fd\n";
  DiscreteSpectrum spectrum = eigensystem(op.base);
  for (int n = 1; n <= op.graph.vertex_count(); ++n) {
    if (!spectrum.generic(n)) continue;
    MagneticHessian p = hessian_perturbative(op, spectrum, n);
    MagneticHessian f = hessian_fd(op, n);
    for (int i = 0; i < p.matrix.rows(); ++i) {
      for (int j = 0; j <= i; ++j) {
        os << n << ',' << i + 1 << ',' << j + 1 << ',' << format_number(p.matrix(i, j)) << ','
           << format_number(f.matrix(i, j)) << '\n';
      }
    }
  }
}

void write_ensemble_csv(std::ostream& os, const EnsembleSummary& summary) {
  os << "trial,vertices,betti,generic_count,all_generic,surplus_equals_morse,nodal_bounds,hessian_gap,"
        "trace_residual,tree_count,forbidden_shape\n";
  for (const EnsembleRecord& r : summary.records) {
    os << r.trial << ',' << r.vertices << ',' << r.betti << ',' << r.generic_count << ','
       << (r.all_generic ? "true" : "false") << ',' << (r.surplus_equals_morse ? "true" : "false") << ','
       << (r.nodal_bounds ? "true" : "false") << ',' << format_number(r.hessian_gap) << ',';
    if (r.trace_checked) os << format_number(r.trace_residual);
    os << ',';
    if (r.tree_checked) os << (r.tree_count ? "true" : "false");
    os << ',' << (r.forbidden_shape ? "true" : "false") << '\n';
  }
}

std::string skip_reason(const SkippedIndex& s) {
  // a generic index is only ever skipped for sitting at mu = 0 or mu = 2
  return s.reason == Genericity::generic ? "spectrum_edge" : to_string(s.reason);
}

Json to_json(const SkippedIndex& s) { return Json{{"n", s.n}, {"reason", skip_reason(s)}}; }

Json to_json(const SurplusMorseTable& table) {
  Json rows = Json::array();
  for (const SurplusMorseRow& r : table.rows) {
    rows.push_back({{"n", r.n},
                    {"lambda", r.lambda},
                    {"sigma", r.surplus},
                    {"morse", r.morse},
                    {"degenerate_hessian", r.degenerate_hessian},
                    {"pass", r.pass}});
  }
  Json skipped = Json::array();
  for (const SkippedIndex& s : table.skipped) skipped.push_back(to_json(s));
  return Json{{"pass", table.pass}, {"rows", rows}, {"skipped", skipped}};
}

Json to_json(const GirthFromTraces& girth) {
  Json out{{"girth_traces", girth.girth},
           {"threshold", girth.threshold},
           {"ambiguous", girth.ambiguous},
           {"ratios", girth.ratios}};
  out["scalar_girth"] = girth.scalar_girth ? Json(*girth.scalar_girth) : Json(nullptr);
  return out;
}

Json to_json(const EquilateralReport& report) {
  Json checks = Json::array();
  for (const MuCheck& c : report.checks) {
    Json branches = Json::array();
    for (const BranchCheck& b : c.branches) {
      branches.push_back({{"p", b.p}, {"k", b.k}, {"is_root", b.is_root}, {"root_distance", b.root_distance}});
    }
    checks.push_back({{"index", c.index},
                      {"mu", c.mu},
                      {"branches", branches},
                      {"lift_error", c.lift_error},
                      {"scaled_lift_error", c.scaled_lift_error},
                      {"pass", c.pass}});
  }
  Json skipped = Json::array();
  for (const SkippedIndex& s : report.skipped) skipped.push_back(to_json(s));
  return Json{{"k_ceiling", report.k_ceiling},
              {"checks", checks},
              {"skipped", skipped},
              {"branch_roots", report.branch_roots},
              {"dirichlet_check", report.dirichlet_check},
              {"multiplicity_check", report.multiplicity_check},
              {"unexplained_roots", report.unexplained_roots},
              {"trace_lift_check", report.trace_lift_check},
              {"scaled_lift_check", report.scaled_lift_check},
              {"pass", report.pass()}};
}

Json to_json(const SurplusTransferReport& report) {
  Json entries = Json::array();
  for (const TransferEntry& e : report.entries) {
    Json branches = Json::array();
    for (const TransferBranch& b : e.branches) {
      branches.push_back({{"p", b.p},
                          {"k", b.k},
                          {"n", b.n_metric},
                          {"sigma_metric", b.sigma_metric},
                          {"expected_sigma", b.expected_sigma},
                          {"morse", b.morse},
                          {"derivative_sign", b.derivative_sign},
                          {"pass", b.pass}});
    }
    entries.push_back({{"index", e.index},
                       {"mu", e.mu},
                       {"sigma_discrete", e.sigma_discrete},
                       {"morse_discrete", e.morse_discrete},
                       {"branches", branches},
                       {"pass", e.pass}});
  }
  Json skipped = Json::array();
  for (const SkippedIndex& s : report.skipped) skipped.push_back(to_json(s));
  Json out{{"betti", report.betti}, {"vacuous", report.vacuous}};
  if (report.vacuous) out["vacuous_reason"] = report.vacuous_reason;
  out["entries"] = entries;
  out["skipped"] = skipped;
  out["pass"] = report.pass;
  return out;
}

Json to_json(const RevisitReport& report) {
  Json revisits = Json::array();
  for (const Revisit& r : report.revisits) {
    revisits.push_back({{"k", r.k}, {"distance", r.distance}, {"generic", r.generic}, {"morse", r.morse_index}});
  }
  return Json{{"reference_k", report.reference_k},
              {"reference_morse", report.reference_morse},
              {"mirrored", report.mirrored},
              {"revisits", revisits},
              {"pass", report.pass}};
}

Json to_json(const EnsembleSummary& s) {
  return Json{{"operators", s.records.size()},
              {"generic_indices", s.generic_indices},
              {"surplus_morse_failures", s.surplus_morse_failures},
              {"nodal_bound_failures", s.nodal_bound_failures},
              {"max_hessian_gap", s.max_hessian_gap},
              {"max_trace_residual", s.max_trace_residual},
              {"trace_failures", s.trace_failures},
              {"trees", s.trees},
              {"tree_failures", s.tree_failures},
              {"cyclic_all_generic", s.cyclic_all_generic},
              {"cyclic_tree_counts", s.cyclic_tree_counts},
              {"forbidden_shapes", s.forbidden_shapes},
              {"diamagnetic_failures", s.diamagnetic_failures},
              {"degenerate_hessians", s.degenerate_hessians}};
}

Json to_json(const GirthSweep& sweep) {
  Json mismatches = Json::array();
  for (const GirthMismatch& m : sweep.mismatches) {
    mismatches.push_back({{"trial", m.trial}, {"traces", m.traces}, {"oracle", m.oracle}});
  }
  return Json{{"graphs", sweep.graphs},
              {"agreements", sweep.agreements},
              {"ambiguous", sweep.ambiguous},
              {"max_null_ratio", sweep.max_null_ratio},
              {"min_signal_ratio", sweep.min_signal_ratio},
              {"mismatches", mismatches},
              {"pass", sweep.pass()}};
}

Json to_json(const SymmetryReport& report) {
  return Json{{"points", report.points},
              {"symmetric_residual", report.symmetric_residual},
              {"antisymmetric_residual", report.antisymmetric_residual},
              {"tolerance", report.tolerance},
              {"pass", report.pass}};
}

}  // namespace nodal
