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

#include "nodal/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

#include "nodal/error.hpp"
#include "nodal/magnetic.hpp"

namespace nodal {

Graph random_connected_graph(std::mt19937_64& rng, int vertices, int betti) {
  const int max_edges = vertices * (vertices - 1) / 2;
  if (vertices < 1 || betti < 0 || vertices - 1 + betti > max_edges) {
    throw InvalidInput("no simple graph with " + std::to_string(vertices) + " vertices and beta = " +
                       std::to_string(betti));
  }
  std::vector<int> label(vertices);
  std::iota(label.begin(), label.end(), 0);
  std::shuffle(label.begin(), label.end(), rng);
  std::vector<Edge> edges;
  for (int v = 1; v < vertices; ++v) {
    int parent = std::uniform_int_distribution<int>(0, v - 1)(rng);
    edges.push_back({label[parent], label[v]});
  }
  std::vector<Edge> missing;
  for (int a = 0; a < vertices; ++a) {
    for (int b = a + 1; b < vertices; ++b) {
      bool present = std::any_of(edges.begin(), edges.end(), [&](const Edge& e) {
        return (e.u == a && e.v == b) || (e.u == b && e.v == a);
      });
      if (!present) missing.push_back({a, b});
    }
  }
  std::shuffle(missing.begin(), missing.end(), rng);
  edges.insert(edges.end(), missing.begin(), missing.begin() + betti);
  return Graph(vertices, std::move(edges));
}

Graph random_connected_graph(std::mt19937_64& rng, const RandomGraphOptions& opt) {
  int vertices = std::uniform_int_distribution<int>(opt.min_vertices, opt.max_vertices)(rng);
  int room = vertices * (vertices - 1) / 2 - (vertices - 1);
  int top = std::min(opt.max_betti, room);
  int bottom = std::min(opt.min_betti, top);
  int betti = std::uniform_int_distribution<int>(bottom, top)(rng);
  return random_connected_graph(rng, vertices, betti);
}

DiscreteOperator random_generalized_operator(std::mt19937_64& rng, const Graph& g, const OperatorRanges& r) {
  std::uniform_real_distribution<double> weight(r.weight_lo, r.weight_hi);
  std::uniform_real_distribution<double> diagonal(r.diagonal_lo, r.diagonal_hi);
  std::vector<double> w(g.edge_count()), d(g.vertex_count());
  for (double& x : w) x = weight(rng);
  for (double& x : d) x = diagonal(rng);
  return build_generalized(g, w, d);
}

EnsembleSummary run_ensemble(const EnsembleOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  EnsembleSummary summary;
  for (int trial = 0; trial < opt.size; ++trial) {
    Graph g = random_connected_graph(rng, opt.graphs);
    DiscreteOperator op = random_generalized_operator(rng, g, opt.ranges);
    DiscreteSpectrum spectrum = eigensystem(op.base);
    NodalReport report = nodal_report(op, spectrum);
    const int beta = op.betti();

    EnsembleRecord rec;
    rec.trial = trial;
    rec.vertices = g.vertex_count();
    rec.betti = beta;
    rec.all_generic = spectrum.all_generic();
    rec.all_simple = spectrum.all_simple();
    bool some_positive_morse = false;
    for (const NodalEntry& entry : report.entries) {
      if (!entry.counts) continue;
      ++rec.generic_count;
      const int n = entry.n;
      const NodalCounts& c = *entry.counts;
      if (c.phi < n - 1 || c.phi > n - 1 + beta || c.nu < n - beta || c.nu > n || c.phi > c.nu - 1 + beta) {
        rec.nodal_bounds = false;
      }
      MagneticHessian h = hessian_perturbative(op, spectrum, n);
      if (h.degenerate) ++rec.degenerate_hessians;
      if (h.morse_index != c.surplus) rec.surplus_equals_morse = false;
      if (h.morse_index > 0) some_positive_morse = true;
      if (opt.finite_differences && beta > 0) {
        MagneticHessian fd = hessian_fd(op, n);
        rec.hessian_gap = std::max(rec.hessian_gap, (fd.matrix - h.matrix).cwiseAbs().maxCoeff());
        rec.gradient = std::max(rec.gradient, flux_gradient_fd(op, n).cwiseAbs().maxCoeff());
      }
    }
    rec.not_all_diamagnetic = beta == 0 || rec.generic_count == 0 || some_positive_morse;
    if (rec.all_simple && beta > 0) {
      TraceIdentityReport t = trace_identities(op);
      rec.trace_checked = true;
      rec.trace_residual = std::max(t.sum_residual, t.weighted_residual);
    }
    if (rec.all_generic) {
      rec.tree_checked = true;
      rec.tree_count = is_tree_nodal_count(report).tree_count;
      rec.forbidden_shape = !forbidden_surplus_check(report, beta);
    }

    summary.generic_indices += rec.generic_count;
    if (!rec.surplus_equals_morse) ++summary.surplus_morse_failures;
    if (!rec.nodal_bounds) ++summary.nodal_bound_failures;
    summary.max_hessian_gap = std::max(summary.max_hessian_gap, rec.hessian_gap);
    summary.max_gradient = std::max(summary.max_gradient, rec.gradient);
    if (rec.trace_checked) {
      summary.max_trace_residual = std::max(summary.max_trace_residual, rec.trace_residual);
      if (rec.trace_residual >= 1e-6) ++summary.trace_failures;
    }
    if (beta == 0) {
      ++summary.trees;
      if (rec.tree_checked && !rec.tree_count) ++summary.tree_failures;
    } else if (rec.tree_checked) {
      ++summary.cyclic_all_generic;
      if (rec.tree_count) ++summary.cyclic_tree_counts;
    }
    if (rec.forbidden_shape) ++summary.forbidden_shapes;
    if (!rec.not_all_diamagnetic) ++summary.diamagnetic_failures;
    summary.degenerate_hessians += rec.degenerate_hessians;
    summary.records.push_back(rec);
  }
  return summary;
}

GirthSweep girth_sweep(std::uint64_t seed, int count, int max_vertices, int max_betti, double threshold) {
  std::mt19937_64 rng(seed);
  RandomGraphOptions shape;
  shape.min_vertices = 3;
  shape.max_vertices = max_vertices;
  shape.min_betti = 1;
  shape.max_betti = max_betti;
  GirthSweep sweep;
  sweep.min_signal_ratio = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < count; ++trial) {
    Graph g = random_connected_graph(rng, shape);
    DiscreteOperator op = random_generalized_operator(rng, g);
    GirthFromTraces traces = girth_from_traces(op, threshold);
    int oracle = girth_oracle(g).value_or(0);
    ++sweep.graphs;
    if (traces.girth == oracle) {
      ++sweep.agreements;
    } else {
      sweep.mismatches.push_back({trial, traces.girth, oracle});
    }
    if (traces.ambiguous) ++sweep.ambiguous;
    for (std::size_t i = 0; i < traces.ratios.size(); ++i) {
      const int k = static_cast<int>(i) + 2;
      if (k < oracle) sweep.max_null_ratio = std::max(sweep.max_null_ratio, traces.ratios[i]);
      if (k == oracle) sweep.min_signal_ratio = std::min(sweep.min_signal_ratio, traces.ratios[i]);
    }
  }
  return sweep;
}

}  // namespace nodal
