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

#ifndef NODAL_ENSEMBLE_HPP
#define NODAL_ENSEMBLE_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "nodal/discrete.hpp"
#include "nodal/graph.hpp"

namespace nodal {

struct RandomGraphOptions {
  int min_vertices = 2;
  int max_vertices = 8;
  int min_betti = 0;
  int max_betti = 3;
};

/// Random labelled spanning tree plus betti extra edges.
Graph random_connected_graph(std::mt19937_64& rng, int vertices, int betti);
Graph random_connected_graph(std::mt19937_64& rng, const RandomGraphOptions& opt = {});

struct OperatorRanges {
  double weight_lo = -2.0;
  double weight_hi = -0.5;
  double diagonal_lo = 0.0;
  double diagonal_hi = 5.0;
};

DiscreteOperator random_generalized_operator(std::mt19937_64& rng, const Graph& g, const OperatorRanges& r = {});

struct EnsembleOptions {
  std::uint64_t seed = 1;
  int size = 1000;
  RandomGraphOptions graphs;
  OperatorRanges ranges;
  bool finite_differences = true;  // cross-check every Hessian by FD
};

struct EnsembleRecord {
  int trial = 0;
  int vertices = 0;
  int betti = 0;
  int generic_count = 0;
  bool all_generic = false;
  bool all_simple = false;
  bool surplus_equals_morse = true;
  bool nodal_bounds = true;        // n-1 <= phi <= n-1+beta, n-beta <= nu <= n
  double hessian_gap = 0.0;        // max |perturbative - FD| entry
  double gradient = 0.0;           // max |first flux derivative|
  bool not_all_diamagnetic = true; // some generic Morse index > 0 when beta > 0
  int degenerate_hessians = 0;
  bool trace_checked = false;
  double trace_residual = 0.0;
  bool tree_checked = false;
  bool tree_count = false;
  bool forbidden_shape = false;
};

struct EnsembleSummary {
  std::vector<EnsembleRecord> records;
  int generic_indices = 0;
  int surplus_morse_failures = 0;
  int nodal_bound_failures = 0;
  double max_hessian_gap = 0.0;
  double max_gradient = 0.0;
  double max_trace_residual = 0.0;
  int trace_failures = 0;
  int trees = 0;
  int tree_failures = 0;            // a tree whose count is not n-1
  int cyclic_all_generic = 0;
  int cyclic_tree_counts = 0;       // a cyclic graph with tree count
  int forbidden_shapes = 0;
  int diamagnetic_failures = 0;
  int degenerate_hessians = 0;
};

EnsembleSummary run_ensemble(const EnsembleOptions& opt);

struct GirthMismatch {
  int trial = 0;
  int traces = 0;
  int oracle = 0;
};

struct GirthSweep {
  int graphs = 0;
  int agreements = 0;
  int ambiguous = 0;
  double max_null_ratio = 0.0;    // largest ratio below the girth
  double min_signal_ratio = 0.0;  // smallest ratio at the girth
  std::vector<GirthMismatch> mismatches;
  bool pass() const { return agreements == graphs; }
};

/// Random generalized operators on connected graphs with at least one cycle.
GirthSweep girth_sweep(std::uint64_t seed, int count, int max_vertices = 8, int max_betti = 3,
                       double threshold = 1e-9);

}  // namespace nodal

#endif  // NODAL_ENSEMBLE_HPP
