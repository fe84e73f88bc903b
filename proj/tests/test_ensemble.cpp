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

#include <doctest.h>

#include <random>

#include "nodal/ensemble.hpp"
#include "nodal/error.hpp"

using namespace nodal;

TEST_CASE("random connected graphs have the requested shape") {
  std::mt19937_64 rng(17);
  for (int v = 2; v <= 8; ++v) {
    int max_beta = std::min(3, (v - 1) * (v - 2) / 2);
    for (int beta = 0; beta <= max_beta; ++beta) {
      Graph g = random_connected_graph(rng, v, beta);
      CHECK(g.vertex_count() == v);
      CHECK(g.betti_number() == beta);
    }
  }
  CHECK_THROWS_AS(random_connected_graph(rng, 3, 2), InvalidInput);
}

TEST_CASE("the seed fixes the ensemble") {
  std::mt19937_64 a(123), b(123);
  for (int t = 0; t < 20; ++t) {
    Graph ga = random_connected_graph(a);
    Graph gb = random_connected_graph(b);
    REQUIRE(ga.edge_count() == gb.edge_count());
    for (int e = 0; e < ga.edge_count(); ++e) {
      CHECK(ga.edge(e).u == gb.edge(e).u);
      CHECK(ga.edge(e).v == gb.edge(e).v);
    }
    CHECK(random_generalized_operator(a, ga).base == random_generalized_operator(b, gb).base);
  }
}

TEST_CASE("operator entries stay in range") {
  std::mt19937_64 rng(8);
  Graph g = random_connected_graph(rng, 7, 3);
  DiscreteOperator op = random_generalized_operator(rng, g);
  for (double w : op.edge_weights()) {
    CHECK(w >= -2.0);
    CHECK(w <= -0.5);
  }
  for (double d : op.diagonal()) {
    CHECK(d >= 0.0);
    CHECK(d <= 5.0);
  }
}

TEST_CASE("small ensemble sweep is clean") {
  EnsembleOptions opt;
  opt.seed = 2;
  opt.size = 100;
  EnsembleSummary s = run_ensemble(opt);
  CHECK(s.records.size() == 100);
  CHECK(s.surplus_morse_failures == 0);
  CHECK(s.nodal_bound_failures == 0);
  CHECK(s.max_hessian_gap < 1e-5);
  CHECK(s.trace_failures == 0);
  CHECK(s.cyclic_tree_counts == 0);
  CHECK(s.tree_failures == 0);
  CHECK(s.forbidden_shapes == 0);
}

TEST_CASE("girth sweep") {
  GirthSweep sweep = girth_sweep(5, 40);
  CHECK(sweep.graphs == 40);
  CHECK(sweep.pass());
  CHECK(sweep.max_null_ratio < 1e-12);
  CHECK(sweep.min_signal_ratio > 1e-6);
}
