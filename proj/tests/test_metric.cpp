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

#include <cmath>
#include <numbers>
#include <random>

#include "nodal/ensemble.hpp"
#include "nodal/error.hpp"
#include "nodal/metric.hpp"

using namespace nodal;
using std::numbers::pi;

namespace {

MetricGraph lasso() {
  return MetricGraph(Graph(4, {{0, 1}, {1, 2}, {0, 2}, {0, 3}}), {1.0, 0.5, 2.0 / 3.0, std::sqrt(2.0)});
}

double mode_value(const EdgeMode& m, double k, double x) { return m.cos_coeff * std::cos(k * x) + m.sin_coeff * std::sin(k * x); }

// Neumann star: eigenvalues are the zeros of sum_e tan(k l_e), written
// without poles as sum_e sin(k l_e) prod_{f != e} cos(k l_f).
double star_function(const std::vector<double>& l, double k) {
  double total = 0.0;
  for (std::size_t e = 0; e < l.size(); ++e) {
    double term = std::sin(k * l[e]);
    for (std::size_t f = 0; f < l.size(); ++f) {
      if (f != e) term *= std::cos(k * l[f]);
    }
    total += term;
  }
  return total;
}

std::vector<double> star_roots(const std::vector<double>& l, double k_max) {
  std::vector<double> roots;
  const double h = 1e-4;
  double a = h, fa = star_function(l, a);
  for (double b = 2 * h; b < k_max; b += h) {
    double fb = star_function(l, b);
    if ((fa < 0) != (fb < 0)) {
      double lo = a, hi = b;
      for (int i = 0; i < 100; ++i) {
        double mid = 0.5 * (lo + hi);
        if ((star_function(l, mid) < 0) == (fa < 0)) lo = mid; else hi = mid;
      }
      roots.push_back(0.5 * (lo + hi));
    }
    a = b;
    fa = fb;
  }
  return roots;
}

}  // namespace

TEST_CASE("metric graph validation") {
  Graph g(2, {{0, 1}});
  CHECK_THROWS_AS(MetricGraph(g, {0.0}), InvalidInput);
  CHECK_THROWS_AS(MetricGraph(g, {1.0, 2.0}), InvalidInput);
  CHECK(MetricGraph(g, {2.5}).total_length() == doctest::Approx(2.5));
  CHECK(equilateral(g).lengths() == std::vector<double>{1.0});
}

TEST_CASE("interval of length pi has roots at the integers") {
  MetricGraph interval(Graph(2, {{0, 1}}), {pi});
  std::vector<MetricRoot> roots = k_spectrum(interval, 20.5);
  REQUIRE(roots.size() == 20);
  for (int m = 1; m <= 20; ++m) {
    CHECK(std::abs(roots[m - 1].k - m) < 1e-9);
    CHECK(roots[m - 1].simple());
  }
  MetricNodalReport r = metric_nodal_report(interval, roots);
  for (const MetricNodalEntry& e : r.entries) {
    REQUIRE(e.counts.has_value());
    CHECK(e.counts->phi == e.n - 1);
    CHECK(e.counts->nu == e.n);
  }
}

TEST_CASE("star with incommensurate legs matches the tangent equation") {
  std::vector<double> l{1.0, std::sqrt(2.0), 0.7};
  MetricGraph star(Graph(4, {{0, 1}, {0, 2}, {0, 3}}), l);
  std::vector<MetricRoot> roots = k_spectrum(star, 15.0);
  std::vector<double> expected = star_roots(l, 15.0);
  REQUIRE(roots.size() == expected.size());
  for (std::size_t i = 0; i < roots.size(); ++i) CHECK(std::abs(roots[i].k - expected[i]) < 1e-9);
}

TEST_CASE("equal-leg star has double roots at pi/2 + m pi") {
  MetricGraph star(Graph(4, {{0, 1}, {0, 2}, {0, 3}}), {1.0, 1.0, 1.0});
  std::vector<MetricRoot> roots = k_spectrum(star, 7.0);
  // pi/2 (x2), pi, 3pi/2 (x2), 2pi
  REQUIRE(roots.size() == 4);
  CHECK(roots[0].k == doctest::Approx(pi / 2).epsilon(1e-10));
  CHECK(roots[0].multiplicity == 2);
  CHECK(roots[1].k == doctest::Approx(pi).epsilon(1e-10));
  CHECK(roots[1].multiplicity == 1);
  CHECK(roots[2].multiplicity == 2);
}

TEST_CASE("secular function vanishes at roots and the counting function agrees") {
  MetricGraph mg = lasso();
  SecularSystem sys = secular_system(mg);
  std::vector<MetricRoot> roots = k_spectrum(mg, 25.0);
  for (const MetricRoot& r : roots) CHECK(std::abs(secular_value(sys, mg.lengths(), r.k)) < 1e-8);
  for (double k : {3.3, 10.1, 24.9}) {
    int below = 0;  // counts (0, k]
    for (const MetricRoot& r : roots) below += r.k < k ? r.multiplicity : 0;
    auto count = counting_function(sys, mg.lengths(), k);
    REQUIRE(count.has_value());
    CHECK(*count == below);
  }
}

TEST_CASE("Weyl law") {
  MetricGraph mg = lasso();
  const double k = 60.0;
  int count = 1;
  for (const MetricRoot& r : k_spectrum(mg, k)) count += r.multiplicity;
  CHECK(std::abs(count - k * mg.total_length() / pi) <= 4 + 1 + 2);
}

TEST_CASE("eigenfunctions are continuous and satisfy Kirchhoff") {
  MetricGraph mg = lasso();
  const Graph& g = mg.graph();
  for (const MetricRoot& r : k_spectrum(mg, 12.0)) {
    if (!r.simple()) continue;
    MetricEigenpair p = eigenfunction(mg, r.k);
    CHECK(p.residual < 1e-8);
    std::vector<double> flow(g.vertex_count(), 0.0);
    for (int e = 0; e < g.edge_count(); ++e) {
      const double l = mg.lengths()[e];
      CHECK(std::abs(mode_value(p.edge_modes[e], r.k, 0.0) - p.vertex_values[g.edge(e).u]) < 1e-8);
      CHECK(std::abs(mode_value(p.edge_modes[e], r.k, l) - p.vertex_values[g.edge(e).v]) < 1e-8);
      // outgoing derivatives
      flow[g.edge(e).u] += r.k * p.edge_modes[e].sin_coeff;
      flow[g.edge(e).v] -= r.k * (-p.edge_modes[e].cos_coeff * std::sin(r.k * l) +
                                  p.edge_modes[e].sin_coeff * std::cos(r.k * l));
    }
    for (double f : flow) CHECK(std::abs(f) < 1e-7 * r.k);
  }
}

TEST_CASE("edge zero count matches dense sampling") {
  MetricGraph mg = lasso();
  int checked = 0;
  for (const MetricRoot& r : k_spectrum(mg, 30.0)) {
    if (!r.simple()) continue;
    MetricEigenpair p = eigenfunction(mg, r.k);
    if (!p.generic()) continue;
    for (int e = 0; e < mg.graph().edge_count(); ++e) {
      const double l = mg.lengths()[e];
      const int samples = 20000;
      int changes = 0;
      double prev = mode_value(p.edge_modes[e], r.k, 0.0);
      for (int s = 1; s <= samples; ++s) {
        double cur = mode_value(p.edge_modes[e], r.k, l * s / samples);
        if (prev * cur < 0.0) ++changes;
        prev = cur;
      }
      CHECK(count_edge_zeros(p.edge_modes[e], r.k, l) == changes);
    }
    ++checked;
  }
  CHECK(checked > 10);
}

TEST_CASE("splitting an edge at a new Neumann vertex leaves the spectrum alone") {
  MetricGraph mg = lasso();
  const double s2 = std::sqrt(2.0);
  MetricGraph split(Graph(5, {{0, 1}, {1, 2}, {0, 2}, {0, 4}, {4, 3}}), {1.0, 0.5, 2.0 / 3.0, 0.6, s2 - 0.6});
  std::vector<MetricRoot> a = k_spectrum(mg, 20.0);
  std::vector<MetricRoot> b = k_spectrum(split, 20.0);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i].k - b[i].k) < 1e-9);
}

TEST_CASE("random metric trees have tree nodal counts") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> length(0.5, 1.5);
  for (int t = 0; t < 2; ++t) {
    Graph g = random_connected_graph(rng, 5 + t, 0);
    std::vector<double> l(g.edge_count());
    for (double& x : l) x = length(rng);
    MetricNodalReport r = metric_nodal_report_first(MetricGraph(g, l), 30);
    for (const MetricNodalEntry* e : r.generic_entries()) {
      CHECK(e->counts->phi == e->n - 1);
      CHECK(e->counts->nu == e->n);
    }
  }
}

TEST_CASE("lasso: surplus matches the Morse index of the tracked k Hessian") {
  MetricGraph mg = lasso();
  MetricNodalReport r = metric_nodal_report_first(mg, 12);
  int compared = 0;
  for (const MetricNodalEntry* e : r.generic_entries()) {
    if (e->k <= 0.0) continue;
    MagneticHessian h = k_hessian_fd(mg, e->k);
    CHECK(h.morse_index == e->counts->surplus);
    ++compared;
  }
  CHECK(compared >= 10);
}

TEST_CASE("Dirichlet vertices") {
  // interval with both ends clamped: k = m pi / L, sine modes
  MetricGraph clamped(Graph(2, {{0, 1}}), {2.0}, {VertexCondition::dirichlet, VertexCondition::dirichlet});
  std::vector<MetricRoot> roots = k_spectrum(clamped, 10.0);
  REQUIRE(roots.size() == 6);
  for (int m = 1; m <= 6; ++m) CHECK(roots[m - 1].k == doctest::Approx(m * pi / 2.0).epsilon(1e-10));
}
