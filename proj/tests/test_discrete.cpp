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
#include <numeric>
#include <random>

#include <Eigen/Eigenvalues>

#include "nodal/discrete.hpp"
#include "nodal/discretizer.hpp"
#include "nodal/ensemble.hpp"
#include "nodal/error.hpp"

using namespace nodal;
using std::numbers::pi;

namespace {

Graph fig1() { return Graph(4, {{0, 1}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}); }
Graph triangle() { return Graph(3, {{0, 1}, {1, 2}, {0, 2}}); }

DiscreteOperator fig1_operator(std::vector<double> diagonal) {
  return build_generalized(fig1(), std::vector<double>(5, -1.0), diagonal);
}

int find(std::vector<int>& parent, int v) {
  while (parent[v] != v) v = parent[v] = parent[parent[v]];
  return v;
}

// Sign changes and domains straight from Eigen's eigenvectors.
std::pair<int, int> oracle_counts(const Graph& g, const Eigen::VectorXd& f) {
  std::vector<int> parent(g.vertex_count());
  std::iota(parent.begin(), parent.end(), 0);
  int phi = 0;
  for (const Edge& e : g.edges()) {
    if (f(e.u) * f(e.v) < 0.0) {
      ++phi;
    } else {
      parent[find(parent, e.u)] = find(parent, e.v);
    }
  }
  int nu = 0;
  for (int v = 0; v < g.vertex_count(); ++v) nu += find(parent, v) == v;
  return {phi, nu};
}

}  // namespace

TEST_CASE("normalized Laplacian of a triangle") {
  DiscreteOperator op = build_normalized(triangle());
  CHECK(op.base(0, 0) == doctest::Approx(1.0));
  CHECK(op.base(0, 1) == doctest::Approx(-0.5));
  DiscreteSpectrum sp = eigensystem(op.base);
  CHECK(sp.lambda(1) == doctest::Approx(0.0));
  CHECK(sp.lambda(2) == doctest::Approx(1.5));
  CHECK(sp.lambda(3) == doctest::Approx(1.5));
  CHECK(sp.status[1] == Genericity::degenerate);
}

TEST_CASE("flux on a triangle follows the closed form 1 - cos((alpha + 2 pi j) / 3)") {
  DiscreteOperator op = build_normalized(triangle());
  for (double alpha : {0.3, 1.0, pi, 4.0}) {
    std::vector<double> flux{alpha};
    Eigen::VectorXd lambda = eigenvalues(apply_flux(op, flux));
    std::vector<double> expected;
    for (int j = 0; j < 3; ++j) expected.push_back(1.0 - std::cos((alpha + 2.0 * pi * j) / 3.0));
    std::sort(expected.begin(), expected.end());
    for (int j = 0; j < 3; ++j) CHECK(lambda(j) == doctest::Approx(expected[j]).epsilon(1e-12));
  }
  // flux pi: 1/2 twice and 2
  Eigen::VectorXd at_pi = eigenvalues(apply_flux(op, std::vector<double>{pi}));
  CHECK(at_pi(0) == doctest::Approx(0.5));
  CHECK(at_pi(1) == doctest::Approx(0.5));
  CHECK(at_pi(2) == doctest::Approx(2.0));
}

TEST_CASE("spectrum depends only on the flux, not on which cycle edge carries it") {
  Graph g(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
  DiscreteOperator op = build_generalized(g, std::vector<double>{-1.0, -1.3, -0.7, -1.9}, std::vector<double>{0.5, 2.0, 1.0, 3.0});
  const double alpha = 0.83;
  Eigen::VectorXd a = eigenvalues(apply_flux(op, std::vector<double>{alpha}));
  // put the whole phase on edge {1,2} instead, oriented 1 -> 2
  Eigen::MatrixXcd m = op.base.cast<std::complex<double>>();
  m(0, 1) *= std::polar(1.0, alpha);
  m(1, 0) = std::conj(m(0, 1));
  Eigen::VectorXd b = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(m).eigenvalues();
  for (int i = 0; i < 4; ++i) CHECK(a(i) == doctest::Approx(b(i)).epsilon(1e-12));
}

TEST_CASE("generalized operators need negative off-diagonal weights") {
  CHECK_THROWS_AS(build_generalized(triangle(), std::vector<double>{-1.0, 0.0, -1.0}, std::vector<double>(3, 0.0)),
                  InvalidInput);
  CHECK_THROWS_AS(build_generalized(triangle(), std::vector<double>{-1.0, -1.0}, std::vector<double>(3, 0.0)),
                  InvalidInput);
}

TEST_CASE("transition matrix is I - D^{-1/2} L D^{1/2}") {
  Graph g(5, {{0, 1}, {1, 2}, {0, 2}, {2, 3}, {3, 4}});
  DiscreteOperator op = build_normalized(g);
  Eigen::VectorXd d(5);
  for (int v = 0; v < 5; ++v) d(v) = g.degree(v);
  Eigen::MatrixXd lifted = Eigen::MatrixXd::Identity(5, 5) -
                           d.cwiseSqrt().cwiseInverse().asDiagonal() * op.base * d.cwiseSqrt().asDiagonal();
  Eigen::MatrixXd P = transition_matrix(g);
  CHECK((P - lifted).cwiseAbs().maxCoeff() < 1e-14);
  for (int v = 0; v < 5; ++v) CHECK(P.row(v).sum() == doctest::Approx(1.0));
}

TEST_CASE("fig1 nodal counts") {
  SUBCASE("diagonal 1,2,3,4") {
    DiscreteOperator op = fig1_operator({1, 2, 3, 4});
    NodalReport r = nodal_report(op, eigensystem(op.base));
    CHECK(r.betti == 2);
    CHECK(r.all_generic());
    CHECK(r.phi_sequence() == std::vector<int>{0, 2, 3, 3});
    CHECK(r.surplus_sequence() == std::vector<int>{0, 1, 1, 0});
  }
  SUBCASE("diagonal 4,3,2,1") {
    DiscreteOperator op = fig1_operator({4, 3, 2, 1});
    NodalReport r = nodal_report(op, eigensystem(op.base));
    CHECK(r.phi_sequence() == std::vector<int>{0, 3, 3, 4});
    CHECK(r.surplus_sequence() == std::vector<int>{0, 2, 1, 1});
  }
}

TEST_CASE("nodal counts agree with a direct count on random operators") {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 80; ++t) {
    Graph g = random_connected_graph(rng);
    DiscreteOperator op = random_generalized_operator(rng, g);
    NodalReport r = nodal_report(op, eigensystem(op.base));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op.base);
    for (const NodalEntry& e : r.entries) {
      if (!e.counts) continue;
      auto [phi, nu] = oracle_counts(g, es.eigenvectors().col(e.n - 1));
      CHECK(e.counts->phi == phi);
      CHECK(e.counts->nu == nu);
      CHECK(e.counts->surplus == phi - (e.n - 1));
      // standard bounds
      CHECK(phi >= e.n - 1);
      CHECK(phi <= e.n - 1 + r.betti);
      CHECK(nu <= e.n);
      CHECK(nu >= e.n - r.betti);
    }
  }
}

TEST_CASE("trees count n - 1 sign changes") {
  Graph path(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}});
  DiscreteOperator op = build_generalized(path, std::vector<double>{-1.0, -0.6, -1.7, -1.1, -0.9},
                                          std::vector<double>{0.3, 1.9, 0.2, 2.5, 1.0, 4.0});
  NodalReport r = nodal_report(op, eigensystem(op.base));
  REQUIRE(r.all_generic());
  TreeVerdict v = is_tree_nodal_count(r);
  CHECK(v.tree_count);
  CHECK_FALSE(v.first_violation.has_value());

  DiscreteOperator cyclic = fig1_operator({1, 2, 3, 4});
  TreeVerdict w = is_tree_nodal_count(nodal_report(cyclic, eigensystem(cyclic.base)));
  CHECK_FALSE(w.tree_count);
  CHECK(w.first_violation == 2);
}

TEST_CASE("non-generic eigenpairs are flagged, never counted") {
  SUBCASE("star: repeated eigenvalue") {
    DiscreteOperator op = build_normalized(Graph(4, {{0, 1}, {0, 2}, {0, 3}}));
    DiscreteSpectrum sp = eigensystem(op.base);
    CHECK(sp.status[1] == Genericity::degenerate);
    NodalReport r = nodal_report(op, sp);
    CHECK_FALSE(r.entries[1].counts.has_value());
    CHECK(r.phi_sequence()[1] == -1);
    CHECK_THROWS_AS(is_tree_nodal_count(r), NonGenericError);
  }
  SUBCASE("path on three vertices: middle vector vanishes at the centre") {
    DiscreteOperator op = build_normalized(Graph(3, {{0, 1}, {1, 2}}));
    DiscreteSpectrum sp = eigensystem(op.base);
    CHECK(sp.lambda(2) == doctest::Approx(1.0));
    CHECK(sp.status[1] == Genericity::vertex_zero);
  }
}

TEST_CASE("component count") {
  Graph g = fig1();
  CHECK(component_count(g, std::vector<int>{}) == 1);
  CHECK(component_count(g, std::vector<int>{0, 1}) == 2);  // vertex 1 cut off
  CHECK(component_count(g, std::vector<int>{0, 1, 2, 3, 4}) == 4);
}
