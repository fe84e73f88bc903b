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

#include "nodal/discretizer.hpp"
#include "nodal/error.hpp"

using namespace nodal;
using std::numbers::pi;

namespace {

const double s2 = std::sqrt(2.0);

Graph lasso() { return Graph(4, {{0, 1}, {1, 2}, {0, 2}, {0, 3}}); }
Graph star() { return Graph(4, {{0, 1}, {0, 2}, {0, 3}}); }
Graph square() { return Graph(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}); }

}  // namespace

TEST_CASE("arccos branches") {
  std::vector<BranchValue> b = arccos_branches(1.5, 3);
  REQUIRE(b.size() >= 4);
  CHECK(b[0].k == doctest::Approx(2 * pi / 3));
  CHECK(b[1].k == doctest::Approx(4 * pi / 3));
  CHECK(b[2].k == doctest::Approx(8 * pi / 3));
  CHECK(b[3].k == doctest::Approx(10 * pi / 3));
  CHECK(b[0].lambda() == doctest::Approx(4 * pi * pi / 9));
  CHECK_THROWS_AS(arccos_branches(2.5, 3), InvalidInput);
}

TEST_CASE("enumerate discretizations") {
  LengthDecomposition d = decompose_lengths(std::vector<double>{s2, 2 * s2, std::sqrt(3.0)},
                                            {{Rational(2), Rational(-1), Rational(0)}});
  DiscretizationList list = enumerate_discretizations(d, 4);
  REQUIRE(list.counts.size() == 8);
  for (const std::vector<int>& c : list.counts) CHECK(c[1] == 2 * c[0]);
  CHECK(list.counts.front() == std::vector<int>{1, 2, 1});

  LengthDecomposition rational = decompose_lengths(std::vector<double>{1, 5}, {{Rational(5), Rational(-1)}});
  DiscretizationList none = enumerate_discretizations(rational, 3);
  CHECK(none.counts.empty());
  CHECK(none.minimal_bound == 5);
}

TEST_CASE("discretized version") {
  LengthDecomposition d = decompose_lengths(std::vector<double>{1, 2}, {{Rational(2), Rational(-1)}});
  DiscretizedVersion v = discretize(Graph(3, {{0, 1}, {1, 2}}), d, {1, 2});
  CHECK(v.subdivision.graph.vertex_count() == 4);
  CHECK(v.subdivision.graph.edge_count() == 3);
  CHECK(v.equilateral.total_length() == doctest::Approx(3.0));
  CHECK_THROWS_AS(discretize(Graph(3, {{0, 1}, {1, 2}}), d, {1, 3}), InvalidInput);
}

TEST_CASE("equilateral connection on star, lasso and square") {
  for (const Graph& g : {star(), lasso(), square()}) {
    EquilateralReport r = verify_equilateral_connection(g);
    CHECK(r.branch_roots);
    CHECK(r.dirichlet_check);
    CHECK(r.multiplicity_check);
    CHECK(r.trace_lift_check);
    CHECK(r.pass());
  }
  EquilateralReport r = verify_equilateral_connection(lasso());
  REQUIRE_FALSE(r.checks.empty());
  for (const MuCheck& c : r.checks) CHECK(c.lift_error < 1e-6);
}

TEST_CASE("surplus transfer on the lasso") {
  SurplusTransferReport r = verify_surplus_transfer(lasso(), 3);
  CHECK_FALSE(r.vacuous);
  CHECK(r.pass);
  for (const TransferEntry& e : r.entries) {
    REQUIRE(e.branches.size() == 4);
    for (const TransferBranch& b : e.branches) {
      int expected = b.p % 2 == 0 ? e.sigma_discrete : 1 - e.sigma_discrete;
      CHECK(b.sigma_metric == expected);
      CHECK(b.morse == expected);
    }
  }
  CHECK(verify_surplus_transfer(star(), 3).vacuous);
}

TEST_CASE("directional derivative keeps its sign along the segment") {
  MetricGraph mg(lasso(), {s2, s2, 2 * s2, 1.0});
  LengthDecomposition d = decompose_lengths(mg.lengths(), {{Rational(1), Rational(-1), Rational(0), Rational(0)},
                                                           {Rational(2), Rational(0), Rational(-1), Rational(0)}});
  DiscretizationList list = enumerate_discretizations(d, 3);
  REQUIRE_FALSE(list.counts.empty());
  DirectionalReport r = directional_derivative_sign_check(mg, d, list.counts.front(), k_spectrum(mg, 8.0));
  CHECK(r.pass);
  CHECK_FALSE(r.checks.empty());
}
