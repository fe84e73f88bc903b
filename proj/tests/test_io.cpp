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

#include <sstream>

#include "nodal/error.hpp"
#include "nodal/io.hpp"

using namespace nodal;

TEST_CASE("graph JSON round trip with 1-based vertices") {
  Json j = Json::parse(R"({"vertices": 3, "edges": [[1, 2], [3, 2]]})");
  Graph g = graph_from_json(j);
  CHECK(g.edge(1).u == 1);
  CHECK(g.edge(1).v == 2);
  CHECK(to_json(g).dump() == R"({"vertices":3,"edges":[[1,2],[2,3]]})");
  CHECK_THROWS_AS(graph_from_json(Json::parse(R"({"vertices": 3})")), InvalidInput);
  CHECK_THROWS_AS(graph_from_json(Json::parse(R"({"vertices": 3, "edges": [[1, 2, 3]]})")), InvalidInput);
  CHECK_THROWS_AS(graph_from_json(Json::parse(R"({"vertices": 4, "edges": [[1, 2], [3, 4]]})")), InvalidInput);
}

TEST_CASE("operator JSON") {
  Json j = Json::parse(R"({"graph": {"vertices": 2, "edges": [[1, 2]]}, "kind": "generalized",
                           "edge_weights": [-1.5], "diagonal": [0.5, 2]})");
  DiscreteOperator op = operator_from_json(j);
  CHECK(op.base(0, 1) == -1.5);
  CHECK(op.base(1, 1) == 2.0);
  DiscreteOperator bare = operator_from_json(Json::parse(R"({"vertices": 2, "edges": [[1, 2]]})"));
  CHECK(bare.kind == OperatorKind::normalized);
  CHECK_THROWS_AS(operator_from_json(Json::parse(R"({"graph": {"vertices": 2, "edges": [[1, 2]]}, "kind": "x"})")),
                  InvalidInput);
}

TEST_CASE("metric graph and decomposition JSON") {
  Json j = Json::parse(R"({"vertices": 3, "edges": [[1, 2], [2, 3]], "lengths": [1.5, 3.0],
                           "conditions": ["dirichlet", "neumann", "neumann"],
                           "relations": [["2", -1]]})");
  MetricGraph mg = metric_graph_from_json(j);
  CHECK(mg.conditions()[0] == VertexCondition::dirichlet);
  LengthDecomposition d = decomposition_for(j, mg);
  CHECK(d.generator_count() == 1);

  Json explicit_form = Json::parse(R"({"generators": [1.0, 1.7], "coefficients": [[[1, 2], 0], ["0", "3/2"]]})");
  LengthDecomposition e = decomposition_from_json(explicit_form);
  CHECK(e.coefficients[0][0] == Rational(1, 2));
  CHECK(e.coefficients[1][1] == Rational(3, 2));

  Json single = Json::parse(R"({"generators": [0.5], "coefficients": [[1, 2], [3, 1]]})");
  LengthDecomposition s = decomposition_from_json(single);
  CHECK(s.coefficients[0][0] == Rational(1, 2));
  CHECK(s.coefficients[1][0] == Rational(3));

  CHECK_THROWS_AS(rational_from_json(Json("1/0")), InvalidInput);
  CHECK_THROWS_AS(rational_from_json(Json("x")), InvalidInput);
}

TEST_CASE("number formatting is exact and stable") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(1.0 / 3.0) == "0.3333333333333333");
  CHECK(std::stod(format_number(std::sqrt(2.0))) == std::sqrt(2.0));
}

TEST_CASE("CSV headers") {
  DiscreteOperator op = build_normalized(Graph(3, {{0, 1}, {1, 2}, {0, 2}}));
  std::ostringstream sweep;
  write_flux_sweep_csv(sweep, op, 101);
  std::string text = sweep.str();
  CHECK(text.rfind("alpha,n,lambda\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 101 * 3);

  std::ostringstream nodal;
  write_nodal_csv(nodal, nodal_report(op, eigensystem(op.base)));
  CHECK(nodal.str().rfind("n,lambda,generic,phi,nu,sigma\n", 0) == 0);
  CHECK(nodal.str().find("degenerate,,,") != std::string::npos);
}

TEST_CASE("missing files are input errors") {
  CHECK_THROWS_AS(read_json_file("/nonexistent/graph.json"), InvalidInput);
}
