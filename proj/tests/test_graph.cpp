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

#include <algorithm>
#include <random>
#include <set>

#include "nodal/ensemble.hpp"
#include "nodal/error.hpp"
#include "nodal/graph.hpp"

using namespace nodal;

namespace {

Graph fig1() { return Graph(4, {{0, 1}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}); }

Graph cycle(int n) {
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i) e.push_back({i, (i + 1) % n});
  return Graph(n, e);
}

// Edge subsets (as bit masks) in which every vertex has even degree. These
// form the cycle space; its smallest nonempty member is a shortest cycle.
std::vector<unsigned> even_subgraphs(const Graph& g) {
  std::vector<unsigned> out;
  const int E = g.edge_count();
  for (unsigned mask = 0; mask < (1u << E); ++mask) {
    std::vector<int> deg(g.vertex_count(), 0);
    for (int e = 0; e < E; ++e) {
      if (mask >> e & 1u) {
        ++deg[g.edge(e).u];
        ++deg[g.edge(e).v];
      }
    }
    if (std::all_of(deg.begin(), deg.end(), [](int d) { return d % 2 == 0; })) out.push_back(mask);
  }
  return out;
}

ValidationResult check(int vertices, std::vector<Edge> edges) { return validate(vertices, edges); }

int brute_girth(const Graph& g) {
  int best = 0;
  for (unsigned m : even_subgraphs(g)) {
    int size = __builtin_popcount(m);
    if (size > 0 && (best == 0 || size < best)) best = size;
  }
  return best;
}

}  // namespace

TEST_CASE("validate reports the first broken rule") {
  CHECK(check(3, {{0, 1}, {1, 2}}).ok());
  auto loop = check(3, {{0, 1}, {0, 0}, {1, 2}});
  CHECK(loop.defect == GraphDefect::self_loop);
  CHECK(loop.message.find("vertex 1") != std::string::npos);
  CHECK(check(4, {{0, 1}, {2, 3}}).defect == GraphDefect::disconnected);
  CHECK(check(3, {{0, 1}, {1, 0}, {1, 2}}).defect == GraphDefect::duplicate_edge);
  CHECK(check(2, {{0, 5}}).defect == GraphDefect::vertex_out_of_range);
  CHECK_THROWS_AS(Graph(3, {{0, 0}, {1, 2}}), InvalidInput);
}

TEST_CASE("betti number") {
  CHECK(Graph(3, {{0, 1}, {1, 2}}).betti_number() == 0);
  CHECK(fig1().betti_number() == 2);
  CHECK(cycle(4).betti_number() == 1);
  CHECK(Graph(3, {{0, 1}, {1, 2}}).is_tree());
}

TEST_CASE("edges are canonical and bonds pair up") {
  Graph g(3, {{2, 1}, {0, 1}});
  CHECK(g.edge(0).u == 1);
  CHECK(g.edge(0).v == 2);
  CHECK(g.bond_count() == 4);
  for (int b = 0; b < g.bond_count(); ++b) {
    int r = g.reverse_bond(b);
    CHECK(r != b);
    CHECK(g.reverse_bond(r) == b);
    CHECK(g.bond(r).from == g.bond(b).to);
  }
  CHECK(g.bond(0).from == 1);
  CHECK(g.bond(0).to == 2);
}

TEST_CASE("cycle basis") {
  SUBCASE("tree has no chords") {
    CHECK(cycle_basis(Graph(4, {{0, 1}, {0, 2}, {0, 3}})).chords.empty());
  }
  SUBCASE("triangle") {
    CycleBasis cb = cycle_basis(cycle(3));
    REQUIRE(cb.chords.size() == 1);
    CHECK(cb.cycles[0].size() == 3);
  }
  SUBCASE("each cycle holds one chord and the basis spans the cycle space") {
    for (const Graph& g : {fig1(), cycle(5), Graph(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}})}) {
      CycleBasis cb = cycle_basis(g);
      REQUIRE(static_cast<int>(cb.chords.size()) == g.betti_number());
      CHECK(std::is_sorted(cb.chords.begin(), cb.chords.end()));
      std::vector<unsigned> masks;
      for (std::size_t i = 0; i < cb.cycles.size(); ++i) {
        unsigned m = 0;
        int chords_on_cycle = 0;
        for (int e : cb.cycle_edges[i]) {
          m ^= 1u << e;
          if (std::find(cb.chords.begin(), cb.chords.end(), e) != cb.chords.end()) ++chords_on_cycle;
        }
        CHECK(chords_on_cycle == 1);
        masks.push_back(m);
      }
      std::set<unsigned> span;
      for (unsigned pick = 0; pick < (1u << masks.size()); ++pick) {
        unsigned m = 0;
        for (std::size_t i = 0; i < masks.size(); ++i) {
          if (pick >> i & 1u) m ^= masks[i];
        }
        span.insert(m);
      }
      std::vector<unsigned> even = even_subgraphs(g);
      CHECK(span == std::set<unsigned>(even.begin(), even.end()));
    }
  }
  SUBCASE("fig1 has two chords and the result is reproducible") {
    CycleBasis a = cycle_basis(fig1());
    CycleBasis b = cycle_basis(fig1());
    CHECK(a.chords.size() == 2);
    CHECK(a.chords == b.chords);
    CHECK(a.cycles == b.cycles);
    CHECK(a.tree_edges == b.tree_edges);
  }
}

TEST_CASE("girth oracle") {
  CHECK(girth_oracle(cycle(5)) == 5);
  CHECK(girth_oracle(fig1()) == 3);
  CHECK_FALSE(girth_oracle(Graph(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}})).has_value());
}

TEST_CASE("girth oracle against exhaustive search on random graphs") {
  std::mt19937_64 rng(4242);
  RandomGraphOptions opt;
  opt.min_vertices = 3;
  opt.max_vertices = 7;
  opt.max_betti = 4;
  for (int t = 0; t < 60; ++t) {
    Graph g = random_connected_graph(rng, opt);
    if (g.edge_count() > 16) continue;
    auto oracle = girth_oracle(g);
    CHECK((g.betti_number() == 0) == !oracle.has_value());
    CHECK(oracle.value_or(0) == brute_girth(g));
  }
}

TEST_CASE("subdivision") {
  SUBCASE("unit counts keep the graph") {
    Subdivision s = subdivide(fig1(), std::vector<int>(5, 1));
    CHECK(s.graph.vertex_count() == 4);
    CHECK(s.graph.edge_count() == 5);
    for (int v = 0; v < 4; ++v) CHECK(s.lineage[v].vertex == v);
  }
  SUBCASE("one edge in three pieces is a path on four vertices") {
    Subdivision s = subdivide(Graph(2, {{0, 1}}), std::vector<int>{3});
    CHECK(s.graph.vertex_count() == 4);
    CHECK(s.graph.edge_count() == 3);
    CHECK(s.graph.is_tree());
    CHECK(s.lineage[2].edge == 0);
    CHECK(s.lineage[3].position == 2);
  }
  SUBCASE("triangle doubled is a hexagon") {
    Subdivision s = subdivide(cycle(3), std::vector<int>{2, 2, 2});
    CHECK(s.graph.vertex_count() == 6);
    CHECK(s.graph.edge_count() == 6);
    for (int v = 0; v < 6; ++v) CHECK(s.graph.degree(v) == 2);
    CHECK(girth_oracle(s.graph) == 6);
  }
  SUBCASE("betti number survives any counts") {
    Subdivision s = subdivide(fig1(), std::vector<int>{1, 4, 2, 3, 1});
    CHECK(s.graph.betti_number() == 2);
  }
  CHECK_THROWS_AS(subdivide(cycle(3), std::vector<int>{1, 0, 1}), InvalidInput);
}
