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

#include "nodal/graph.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <set>
#include <utility>

#include "nodal/error.hpp"

namespace nodal {

namespace {

std::string edge_name(const Edge& e) {
  return "{" + std::to_string(e.u + 1) + "," + std::to_string(e.v + 1) + "}";
}

Edge canonical(Edge e) {
  if (e.u > e.v) std::swap(e.u, e.v);
  return e;
}

}  // namespace

ValidationResult validate(int vertex_count, std::span<const Edge> edges) {
  if (vertex_count < 1) {
    return {GraphDefect::no_vertices, "graph has no vertices"};
  }
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const Edge& e = edges[i];
    for (int x : {e.u, e.v}) {
      if (x < 0 || x >= vertex_count) {
        return {GraphDefect::vertex_out_of_range,
                "edge " + std::to_string(i + 1) + " uses vertex " + std::to_string(x + 1) +
                    " outside 1.." + std::to_string(vertex_count)};
      }
    }
  }
  for (const Edge& e : edges) {
    if (e.u == e.v) {
      return {GraphDefect::self_loop, "self-loop at vertex " + std::to_string(e.u + 1)};
    }
  }
  std::set<std::pair<int, int>> seen;
  for (const Edge& raw : edges) {
    Edge e = canonical(raw);
    if (!seen.emplace(e.u, e.v).second) {
      return {GraphDefect::duplicate_edge, "duplicate edge " + edge_name(e)};
    }
  }
  // union-find for connectivity
  std::vector<int> parent(vertex_count);
  for (int v = 0; v < vertex_count; ++v) parent[v] = v;
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const Edge& e : edges) parent[find(e.u)] = find(e.v);
  for (int v = 1; v < vertex_count; ++v) {
    if (find(v) != find(0)) {
      return {GraphDefect::disconnected,
              "graph is disconnected: vertex " + std::to_string(v + 1) + " is unreachable from vertex 1"};
    }
  }
  return {};
}

Graph::Graph(int vertex_count, std::vector<Edge> edges) : vertex_count_(vertex_count) {
  ValidationResult check = validate(vertex_count, edges);
  if (!check.ok()) throw InvalidInput(check.message);
  edges_.reserve(edges.size());
  for (const Edge& e : edges) edges_.push_back(canonical(e));
  adjacency_.assign(vertex_count_, {});
  for (int i = 0; i < edge_count(); ++i) {
    adjacency_[edges_[i].u].push_back({edges_[i].v, i});
    adjacency_[edges_[i].v].push_back({edges_[i].u, i});
  }
  for (auto& list : adjacency_) {
    std::sort(list.begin(), list.end(),
              [](const Incidence& a, const Incidence& b) { return a.neighbor < b.neighbor; });
  }
}

std::vector<int> Graph::degrees() const {
  std::vector<int> d(vertex_count_);
  for (int v = 0; v < vertex_count_; ++v) d[v] = degree(v);
  return d;
}

std::optional<int> Graph::edge_between(int a, int b) const {
  for (const Incidence& inc : adjacency_[a]) {
    if (inc.neighbor == b) return inc.edge;
  }
  return std::nullopt;
}

Bond Graph::bond(int b) const {
  const int E = edge_count();
  if (b < E) return {edges_[b].u, edges_[b].v, b};
  return {edges_[b - E].v, edges_[b - E].u, b - E};
}

int betti_number(const Graph& g) { return g.betti_number(); }

CycleBasis cycle_basis(const Graph& g) {
  const int V = g.vertex_count();
  std::vector<int> parent(V, -1), parent_edge(V, -1), depth(V, -1);
  std::vector<char> in_tree(g.edge_count(), 0);
  std::queue<int> queue;
  depth[0] = 0;
  queue.push(0);
  while (!queue.empty()) {
    int x = queue.front();
    queue.pop();
    for (const Incidence& inc : g.incident(x)) {
      if (depth[inc.neighbor] >= 0) continue;
      depth[inc.neighbor] = depth[x] + 1;
      parent[inc.neighbor] = x;
      parent_edge[inc.neighbor] = inc.edge;
      in_tree[inc.edge] = 1;
      queue.push(inc.neighbor);
    }
  }

  CycleBasis basis;
  for (int e = 0; e < g.edge_count(); ++e) {
    (in_tree[e] ? basis.tree_edges : basis.chords).push_back(e);
  }
  for (int chord : basis.chords) {
    const Edge& ch = g.edge(chord);
    // tree paths from both ends up to their lowest common ancestor
    std::vector<int> from_v{ch.v}, from_u{ch.u};
    std::vector<int> edges_v, edges_u;
    int a = ch.v, b = ch.u;
    while (a != b) {
      if (depth[a] >= depth[b]) {
        edges_v.push_back(parent_edge[a]);
        a = parent[a];
        from_v.push_back(a);
      } else {
        edges_u.push_back(parent_edge[b]);
        b = parent[b];
        from_u.push_back(b);
      }
    }
    // cycle: u, v, ..., lca, ..., back towards u (u itself not repeated)
    std::vector<int> cycle{ch.u};
    cycle.insert(cycle.end(), from_v.begin(), from_v.end());
    for (int i = static_cast<int>(from_u.size()) - 2; i >= 1; --i) cycle.push_back(from_u[i]);
    if (cycle.back() == ch.u) cycle.pop_back();  // u was the common ancestor
    std::vector<int> cycle_edge_list{chord};
    cycle_edge_list.insert(cycle_edge_list.end(), edges_v.begin(), edges_v.end());
    cycle_edge_list.insert(cycle_edge_list.end(), edges_u.rbegin(), edges_u.rend());
    basis.cycles.push_back(std::move(cycle));
    basis.cycle_edges.push_back(std::move(cycle_edge_list));
  }
  return basis;
}

std::optional<int> girth_oracle(const Graph& g) {
  if (g.is_tree()) return std::nullopt;
  const int V = g.vertex_count();
  int best = std::numeric_limits<int>::max();
  std::vector<int> dist(V), via(V);
  for (int root = 0; root < V; ++root) {
    std::fill(dist.begin(), dist.end(), -1);
    std::fill(via.begin(), via.end(), -1);
    std::queue<int> queue;
    dist[root] = 0;
    queue.push(root);
    while (!queue.empty()) {
      int x = queue.front();
      queue.pop();
      for (const Incidence& inc : g.incident(x)) {
        if (dist[inc.neighbor] < 0) {
          dist[inc.neighbor] = dist[x] + 1;
          via[inc.neighbor] = inc.edge;
          queue.push(inc.neighbor);
        } else if (inc.edge != via[x]) {
          best = std::min(best, dist[x] + dist[inc.neighbor] + 1);
        }
      }
    }
  }
  return best;
}

Subdivision subdivide(const Graph& g, std::span<const int> counts) {
  if (static_cast<int>(counts.size()) != g.edge_count()) {
    throw InvalidInput("subdivide: expected " + std::to_string(g.edge_count()) + " counts, got " +
                       std::to_string(counts.size()));
  }
  std::vector<VertexOrigin> lineage;
  for (int v = 0; v < g.vertex_count(); ++v) lineage.push_back({v, -1, 0});
  std::vector<Edge> edges;
  std::vector<std::vector<int>> pieces(g.edge_count());
  for (int e = 0; e < g.edge_count(); ++e) {
    if (counts[e] < 1) {
      throw InvalidInput("subdivide: count for edge " + edge_name(g.edge(e)) + " must be positive, got " +
                         std::to_string(counts[e]));
    }
    int previous = g.edge(e).u;
    for (int position = 1; position < counts[e]; ++position) {
      int fresh = static_cast<int>(lineage.size());
      lineage.push_back({-1, e, position});
      pieces[e].push_back(static_cast<int>(edges.size()));
      edges.push_back({previous, fresh});
      previous = fresh;
    }
    pieces[e].push_back(static_cast<int>(edges.size()));
    edges.push_back({previous, g.edge(e).v});
  }
  int vertex_total = static_cast<int>(lineage.size());
  return {Graph(vertex_total, std::move(edges)), std::move(lineage), std::move(pieces)};
}

}  // namespace nodal
