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

#ifndef NODAL_GRAPH_HPP
#define NODAL_GRAPH_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nodal {

/// Undirected edge between two 0-based vertices, stored with u < v.
struct Edge {
  int u = 0;
  int v = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// A directed copy of an edge. Bonds 0..E-1 run u -> v, bonds E..2E-1
/// are their reversals.
struct Bond {
  int from = 0;
  int to = 0;
  int edge = 0;
};

struct Incidence {
  int neighbor = 0;
  int edge = 0;
};

enum class GraphDefect {
  none,
  no_vertices,
  vertex_out_of_range,
  self_loop,
  duplicate_edge,
  disconnected,
};

struct ValidationResult {
  GraphDefect defect = GraphDefect::none;
  std::string message;  // names the offending vertex or edge, 1-based

  bool ok() const { return defect == GraphDefect::none; }
};

/// Checks the rules in order: vertex range, self-loops, duplicates,
/// connectivity. Edges may be given in either orientation.
ValidationResult validate(int vertex_count, std::span<const Edge> edges);

/// Simple connected undirected graph. Immutable once built.
class Graph {
 public:
  /// Throws InvalidInput with the validation message on a bad graph.
  Graph(int vertex_count, std::vector<Edge> edges);

  int vertex_count() const { return vertex_count_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  int bond_count() const { return 2 * edge_count(); }
  int betti_number() const { return edge_count() - vertex_count_ + 1; }
  bool is_tree() const { return betti_number() == 0; }

  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int e) const { return edges_[e]; }
  int degree(int v) const { return static_cast<int>(adjacency_[v].size()); }
  std::vector<int> degrees() const;

  /// Neighbours of v in ascending order.
  std::span<const Incidence> incident(int v) const { return adjacency_[v]; }
  std::optional<int> edge_between(int a, int b) const;

  Bond bond(int b) const;
  int reverse_bond(int b) const { return b < edge_count() ? b + edge_count() : b - edge_count(); }

 private:
  int vertex_count_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Incidence>> adjacency_;
};

int betti_number(const Graph& g);

struct CycleBasis {
  std::vector<int> tree_edges;  // ascending edge indices
  std::vector<int> chords;      // ascending edge indices, one per cycle
  /// Vertex sequence of each basis cycle. It starts with the chord's
  /// endpoints u, v (traversed u -> v) and returns to u through the tree.
  std::vector<std::vector<int>> cycles;
  std::vector<std::vector<int>> cycle_edges;
};

/// BFS tree from vertex 0 with ascending neighbour order.
CycleBasis cycle_basis(const Graph& g);

/// Shortest cycle length by BFS from every vertex; nullopt for trees.
std::optional<int> girth_oracle(const Graph& g);

struct VertexOrigin {
  int vertex = -1;    // original vertex, or -1 for an inserted one
  int edge = -1;      // original edge of an inserted vertex
  int position = 0;   // 1..count-1 along the edge from its u end
};

struct Subdivision {
  Graph graph;
  std::vector<VertexOrigin> lineage;  // one entry per vertex of graph
  /// For each original edge, the new edge indices from u to v.
  std::vector<std::vector<int>> edge_pieces;
};

/// Replaces edge e by a path of counts[e] edges. Original vertices keep
/// their numbers; inserted vertices follow, edge by edge.
Subdivision subdivide(const Graph& g, std::span<const int> counts);

}  // namespace nodal

#endif  // NODAL_GRAPH_HPP
