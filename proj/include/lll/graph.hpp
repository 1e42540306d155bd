// Graph substrate: simple undirected graphs, face boundaries for embedded
// planar inputs, and the combinatorial enumerators the applications are
// built on (even-order simple paths, facial boundary walks, stars inside a
// common neighborhood).
#pragma once

#include <utility>
#include <vector>

#include "lll/core.hpp"

namespace lll {

class SimpleGraph {
 public:
  explicit SimpleGraph(int vertex_count);

  static SimpleGraph from_edges(int vertex_count,
                                const std::vector<std::pair<int, int>>& edges);
  static SimpleGraph path_graph(int n);
  static SimpleGraph cycle_graph(int n);
  static SimpleGraph grid_graph(int rows, int cols);
  static SimpleGraph complete_graph(int n);

  void add_edge(int u, int v);

  int size() const { return static_cast<int>(adj_.size()); }
  const std::vector<int>& neighbors(int v) const { return adj_[v]; }
  bool adjacent(int u, int v) const;
  int degree(int v) const { return static_cast<int>(adj_[v].size()); }
  int max_degree() const;

  // All edges as (u, v) with u < v, sorted lexicographically; the position
  // of an edge in this list is its canonical edge id.
  std::vector<std::pair<int, int>> edges() const;

 private:
  std::vector<std::vector<int>> adj_;  // sorted neighbor lists
};

// Face boundaries of an embedded graph: one cyclic vertex sequence per
// face. Construction checks that consecutive boundary vertices (including
// the wraparound) are adjacent in the graph.
struct FaceSet {
  std::vector<std::vector<int>> faces;
};

FaceSet make_face_set(const SimpleGraph& g, std::vector<std::vector<int>> faces);

// All simple paths on exactly 2n vertices, one orientation per path
// (canonical: smaller endpoint first). Each element lists the path's
// vertices in order.
std::vector<std::vector<int>> even_paths(const SimpleGraph& g, int n);

// The subset of even_paths(g, n) whose vertex set contains `v`.
std::vector<std::vector<int>> even_paths_through(const SimpleGraph& g, int v,
                                                 int n);

// Boundary walks of exactly 2n edges along some face, with all edges
// distinct, deduplicated up to reversal. Each element is the walk's vertex
// sequence (2n+1 entries; first == last exactly when the walk is a whole
// face boundary).
std::vector<std::vector<int>> facial_paths(const SimpleGraph& g,
                                           const FaceSet& faces, int n);

// All (beta+1)-subsets sigma of some vertex's neighborhood with v inside
// sigma, deduplicated, each sorted ascending.
std::vector<std::vector<int>> stars(const SimpleGraph& g, int v, int beta);

// All (beta+1)-subsets of some vertex's neighborhood, deduplicated.
std::vector<std::vector<int>> all_stars(const SimpleGraph& g, int beta);

// Largest number of power-s events through one atom; 0 for an empty family.
int d_s_exact(const Instance& inst, int s);

}  // namespace lll
