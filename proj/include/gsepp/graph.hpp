#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "gsepp/pauli.hpp"

namespace gsepp {

/// Simple undirected graph on vertices 0..n-1, stored as adjacency bit masks.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int n);
  Graph(int n, const std::vector<std::pair<int, int>>& edges);

  int size() const { return n_; }
  Index neighbors(int a) const;
  std::vector<int> neighborhood(int a) const;
  bool has_edge(int a, int b) const;
  int degree(int a) const;
  std::vector<std::pair<int, int>> edges() const;
  std::size_t edge_count() const;

  void add_edge(int a, int b);
  void remove_edge(int a, int b);
  void toggle_edge(int a, int b);

  bool operator==(const Graph& other) const = default;

  static Graph empty(int n) { return Graph(n); }
  static Graph star(int n, int center = 0);
  static Graph ring(int n);
  static Graph line(int n);
  static Graph complete(int n);
  /// Hub 0 joined to every vertex of the cycle 1..rim.
  static Graph wheel(int rim);

 private:
  void check_vertex(int a) const;

  int n_ = 0;
  std::vector<Index> adj_;
};

/// Resource state of the cluster-ring code: read-in vertex 0 adjacent to the
/// closed 5-qubit cluster 1..5.
Graph cluster_ring_resource_graph();
/// Vertex of the three-colorable graph whose local complementation yields
/// cluster_ring_resource_graph().
inline constexpr int kRingPurificationPivot = 1;
/// Three-colorable 6-qubit graph LU-equivalent to the cluster-ring resource.
Graph ring_purification_graph();

/// Proper vertex coloring.
struct Coloring {
  std::vector<int> colors;
  int k = 0;

  Index members(int color) const;
  bool two_colorable() const { return k <= 2; }
  /// Set A of a two-coloring (color 0).
  Index set_a() const { return members(0); }
  Index set_b() const { return members(1); }
};

/// Two colors when bipartite, otherwise greedy (ascending degree, ties by
/// label) refined by exact search for n <= 16.
Coloring color(const Graph& g);
/// Coloring with set A = `set_a`; throws unless that split is proper.
Coloring two_coloring(const Graph& g, Index set_a);
bool is_proper(const Graph& g, const Coloring& c);

Graph local_complement(const Graph& g, int a);
Index lc_transform_index(Index mu, const Graph& g, int a);

PauliString correlation_operator(const Graph& g, int a);
/// XOR mask m with P|mu>_G proportional to |mu ^ m>_G.
Index pauli_index_action(const PauliString& p, const Graph& g);
/// Mask of a single letter on vertex q.
Index pauli_index_action(Pauli p, int q, const Graph& g);

/// Edge-list text: first line n, then "a b" per line, 1-based.
Graph parse_edge_list(const std::string& text);
std::string to_edge_list(const Graph& g);

}  // namespace gsepp
