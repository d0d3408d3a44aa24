#include "gsepp/graph.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace gsepp {

Graph::Graph(int n) : n_(n), adj_(static_cast<std::size_t>(std::max(n, 0)), 0) {
  if (n < 1 || n > kMaxQubits) throw std::invalid_argument("Graph: vertex count must be in 1..62");
}

Graph::Graph(int n, const std::vector<std::pair<int, int>>& edges) : Graph(n) {
  for (const auto& [a, b] : edges) {
    if (has_edge(a, b)) throw std::invalid_argument("Graph: duplicate edge");
    add_edge(a, b);
  }
}

void Graph::check_vertex(int a) const {
  if (a < 0 || a >= n_) throw std::out_of_range("Graph: vertex " + std::to_string(a) + " out of range");
}

Index Graph::neighbors(int a) const {
  check_vertex(a);
  return adj_[static_cast<std::size_t>(a)];
}

std::vector<int> Graph::neighborhood(int a) const {
  std::vector<int> out;
  const Index m = neighbors(a);
  for (int b = 0; b < n_; ++b)
    if (test_bit(m, b)) out.push_back(b);
  return out;
}

bool Graph::has_edge(int a, int b) const {
  check_vertex(b);
  return test_bit(neighbors(a), b);
}

int Graph::degree(int a) const { return popcount(neighbors(a)); }

std::vector<std::pair<int, int>> Graph::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int a = 0; a < n_; ++a)
    for (int b = a + 1; b < n_; ++b)
      if (test_bit(adj_[static_cast<std::size_t>(a)], b)) out.emplace_back(a, b);
  return out;
}

std::size_t Graph::edge_count() const {
  std::size_t twice = 0;
  for (Index m : adj_) twice += static_cast<std::size_t>(popcount(m));
  return twice / 2;
}

void Graph::add_edge(int a, int b) {
  if (!has_edge(a, b)) toggle_edge(a, b);
}

void Graph::remove_edge(int a, int b) {
  if (has_edge(a, b)) toggle_edge(a, b);
}

void Graph::toggle_edge(int a, int b) {
  check_vertex(a);
  check_vertex(b);
  if (a == b) throw std::invalid_argument("Graph: self-loops are not allowed");
  adj_[static_cast<std::size_t>(a)] ^= bit(b);
  adj_[static_cast<std::size_t>(b)] ^= bit(a);
}

Graph Graph::star(int n, int center) {
  Graph g(n);
  for (int b = 0; b < n; ++b)
    if (b != center) g.add_edge(center, b);
  return g;
}

Graph Graph::ring(int n) {
  if (n < 3) throw std::invalid_argument("ring needs at least 3 vertices");
  Graph g(n);
  for (int a = 0; a < n; ++a) g.add_edge(a, (a + 1) % n);
  return g;
}

Graph Graph::line(int n) {
  Graph g(n);
  for (int a = 0; a + 1 < n; ++a) g.add_edge(a, a + 1);
  return g;
}

Graph Graph::complete(int n) {
  Graph g(n);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) g.add_edge(a, b);
  return g;
}

Graph Graph::wheel(int rim) {
  if (rim < 3) throw std::invalid_argument("wheel needs a rim of at least 3 vertices");
  Graph g(rim + 1);
  for (int k = 1; k <= rim; ++k) {
    g.add_edge(0, k);
    g.add_edge(k, k % rim + 1);
  }
  return g;
}

Graph cluster_ring_resource_graph() { return Graph::wheel(5); }

Graph ring_purification_graph() {
  return local_complement(cluster_ring_resource_graph(), kRingPurificationPivot);
}

Index Coloring::members(int c) const {
  Index m = 0;
  for (std::size_t v = 0; v < colors.size(); ++v)
    if (colors[v] == c) m |= bit(static_cast<int>(v));
  return m;
}

bool is_proper(const Graph& g, const Coloring& c) {
  if (static_cast<int>(c.colors.size()) != g.size()) return false;
  for (const auto& [a, b] : g.edges())
    if (c.colors[static_cast<std::size_t>(a)] == c.colors[static_cast<std::size_t>(b)]) return false;
  for (int col : c.colors)
    if (col < 0 || col >= c.k) return false;
  return true;
}

namespace {

// BFS two-coloring; empty result when an odd cycle exists.
std::vector<int> try_bipartite(const Graph& g) {
  const int n = g.size();
  std::vector<int> col(static_cast<std::size_t>(n), -1);
  for (int s = 0; s < n; ++s) {
    if (col[static_cast<std::size_t>(s)] >= 0) continue;
    col[static_cast<std::size_t>(s)] = 0;
    std::queue<int> q;
    q.push(s);
    while (!q.empty()) {
      const int a = q.front();
      q.pop();
      for (int b : g.neighborhood(a)) {
        auto& cb = col[static_cast<std::size_t>(b)];
        if (cb < 0) {
          cb = 1 - col[static_cast<std::size_t>(a)];
          q.push(b);
        } else if (cb == col[static_cast<std::size_t>(a)]) {
          return {};
        }
      }
    }
  }
  return col;
}

bool backtrack(const Graph& g, const std::vector<int>& order, std::size_t pos, int k, std::vector<int>& col) {
  if (pos == order.size()) return true;
  const int v = order[pos];
  for (int c = 0; c < k; ++c) {
    bool ok = true;
    for (int b : g.neighborhood(v))
      if (col[static_cast<std::size_t>(b)] == c) {
        ok = false;
        break;
      }
    if (!ok) continue;
    col[static_cast<std::size_t>(v)] = c;
    if (backtrack(g, order, pos + 1, k, col)) return true;
    col[static_cast<std::size_t>(v)] = -1;
  }
  return false;
}

}  // namespace

Coloring color(const Graph& g) {
  const int n = g.size();
  if (auto bip = try_bipartite(g); !bip.empty()) {
    return Coloring{std::move(bip), g.edge_count() == 0 ? 1 : 2};
  }
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return g.degree(a) < g.degree(b); });

  std::vector<int> col(static_cast<std::size_t>(n), -1);
  int k = 0;
  for (int v : order) {
    Index used = 0;
    for (int b : g.neighborhood(v))
      if (col[static_cast<std::size_t>(b)] >= 0) used |= bit(col[static_cast<std::size_t>(b)]);
    int c = 0;
    while (test_bit(used, c)) ++c;
    col[static_cast<std::size_t>(v)] = c;
    k = std::max(k, c + 1);
  }

  if (n <= 16) {
    for (int fewer = 3; fewer < k; ++fewer) {
      std::vector<int> trial(static_cast<std::size_t>(n), -1);
      if (backtrack(g, order, 0, fewer, trial)) {
        col = std::move(trial);
        k = fewer;
        break;
      }
    }
  }
  return Coloring{std::move(col), k};
}

Coloring two_coloring(const Graph& g, Index set_a) {
  Coloring c;
  c.k = 2;
  c.colors.resize(static_cast<std::size_t>(g.size()));
  for (int v = 0; v < g.size(); ++v) c.colors[static_cast<std::size_t>(v)] = test_bit(set_a, v) ? 0 : 1;
  if (!is_proper(g, c)) throw std::invalid_argument("two_coloring: split is not a proper 2-coloring");
  return c;
}

Graph local_complement(const Graph& g, int a) {
  Graph out = g;
  const auto nb = g.neighborhood(a);
  for (std::size_t i = 0; i < nb.size(); ++i)
    for (std::size_t j = i + 1; j < nb.size(); ++j) out.toggle_edge(nb[i], nb[j]);
  return out;
}

Index lc_transform_index(Index mu, const Graph& g, int a) {
  return test_bit(mu, a) ? mu ^ g.neighbors(a) : mu;
}

PauliString correlation_operator(const Graph& g, int a) {
  return PauliString(g.size(), bit(a), g.neighbors(a));
}

Index pauli_index_action(const PauliString& p, const Graph& g) {
  if (p.size() != g.size()) throw std::invalid_argument("pauli_index_action: size mismatch");
  Index m = p.z();
  for (int a = 0; a < g.size(); ++a)
    if (test_bit(p.x(), a)) m ^= g.neighbors(a);
  return m;
}

Index pauli_index_action(Pauli p, int q, const Graph& g) {
  return pauli_index_action(PauliString::single(g.size(), q, p), g);
}

Graph parse_edge_list(const std::string& text) {
  std::istringstream in(text);
  int n = 0;
  if (!(in >> n)) throw std::invalid_argument("edge list: missing vertex count");
  Graph g(n);
  int a = 0;
  int b = 0;
  while (in >> a) {
    if (!(in >> b)) throw std::invalid_argument("edge list: dangling vertex");
    if (a < 1 || a > n || b < 1 || b > n) throw std::invalid_argument("edge list: vertex out of range");
    if (a == b) throw std::invalid_argument("edge list: self-loop");
    if (g.has_edge(a - 1, b - 1)) throw std::invalid_argument("edge list: duplicate edge");
    g.add_edge(a - 1, b - 1);
  }
  if (!in.eof()) throw std::invalid_argument("edge list: malformed entry");
  return g;
}

std::string to_edge_list(const Graph& g) {
  std::ostringstream out;
  out << g.size() << '\n';
  for (const auto& [a, b] : g.edges()) out << a + 1 << ' ' << b + 1 << '\n';
  return out.str();
}

}  // namespace gsepp
