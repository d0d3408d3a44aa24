#include <doctest.h>

#include <cmath>
#include <random>

#include "gsepp/dense.hpp"
#include "gsepp/graph.hpp"
#include "support.hpp"

using namespace gsepp;

namespace {

// |<a|b>| == 1 within tolerance, i.e. equal up to a global phase.
bool equal_up_to_phase(const StateVector& a, const StateVector& b, double tol = 1e-10) {
  return std::abs(std::abs(a.inner(b)) - 1.0) < tol;
}

}  // namespace

TEST_CASE("neighborhood") {
  const Graph star = Graph::star(4);
  CHECK(star.neighborhood(0) == std::vector<int>{1, 2, 3});
  CHECK(Graph::empty(3).neighborhood(1).empty());
  CHECK(Graph::ring(5).neighborhood(0) == std::vector<int>{1, 4});
  CHECK_THROWS(star.neighborhood(4));
  CHECK_THROWS(star.neighborhood(-1));
}

TEST_CASE("graph construction rejects bad input") {
  CHECK_THROWS(Graph(0));
  CHECK_THROWS(Graph(3, {{0, 0}}));
  CHECK_THROWS(Graph(3, {{0, 1}, {1, 0}}));
  CHECK_THROWS(Graph(3, {{0, 3}}));
}

TEST_CASE("coloring") {
  SUBCASE("star is two-colorable with the center alone in set A") {
    const auto c = color(Graph::star(4));
    CHECK(c.k == 2);
    CHECK(c.set_a() == bit(0));
    CHECK(c.set_b() == (bit(1) | bit(2) | bit(3)));
  }
  SUBCASE("odd ring needs three colors") {
    const auto c = color(Graph::ring(5));
    CHECK(c.k == 3);
    CHECK(is_proper(Graph::ring(5), c));
  }
  SUBCASE("six-qubit ring purification graph is three-colorable") {
    const Graph g = ring_purification_graph();
    const auto c = color(g);
    CHECK(c.k == 3);
    CHECK(is_proper(g, c));
    for (int col = 0; col < 3; ++col) CHECK(popcount(c.members(col)) == 2);
  }
  SUBCASE("random graphs always get proper colorings") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
      const int n = 2 + trial % 11;
      const Graph g = testsupport::random_graph(n, 0.45, rng);
      const auto c = color(g);
      CHECK(is_proper(g, c));
      if (c.k == 2) CHECK_NOTHROW(two_coloring(g, c.set_a()));
    }
  }
  CHECK_THROWS(two_coloring(Graph::ring(5), bit(0) | bit(2)));
}

TEST_CASE("local complementation") {
  CHECK(local_complement(Graph::star(5), 0) == Graph::complete(5));
  CHECK(local_complement(ring_purification_graph(), kRingPurificationPivot) == cluster_ring_resource_graph());

  const Graph fig = ring_purification_graph();
  for (int v = 0; v < 6; ++v) CHECK(fig.degree(v) == 3);

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Graph g = testsupport::random_graph(7, 0.5, rng);
    for (int a = 0; a < 7; ++a) CHECK(local_complement(local_complement(g, a), a) == g);
  }
}

TEST_CASE("lc_transform_index") {
  const Graph star = Graph::star(4);
  CHECK(lc_transform_index(0b0110, star, 0) == 0b0110);
  CHECK(lc_transform_index(0b0001, star, 0) == 0b1111);

  std::mt19937_64 rng(3);
  const Graph g = testsupport::random_graph(6, 0.5, rng);
  std::vector<int> seen(64, 0);
  for (Index mu = 0; mu < 64; ++mu) {
    const Index m2 = lc_transform_index(mu, g, 2);
    ++seen[m2];
    CHECK(lc_transform_index(m2, g, 2) == mu);
  }
  for (int s : seen) CHECK(s == 1);
}

TEST_CASE("local complementation is realised by local Cliffords on dense states") {
  // U = sqrt(-i X_a) prod_{b in N_a} sqrt(i Z_b) maps |mu>_G to |mu'>_{tau_a(G)}.
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 3 + trial % 6;
    const Graph g = testsupport::random_graph(n, 0.5, rng);
    const int a = trial % n;
    const Graph t = local_complement(g, a);
    for (Index mu = 0; mu < (Index{1} << n); mu += (n > 6 ? 7 : 1)) {
      StateVector psi = graph_basis_state(g, mu);
      psi.apply(Clifford::SqrtX, {a});
      for (int b : g.neighborhood(a)) psi.apply(Clifford::SqrtZ, {b});
      CHECK(equal_up_to_phase(psi, graph_basis_state(t, lc_transform_index(mu, g, a))));
    }
  }
}

TEST_CASE("correlation operators stabilize the graph state") {
  const Graph star = Graph::star(4);
  CHECK(correlation_operator(star, 0).letters() == "XZZZ");
  CHECK(correlation_operator(Graph::empty(3), 1).letters() == "IXI");
  CHECK(correlation_operator(Graph::ring(5), 2).letters() == "IZXZI");

  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const Graph g = testsupport::random_graph(6, 0.5, rng);
    const StateVector psi = graph_state_dense(g);
    for (int a = 0; a < 6; ++a) {
      StateVector k = psi;
      k.apply(correlation_operator(g, a));
      CHECK(std::abs(k.inner(psi) - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("graph_state_dense small cases") {
  const auto one = graph_state_dense(Graph(1));
  CHECK(std::abs(one[0] - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(one[1] - 1.0 / std::sqrt(2.0)) < 1e-15);
  const auto two = graph_state_dense(Graph(2, {{0, 1}}));
  CHECK(std::abs(two[0] - 0.5) < 1e-15);
  CHECK(std::abs(two[1] - 0.5) < 1e-15);
  CHECK(std::abs(two[2] - 0.5) < 1e-15);
  CHECK(std::abs(two[3] + 0.5) < 1e-15);
}

TEST_CASE("pauli_index_action matches the dense basis") {
  CHECK(pauli_index_action(Pauli::Z, 2, Graph::ring(5)) == bit(2));
  CHECK(pauli_index_action(Pauli::X, 0, Graph::star(4)) == (bit(1) | bit(2) | bit(3)));
  CHECK(pauli_index_action(Pauli::Y, 0, Graph::ring(5)) == (bit(0) | bit(1) | bit(4)));

  std::mt19937_64 rng(13);
  std::uniform_int_distribution<Index> pick(0, 63);
  for (int trial = 0; trial < 40; ++trial) {
    const Graph g = testsupport::random_graph(6, 0.5, rng);
    const PauliString p(6, pick(rng), pick(rng));
    const Index mu = pick(rng);
    StateVector psi = graph_basis_state(g, mu);
    psi.apply(p);
    CHECK(equal_up_to_phase(psi, graph_basis_state(g, mu ^ pauli_index_action(p, g))));
  }
}

TEST_CASE("pauli_index_action is a homomorphism") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<Index> pick(0, 127);
  const Graph g = testsupport::random_graph(7, 0.4, rng);
  for (int trial = 0; trial < 100; ++trial) {
    const PauliString p(7, pick(rng), pick(rng));
    const PauliString q(7, pick(rng), pick(rng));
    CHECK(pauli_index_action(p * q, g) == (pauli_index_action(p, g) ^ pauli_index_action(q, g)));
    for (int a = 0; a < 7; ++a) CHECK(pauli_index_action(correlation_operator(g, a), g) == 0);
  }
}

TEST_CASE("Pauli string algebra agrees with matrices") {
  std::mt19937_64 rng(19);
  std::uniform_int_distribution<Index> pick(0, 7);
  std::uniform_int_distribution<int> ph(0, 3);
  for (int trial = 0; trial < 60; ++trial) {
    const PauliString p(3, pick(rng), pick(rng), ph(rng));
    const PauliString q(3, pick(rng), pick(rng), ph(rng));
    StateVector v1 = StateVector::plus(3);
    v1.apply(Clifford::SqrtX, {0}).apply(Clifford::SqrtZ, {1}).cz(0, 2);
    StateVector v2 = v1;
    v1.apply(q).apply(p);
    v2.apply(p * q);
    CHECK((v1.amplitudes() - v2.amplitudes()).norm() < 1e-12);
    CHECK(p.commutes_with(q) == ((p * q) == (q * p)));
  }
  CHECK(PauliString::parse("-iXYZ").str() == "-iXYZ");
  CHECK(PauliString::parse("XY").weight() == 2);
  CHECK_THROWS(PauliString::parse("XQ"));
}

TEST_CASE("edge list round trip") {
  const Graph g = ring_purification_graph();
  CHECK(parse_edge_list(to_edge_list(g)) == g);
  CHECK(parse_edge_list("3\n1 2\n2 3\n") == Graph::line(3));
  CHECK_THROWS(parse_edge_list("3\n1 4\n"));
  CHECK_THROWS(parse_edge_list("3\n1 1\n"));
  CHECK_THROWS(parse_edge_list("3\n1 2\n2 1\n"));
  CHECK_THROWS(parse_edge_list("3\n1\n"));
  CHECK_THROWS(parse_edge_list(""));
}
