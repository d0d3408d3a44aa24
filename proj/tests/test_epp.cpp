#include <doctest.h>

#include <cmath>
#include <random>

#include "gsepp/dense.hpp"
#include "gsepp/epp.hpp"
#include "support.hpp"

using namespace gsepp;
using testsupport::max_abs_diff;

namespace {

// Shifts a Pauli string on n qubits to qubits offset..offset+n-1 of a register of size total.
PauliString shifted(const PauliString& p, int offset, int total) {
  return PauliString(total, p.x() << offset, p.z() << offset, p.phase());
}

// Dense simulation of one recurrence step: main on the low qubits, aux on
// the high ones; postselect every K_c (c purified) of the aux graph on +1.
StepOutput dense_step(const DiagonalState& main, const DiagonalState& aux, Index purified, const GateNoiseModel& model,
                      Index side_a) {
  const int n = main.size();
  DenseOperator rho = DenseOperator::from_diagonal(main).tensor(DenseOperator::from_diagonal(aux));
  for (int v = 0; v < n; ++v) {
    const Side side = test_bit(side_a, v) ? Side::A : Side::B;
    if (test_bit(purified, v)) rho.noisy_cnot(model, v + n, v, side);
    else rho.noisy_cnot(model, v, v + n, side);
  }
  double prob = 1.0;
  for (int c = 0; c < n; ++c)
    if (test_bit(purified, c)) prob *= rho.project_stabilizer(shifted(correlation_operator(aux.graph(), c), n, 2 * n));
  return {depolarize_to_diagonal(rho.partial_trace_keep(low_mask(n)), main.graph()), prob};
}

// Binary-like GHZ state: lambda depends only on the set-B weight.
DiagonalState binary_ghz(int n, const std::vector<double>& by_weight) {
  const Graph g = Graph::star(n);
  std::vector<double> c(std::size_t{1} << n, 0.0);
  for (Index mu = 0; mu < c.size(); ++mu)
    if (!test_bit(mu, 0)) c[mu] = by_weight[static_cast<std::size_t>(popcount(mu))];
  return {g, std::move(c)};
}

}  // namespace

TEST_CASE("perfect step leaves the pure state alone") {
  for (const Graph& g : {Graph::star(4), Graph::line(5)}) {
    const auto c = color(g);
    for (int which : {kP1, kP2}) {
      const auto out = p_step(DiagonalState::pure(g), c, GateNoiseModel::perfect(), which);
      CHECK(std::abs(out.success - 1.0) < 1e-15);
      CHECK(std::abs(out.state[0] - 1.0) < 1e-15);
    }
  }
}

TEST_CASE("P2 squares binary-like GHZ coefficients") {
  // Weight-1 patterns get 0.2/3 each so that the state is normalised.
  const auto s = binary_ghz(4, {0.8, 0.2 / 3, 0.0, 0.0});
  const auto c = color(s.graph());
  const auto out = p_step(s, c, GateNoiseModel::perfect(), kP2);
  const double k = 0.8 * 0.8 + 3 * std::pow(0.2 / 3, 2);
  CHECK(std::abs(out.success - k) < 1e-15);
  CHECK(std::abs(out.state[0] - 0.64 / k) < 1e-14);
  CHECK(std::abs(out.state[bit(1)] - std::pow(0.2 / 3, 2) / k) < 1e-14);

  // P1 instead convolves the set-B patterns and keeps the success at 1.
  const auto p1 = p_step(s, c, GateNoiseModel::perfect(), kP1);
  CHECK(std::abs(p1.success - 1.0) < 1e-14);
  CHECK(std::abs(p1.state[0] - (0.64 + 3 * std::pow(0.2 / 3, 2))) < 1e-14);
}

TEST_CASE("noisy steps on GHZ-4 match the dense two-copy oracle") {
  std::mt19937_64 rng(47);
  const Graph g = Graph::star(4);
  const auto c = color(g);
  const auto model = GateNoiseModel::local_depolarizing(0.98);
  const auto in = testsupport::random_state_with_fidelity(g, 0.85, rng);
  for (int which : {kP1, kP2}) {
    const auto fast = p_step(in, c, model, which);
    const auto dense = dense_step(in, in, c.members(which), model, c.set_a());
    CHECK(max_abs_diff(fast.state.coeffs(), dense.state.coeffs()) < 1e-12);
    CHECK(std::abs(fast.success - dense.success) < 1e-10);
  }
  // Purifying the three leaves is the step that raises the fidelity here;
  // P1 only checks the center and convolves the leaf patterns.
  CHECK(p_step(in, c, model, kP2).state[0] > in[0]);
}

TEST_CASE("step variants agree with the dense oracle") {
  std::mt19937_64 rng(53);
  const GateNoiseModel models[] = {GateNoiseModel::binary_like(0.9), GateNoiseModel::local_depolarizing(0.93),
                                   GateNoiseModel::correlated_depolarizing(0.9),
                                   GateNoiseModel::local(testsupport::random_channel(rng), testsupport::random_channel(rng),
                                                         0.0, "random")};
  for (const Graph& g : {Graph::star(3), Graph::line(4), Graph::star(4)}) {
    const auto c = color(g);
    for (const auto& m : models) {
      for (int which : {kP1, kP2}) {
        const auto in = testsupport::random_state_with_fidelity(g, 0.8, rng);
        const auto dense = dense_step(in, in, c.members(which), m, c.set_a());
        const auto joint = purification_step_joint(in, in, c.members(which), m, c.set_a());
        const auto fast = p_step(in, c, m, which);
        CHECK(max_abs_diff(joint.state.coeffs(), dense.state.coeffs()) < 1e-12);
        CHECK(max_abs_diff(fast.state.coeffs(), dense.state.coeffs()) < 1e-12);
        CHECK(std::abs(fast.success - dense.success) < 1e-10);
        CHECK(std::abs(joint.success - dense.success) < 1e-10);
      }
    }
  }
}

TEST_CASE("all-graph step on a triangle matches the dense oracle") {
  std::mt19937_64 rng(59);
  const Graph g = Graph::ring(3);
  const auto c = color(g);
  REQUIRE(c.k == 3);
  for (const auto& m : {GateNoiseModel::perfect(), GateNoiseModel::local_depolarizing(0.9),
                        GateNoiseModel::correlated_depolarizing(0.85)}) {
    for (int col = 0; col < 3; ++col) {
      const Index cls = c.members(col);
      const Graph ag = auxiliary_graph(g, cls);
      const auto main = testsupport::random_state_with_fidelity(g, 0.8, rng);
      std::vector<DiagonalState> aux;
      for (int k = 0; k < 3; ++k)
        aux.push_back(testsupport::random_state_with_fidelity(auxiliary_graph(g, c.members(k)), 0.9, rng));
      const auto fast = allgraph_step(main, c, aux, m, col);
      const auto dense = dense_step(main, aux[static_cast<std::size_t>(col)], cls, m, cls);
      CHECK(ag == aux[static_cast<std::size_t>(col)].graph());
      CHECK(max_abs_diff(fast.state.coeffs(), dense.state.coeffs()) < 1e-12);
      CHECK(std::abs(fast.success - dense.success) < 1e-10);
    }
  }
}

TEST_CASE("all-graph index rule on the six-qubit graph via state vectors") {
  // Basis-state inputs stay basis states, so 12-qubit state vectors suffice.
  const Graph g = ring_purification_graph();
  const auto c = color(g);
  std::mt19937_64 rng(61);
  std::uniform_int_distribution<Index> pick(0, 63);
  for (int col = 0; col < c.k; ++col) {
    const Index cls = c.members(col);
    const Graph ag = auxiliary_graph(g, cls);
    Graph both(12);
    for (const auto& [a, b] : g.edges()) both.add_edge(a, b);
    for (const auto& [a, b] : ag.edges()) both.add_edge(a + 6, b + 6);
    for (int trial = 0; trial < 20; ++trial) {
      const Index mu = pick(rng);
      const Index nu = pick(rng);
      StateVector psi = graph_basis_state(both, mu | (nu << 6));
      for (int v = 0; v < 6; ++v) {
        if (test_bit(cls, v)) psi.cnot(v + 6, v);
        else psi.cnot(v, v + 6);
      }
      const Index j2 = multilateral_cnot_index(mu | (nu << 6), 6, cls);
      CHECK(std::abs(std::abs(psi.inner(graph_basis_state(both, j2))) - 1.0) < 1e-10);
    }
  }
}

TEST_CASE("all-graph step edge cases") {
  const Graph g = ring_purification_graph();
  const auto c = color(g);
  std::vector<DiagonalState> pure_aux;
  std::vector<DiagonalState> mixed_aux;
  for (int k = 0; k < c.k; ++k) {
    pure_aux.push_back(DiagonalState::pure(auxiliary_graph(g, c.members(k))));
    mixed_aux.push_back(DiagonalState::maximally_mixed(auxiliary_graph(g, c.members(k))));
  }
  const auto pure = allgraph_step(DiagonalState::pure(g), c, pure_aux, GateNoiseModel::perfect(), 0);
  CHECK(std::abs(pure.success - 1.0) < 1e-15);
  CHECK(std::abs(pure.state[0] - 1.0) < 1e-15);

  std::mt19937_64 rng(67);
  const auto in = testsupport::random_state(g, rng);
  for (int col = 0; col < c.k; ++col) {
    const auto out = allgraph_step(in, c, mixed_aux, GateNoiseModel::perfect(), col);
    CHECK(std::abs(out.success - std::pow(0.5, popcount(c.members(col)))) < 1e-14);
    // A maximally mixed auxiliary state scrambles the non-purified bits.
    double fid_before = 0.0;
    double fid_after = 0.0;
    for (Index mu = 0; mu < 64; ++mu) {
      if ((mu & c.members(col)) == 0) fid_before += in[mu];
      if ((mu & c.members(col)) == 0) fid_after += out.state[mu];
    }
    CHECK(std::abs(fid_before - fid_after) < 1e-14);
  }
  CHECK_THROWS(allgraph_step(in, c, mixed_aux, GateNoiseModel::perfect(), 3));
  CHECK_THROWS(allgraph_step(in, c, {mixed_aux[0]}, GateNoiseModel::perfect(), 0));
  CHECK_THROWS(allgraph_step(in, c, {mixed_aux[1], mixed_aux[0], mixed_aux[2]}, GateNoiseModel::perfect(), 0));
}

TEST_CASE("six-qubit graph: all-graph step with purified auxiliary states raises fidelity") {
  const Graph g = ring_purification_graph();
  const auto c = color(g);
  const auto model = GateNoiseModel::local_depolarizing(0.995);
  const auto aux = auxiliary_states(g, c, model, {kP2, kP2, kP2});
  const auto in = DiagonalState::isotropic(g, 0.9);
  for (int col = 0; col < c.k; ++col) {
    const auto out = allgraph_step(in, c, aux, model, col);
    CHECK(out.state[0] > in[0]);
    const auto joint = purification_step_joint(in, aux[static_cast<std::size_t>(col)], c.members(col), model, c.members(col));
    CHECK(max_abs_diff(out.state.coeffs(), joint.state.coeffs()) < 1e-12);
  }
}

TEST_CASE("perfect-gate properties on random inputs") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 40; ++trial) {
    const Graph g = trial % 2 ? Graph::star(3 + trial % 3) : Graph::line(3 + trial % 3);
    const auto c = color(g);
    const auto in = testsupport::random_state_with_fidelity(g, 0.7, rng);
    const auto p1 = p_step(in, c, GateNoiseModel::perfect(), kP1);
    const auto p12 = p_step(p1.state, c, GateNoiseModel::perfect(), kP2);
    CHECK(p12.state[0] > in[0]);
    double a0_before = 0.0;
    double a0_after = 0.0;
    for (Index mu = 0; mu < in.dimension(); ++mu) {
      if ((mu & c.set_a()) == 0) a0_before += in[mu];
      if ((mu & c.set_a()) == 0) a0_after += p1.state[mu];
    }
    CHECK(a0_after > a0_before);
  }
}

TEST_CASE("fixed points") {
  std::mt19937_64 rng(73);
  SUBCASE("perfect gates purify completely") {
    for (const Graph& g : {Graph::star(4), Graph::line(5)}) {
      const auto r = fixed_point(GateNoiseModel::perfect(), testsupport::random_state_with_fidelity(g, 0.7, rng),
                                 EppSchedule::alternating(kP2));
      CHECK(r.converged);
      CHECK(r.distilled);
      CHECK(r.state[0] >= 1.0 - 1e-10);
    }
  }
  SUBCASE("noisy fixed point does not depend on the input") {
    const Graph g = Graph::star(4);
    const auto m = GateNoiseModel::local_depolarizing(0.97);
    const auto a = fixed_point(m, testsupport::random_state_with_fidelity(g, 0.8, rng), EppSchedule::alternating(kP1));
    const auto b = fixed_point(m, DiagonalState::isotropic(g, 0.95), EppSchedule::alternating(kP1));
    REQUIRE(a.converged);
    REQUIRE(b.converged);
    CHECK(max_abs_diff(a.state.coeffs(), b.state.coeffs()) < 1e-8);
    // One more cycle barely moves it.
    auto s = a.state;
    for (int step : EppSchedule::alternating(kP1).cycle) s = p_step(s, color(g), m, step).state;
    CHECK(max_abs_diff(s.coeffs(), a.state.coeffs()) < 1e-11);
  }
  SUBCASE("correlated noise converges too") {
    const auto r = fixed_point(GateNoiseModel::correlated_depolarizing(0.97), DiagonalState::isotropic(Graph::star(4), 0.9),
                               EppSchedule::alternating(kP2));
    CHECK(r.converged);
    CHECK(r.state[0] > 0.8);
  }
  SUBCASE("hopeless input is reported, not thrown") {
    const auto r = fixed_point(GateNoiseModel::local_depolarizing(0.5), DiagonalState::isotropic(Graph::star(4), 0.3),
                               EppSchedule::alternating(kP2));
    CHECK_FALSE(r.distilled);
  }
  SUBCASE("cluster-ring resource") {
    const auto r = purify_cluster_ring_resource(GateNoiseModel::perfect(), EppSchedule::cyclic(3, 2), 0.8);
    CHECK(r.converged);
    CHECK(r.state.graph() == cluster_ring_resource_graph());
    CHECK(r.state[0] >= 1.0 - 1e-10);
  }
}

TEST_CASE("schedules") {
  CHECK(EppSchedule::alternating(kP1).final_step() == kP1);
  CHECK(EppSchedule::alternating(kP2).final_step() == kP2);
  CHECK(EppSchedule::cyclic(3, 1).cycle == std::vector<int>{2, 0, 1});
  CHECK(EppSchedule::p2_only().cycle == std::vector<int>{kP2});
  EppSchedule bad;
  bad.cycle.clear();
  CHECK_THROWS(bad.validate());
  bad = EppSchedule{};
  bad.tolerance = 0.0;
  CHECK_THROWS(bad.validate());
  CHECK_THROWS(EppSchedule::alternating(2));
}
