#include <doctest.h>

#include <cmath>
#include <random>

#include "gsepp/dense.hpp"
#include "gsepp/epp.hpp"
#include "gsepp/localfit.hpp"
#include "gsepp/symscale.hpp"
#include "support.hpp"

using namespace gsepp;

namespace {

DiagonalState binary_like_fixed_point(int n, double p) {
  const Graph g = Graph::star(n, 0);
  const auto r = fixed_point(GateNoiseModel::binary_like(p), DiagonalState::pure(g), EppSchedule::p2_only(),
                             two_coloring(g, bit(0)), {});
  REQUIRE(r.converged);
  REQUIRE(r.distilled);
  return r.state;
}

FitOptions quick() {
  FitOptions o;
  o.restarts = 4;
  return o;
}

}  // namespace

TEST_CASE("local_model_state") {
  const Graph g = Graph::star(4, 0);
  CHECK(local_model_state(LocalNoiseModel::identity(4), g).coeffs() == DiagonalState::pure(g).coeffs());

  LocalNoiseModel m = LocalNoiseModel::identity(4);
  m.channels[2] = PauliChannel::phaseflip(0.9);
  const auto s = local_model_state(m, g);
  int nonzero = 0;
  for (double x : s.coeffs()) nonzero += x != 0.0;
  CHECK(nonzero == 2);
  CHECK(s[0] == doctest::Approx(0.9));
  CHECK(s[bit(2)] == doctest::Approx(0.1));

  const auto w = local_model_state(LocalNoiseModel::uniform(4, PauliChannel::depolarizing(0.95)), g);
  DenseOperator d = DenseOperator::from_pure(graph_state_dense(g));
  for (int q = 0; q < 4; ++q) d.apply_channel(q, PauliChannel::depolarizing(0.95));
  CHECK(testsupport::max_abs_diff(depolarize_to_diagonal(d, g).coeffs(), w.coeffs()) < 1e-12);
}

TEST_CASE("symmetry classes") {
  CHECK(symmetry_classes(Graph::star(5, 0), two_coloring(Graph::star(5, 0), bit(0))) == std::vector<int>{0, 1, 1, 1, 1});
  const Graph l5 = Graph::line(5);
  CHECK(symmetry_classes(l5, color(l5)) == std::vector<int>{0, 1, 2, 1, 0});
  const Graph f6 = ring_purification_graph();
  // Vertex-transitive, but no automorphism keeps every color class fixed.
  Coloring one = color(f6);
  for (int& c : one.colors) c = 0;
  one.k = 1;
  CHECK(symmetry_classes(f6, one) == std::vector<int>(6, 0));
  CHECK(symmetry_classes(f6, color(f6)) == trivial_classes(6));
  CHECK(symmetry_classes(Graph::ring(4), color(Graph::ring(4))) == std::vector<int>{0, 1, 0, 1});
}

TEST_CASE("realizable targets are fitted exactly") {
  std::mt19937_64 rng(21);
  const Graph g = Graph::star(4, 0);
  for (int rep = 0; rep < 3; ++rep) {
    LocalNoiseModel m;
    const auto ca = testsupport::random_channel(rng);
    const auto cb = testsupport::random_channel(rng);
    PauliChannel a = PauliChannel::from_weights({0.85 + 0.15 * ca.p[0], 0.15 * ca.p[1], 0.15 * ca.p[2], 0.15 * ca.p[3]});
    PauliChannel b = PauliChannel::from_weights({0.85 + 0.15 * cb.p[0], 0.15 * cb.p[1], 0.15 * cb.p[2], 0.15 * cb.p[3]});
    m.channels = {a, b, b, b};
    const auto target = local_model_state(m, g);
    const auto fit = fit_closest_local(target, {0, 1, 1, 1}, quick());
    CHECK(1.0 - fit.fidelity < 1e-9);
    CHECK(testsupport::max_abs_diff(local_model_state(fit.model, g).coeffs(), target.coeffs()) < 1e-8);
  }
}

TEST_CASE("binary-like GHZ fixed points") {
  SUBCASE("GHZ-3 is exactly local") {
    const auto t = binary_like_fixed_point(3, 0.9);
    const auto fit = fit_closest_local(t, quick());
    CHECK(fit.one_minus_f() <= 1e-9);
  }
  SUBCASE("GHZ-4 is not, and the grid certificate agrees") {
    const auto t = binary_like_fixed_point(4, 0.9);
    const auto fit = fit_closest_local(t, quick());
    const double grid = binary_like_grid_fidelity(t, two_coloring(t.graph(), bit(0)), 0.01);
    CHECK(fit.one_minus_f() > 1e-7);
    CHECK(fit.fidelity >= grid - 1e-12);
    CHECK(fit.fidelity - grid < 1e-3);
    CHECK(fit.relative_deviation > 0.0);
    CHECK(fit.relative_deviation < 0.05);
    // The O(N) symmetric fit reports the squared convention.
    const auto sym = fit_symmetric_local(from_diagonal(t));
    CHECK(fit.fidelity == doctest::Approx(std::sqrt(sym.fidelity)).epsilon(1e-8));
  }
}

TEST_CASE("fit is a lower bound over random local models") {
  std::mt19937_64 rng(22);
  const Graph g = Graph::line(3);
  const auto r = fixed_point(GateNoiseModel::local_depolarizing(0.95), DiagonalState::isotropic(g, 0.9),
                             EppSchedule::alternating(kP2));
  REQUIRE(r.distilled);
  const auto fit = fit_closest_local(r.state, trivial_classes(3), quick());
  for (int rep = 0; rep < 300; ++rep) {
    LocalNoiseModel m;
    for (int q = 0; q < 3; ++q) {
      auto c = testsupport::random_channel(rng);
      const double keep = 0.8 + 0.2 * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
      m.channels.push_back(PauliChannel::from_weights({keep + (1 - keep) * c.p[0], (1 - keep) * c.p[1], (1 - keep) * c.p[2], (1 - keep) * c.p[3]}));
    }
    CHECK(fidelity_diagonal(local_model_state(m, g), r.state) <= fit.fidelity + 1e-9);
  }
  // Exhaustive certificate: every channel pair on the 0.01 simplex grid with
  // at most 0.2 non-identity weight, mirror symmetry tying qubits 0 and 2.
  std::vector<PauliChannel> grid;
  for (int x = 0; x <= 20; ++x)
    for (int y = 0; x + y <= 20; ++y)
      for (int z = 0; x + y + z <= 20; ++z)
        grid.push_back(PauliChannel::from_weights({1.0 - (x + y + z) / 100.0, x / 100.0, y / 100.0, z / 100.0}));
  const auto sym = fit_closest_local(r.state, {0, 1, 0}, quick());
  double best = 0.0;
  for (const auto& ca : grid)
    for (const auto& cb : grid) {
      LocalNoiseModel m;
      m.channels = {ca, cb, ca};
      best = std::max(best, fidelity_diagonal(local_model_state(m, g), r.state));
    }
  CHECK(sym.fidelity >= best - 1e-12);
  CHECK(sym.fidelity - best < 1e-3);
  CHECK(fit.fidelity >= sym.fidelity - 1e-12);
}

TEST_CASE("relabeling within a class leaves the deviation unchanged") {
  const auto t = binary_like_fixed_point(4, 0.88);
  // Break the leaf symmetry slightly, then compare with the leaves relabeled.
  auto c = t.coeffs();
  c[bit(1)] += 1e-3;
  c[bit(3)] -= 1e-3;
  const DiagonalState a(t.graph(), c);
  std::vector<double> swapped(c.size());
  for (Index mu = 0; mu < c.size(); ++mu) {
    Index nu = mu & ~(bit(1) | bit(3));
    if (test_bit(mu, 1)) nu |= bit(3);
    if (test_bit(mu, 3)) nu |= bit(1);
    swapped[nu] = c[mu];
  }
  const DiagonalState b(t.graph(), swapped);
  const auto fa = fit_closest_local(a, {0, 1, 2, 3}, quick());
  const auto fb = fit_closest_local(b, {0, 1, 2, 3}, quick());
  CHECK(fa.one_minus_f() == doctest::Approx(fb.one_minus_f()).epsilon(1e-6));
}

TEST_CASE("deviation curves") {
  DeviationOptions o;
  o.family = GraphFamily::Ghz;
  o.n = 4;
  o.noise = GateNoiseKind::LocalDepolarizing;
  o.fit = quick();
  const auto pts = deviation_curve({1.0, 0.97, 0.98, 0.99}, o);
  REQUIRE(pts.size() == 4);
  for (const auto& p : pts) REQUIRE_MESSAGE(p.ok, p.error);
  CHECK(pts[0].one_minus_F < 1e-12);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    CHECK(pts[i].relative_deviation < 0.1);
    CHECK(pts[i].one_minus_F >= 0.0);
  }
  CHECK(pts[3].relative_deviation <= pts[2].relative_deviation + 1e-9);
  CHECK(pts[2].relative_deviation <= pts[1].relative_deviation + 1e-9);

  SUBCASE("failing points are recorded, not fatal") {
    DeviationOptions b = o;
    b.noise = GateNoiseKind::BinaryLike;
    const auto bad = deviation_curve({0.6, 0.95}, b);
    CHECK_FALSE(bad[0].ok);
    CHECK_FALSE(bad[0].error.empty());
    CHECK(bad[1].ok);
  }
}
