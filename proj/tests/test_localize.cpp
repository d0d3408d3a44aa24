#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "gsepp/dense.hpp"
#include "gsepp/epp.hpp"
#include "gsepp/localize.hpp"
#include "gsepp/symscale.hpp"
#include "support.hpp"

using namespace gsepp;

namespace {

GhzStandardForm random_standard_form(int n, double f, std::mt19937_64& rng) {
  return twirl_to_standard_form(testsupport::random_state_with_fidelity(Graph::star(n, 0), f, rng));
}

// Q at independent parameters a (centre) and b (leaves), straight from the
// mixing rule.
double free_weight(const GhzStandardForm& sf, double a, double b) {
  const int nb = sf.n - 1;
  double q = 1.0;
  for (std::size_t k = 0; k < sf.patterns(); ++k) {
    const double l = sf.combined(k);
    if (l <= 0.0) continue;
    const int w = popcount(k);
    const double t = a * std::pow(b, nb - w) * std::pow(1 - b, w) + (1 - a) * std::pow(b, w) * std::pow(1 - b, nb - w);
    q = std::min(q, t / l);
  }
  return q;
}

DiagonalState depolarizing_fixed_point(int n, double p) {
  DeviationOptions o;
  o.family = GraphFamily::Ghz;
  o.n = n;
  o.noise = GateNoiseKind::LocalDepolarizing;
  const auto r = family_fixed_point(o, p);
  REQUIRE(r.distilled);
  return r.state;
}

}  // namespace

TEST_CASE("standard form") {
  const auto pure = twirl_to_standard_form(DiagonalState::pure(Graph::star(4, 0)));
  CHECK(pure.lambda0_plus == 1.0);
  CHECK(pure.lambda0_minus == 0.0);
  CHECK(std::accumulate(pure.lambda.begin(), pure.lambda.end(), 0.0) == 0.0);

  std::mt19937_64 rng(31);
  const auto sf = random_standard_form(5, 0.7, rng);
  CHECK_NOTHROW(sf.validate());
  const auto again = twirl_to_standard_form(sf.to_state());
  CHECK(again.lambda0_plus == sf.lambda0_plus);
  CHECK(again.lambda0_minus == sf.lambda0_minus);
  CHECK(testsupport::max_abs_diff(again.lambda, sf.lambda) == 0.0);

  CHECK_THROWS(twirl_to_standard_form(DiagonalState::pure(Graph::line(4))));
  CHECK_THROWS(twirl_to_standard_form(DiagonalState::pure(Graph::star(4, 2))));
}

TEST_CASE("twirl matches the random local Clifford mixture") {
  std::mt19937_64 rng(32);
  const int n = 4;
  const Graph g = Graph::star(n, 0);
  const auto s = testsupport::random_state(g, rng);
  const DenseOperator rho = DenseOperator::from_diagonal(s);
  const double h = 1.0 / std::sqrt(2.0);
  const cplx i(0.0, 1.0);
  Mat2 sqrt_mix;  // sqrt(-i X)
  sqrt_mix << h, -i * h, -i * h, h;
  Mat2 sqrt_phase;  // sqrt(i Z)
  sqrt_phase << h * (1.0 + i), 0.0, 0.0, h * (1.0 - i);
  CHECK(((sqrt_mix * sqrt_mix) - (-i) * pauli_mat(Pauli::X)).norm() < 1e-14);
  CHECK(((sqrt_phase * sqrt_phase) - i * pauli_mat(Pauli::Z)).norm() < 1e-14);

  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(1 << n, 1 << n);
  const int branches = 1 << (n - 1);
  for (int mask = 0; mask < branches; ++mask) {
    DenseOperator d = rho;
    for (int a = 1; a < n; ++a)
      if (mask >> (a - 1) & 1) d.apply(a, sqrt_mix).apply(0, sqrt_phase);
    sum += d.matrix() / branches;
  }
  const DenseOperator twirled(n, sum);
  const auto expected = DenseOperator::from_diagonal(twirl_to_standard_form(s).to_state());
  CHECK((twirled.matrix() - expected.matrix()).norm() < 1e-12);
}

TEST_CASE("local target weights") {
  for (int n : {2, 3, 6}) {
    const auto t = local_target_weights(n, 0.93);
    double total = 0.0;
    for (int w = 0; w < n; ++w) total += binomial(n - 1, w) * t[static_cast<std::size_t>(w)];
    CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
  }
  // Against the channels themselves.
  const int n = 4;
  const double p = 0.9;
  LocalNoiseModel m = LocalNoiseModel::uniform(n, PauliChannel::from_weights({p, 0.0, 0.5 * (1 - p), 0.5 * (1 - p)}));
  m.channels[0] = PauliChannel::from_weights({p, 0.5 * (1 - p), 0.5 * (1 - p), 0.0});
  const auto s = local_model_state(m, Graph::star(n, 0));
  const auto sf = twirl_to_standard_form(s);
  const auto t = local_target_weights(n, p);
  for (std::size_t k = 0; k < sf.patterns(); ++k) CHECK(sf.combined(k) == doctest::Approx(t[static_cast<std::size_t>(popcount(k))]).epsilon(1e-13));
  // The twirl changes nothing on this family.
  CHECK(testsupport::max_abs_diff(sf.to_state().coeffs(), s.coeffs()) < 1e-15);
}

TEST_CASE("already local input needs no mixing") {
  for (double p : {0.8, 0.95, 0.995}) {
    const int n = 5;
    LocalNoiseModel m = LocalNoiseModel::uniform(n, PauliChannel::from_weights({p, 0.0, 0.5 * (1 - p), 0.5 * (1 - p)}));
    m.channels[0] = PauliChannel::from_weights({p * 0.97, 0.5 * (1 - p), 0.5 * (1 - p), p * 0.03});
    const auto sf = twirl_to_standard_form(local_model_state(m, Graph::star(n, 0)));
    const auto out = localize_noise(sf);
    CHECK(out.report.feasible);
    CHECK(out.report.Q == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(out.report.p == doctest::Approx(p).epsilon(1e-6));
    CHECK(out.report.relative_reduction < 1e-9);
    CHECK(out.report.centre_z == doctest::Approx(0.03).epsilon(1e-5));
  }
}

TEST_CASE("localized states are exactly local") {
  std::mt19937_64 rng(33);
  for (int rep = 0; rep < 12; ++rep) {
    const int n = 3 + rep % 3;
    const double f = rep < 6 ? 0.9 : 0.6;
    const auto sf = random_standard_form(n, f, rng);
    const auto out = localize_noise(sf);
    const auto& r = out.report;
    REQUIRE(r.feasible);
    CHECK(r.Q > 0.0);
    CHECK(r.Q <= 1.0);
    double total = 0.0;
    for (double q : r.q) {
      CHECK(q >= 0.0);
      total += q;
    }
    CHECK(total == doctest::Approx(1.0 - r.Q).epsilon(1e-12));
    CHECK(r.fidelity_after <= r.fidelity_before + 1e-15);
    CHECK_NOTHROW(out.state.validate());
    // The reported channels reproduce the output coefficient by coefficient.
    CHECK(testsupport::max_abs_diff(local_model_state(r.model, out.state.graph()).coeffs(), out.state.coeffs()) < 1e-13);
    // Feasibility of the mixing rule: with the chosen Q, every q_k from the
    // formula is nonnegative before clipping.
    const auto t = local_target_weights(n, r.p);
    for (std::size_t k = 0; k < sf.patterns(); ++k) CHECK(t[static_cast<std::size_t>(popcount(k))] - r.Q * sf.combined(k) >= -1e-12);
  }
}

TEST_CASE("Q maximization matches a brute-force grid") {
  // Uniform lambda_k over k != 0, GHZ-5.
  const int n = 5;
  GhzStandardForm sf;
  sf.n = n;
  sf.lambda.assign(std::size_t{1} << (n - 1), 0.0);
  sf.lambda0_plus = 0.8;
  sf.lambda0_minus = 0.05;
  for (std::size_t k = 1; k < sf.patterns(); ++k) sf.lambda[k] = 0.15 / (2.0 * static_cast<double>(sf.patterns() - 1));
  double best = 0.0, best_p = 0.5;
  for (int i = 0; i <= 5000; ++i) {
    const double p = 0.5 + i * 1e-4;
    const double q = free_weight(sf, p, p);
    if (q > best) best = q, best_p = p;
  }
  const auto out = localize_noise(sf);
  CHECK(out.report.Q >= best - 1e-12);
  CHECK(out.report.Q - best < 1e-3);
  CHECK(out.report.p == doctest::Approx(best_p).epsilon(2e-4));
  CHECK(localization_weight(sf, out.report.p) == doctest::Approx(out.report.Q).epsilon(1e-12));
}

TEST_CASE("EPP fixed points lose very little fidelity") {
  for (int n : {4, 5}) {
    const auto sf = twirl_to_standard_form(depolarizing_fixed_point(n, 0.99));
    const auto out = localize_noise(sf);
    REQUIRE(out.report.feasible);
    CHECK(out.report.relative_reduction < 1e-2);
    CHECK(out.report.relative_reduction > 0.0);
    const auto fit = fit_closest_local(out.state);
    CHECK(fit.one_minus_f() <= 1e-9);
  }
  SUBCASE("GHZ-3 is already local") {
    const auto out = localize_noise(twirl_to_standard_form(depolarizing_fixed_point(3, 0.98)));
    CHECK(out.report.Q == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("equal weights on both sets are optimal") {
    const auto sf = twirl_to_standard_form(depolarizing_fixed_point(4, 0.97));
    const auto out = localize_noise(sf);
    const double p = out.report.p;
    double best = 0.0;
    for (int i = -40; i <= 40; ++i)
      for (int j = -40; j <= 40; ++j) best = std::max(best, free_weight(sf, std::min(1.0, p + i * 5e-5), std::min(1.0, p + j * 5e-5)));
    CHECK(best <= out.report.Q + 1e-9);
  }
}
