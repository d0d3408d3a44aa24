#include "gsepp/symscale.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "maximize.hpp"

namespace gsepp {

namespace {

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument(std::string(what) + ": parameter outside [0, 1]");
}

double ipow(double x, int e) { return e == 0 ? 1.0 : std::pow(x, e); }

// Change measured on the weight-class probabilities, which stay O(1) when
// the individual coefficients are exponentially small.
double max_change(const SymmetricCoefficients& a, const SymmetricCoefficients& b) {
  double m = 0.0;
  for (int k = 0; k <= a.leaves(); ++k) m = std::max(m, std::abs(a.weight_probability(k) - b.weight_probability(k)));
  return m;
}

bool c0_strictly_largest(const SymmetricCoefficients& s) {
  return std::all_of(s.c.begin() + 1, s.c.end(), [&](double x) { return x * (1.0 + kDistilledMargin) < s.c[0]; });
}

}  // namespace

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r < 9e15 ? std::round(r) : r;
}

SymmetricCoefficients SymmetricCoefficients::pure(int n) {
  if (n < 2) throw std::invalid_argument("symmetric GHZ state needs at least two qubits");
  SymmetricCoefficients s;
  s.c.assign(static_cast<std::size_t>(n), 0.0);
  s.c[0] = 1.0;
  return s;
}

SymmetricCoefficients SymmetricCoefficients::uniform(int n) {
  SymmetricCoefficients s = pure(n);
  std::fill(s.c.begin(), s.c.end(), std::ldexp(1.0, -(n - 1)));
  return s;
}

double SymmetricCoefficients::total() const {
  double t = 0.0;
  for (int k = 0; k <= leaves(); ++k) t += weight_probability(k);
  return t;
}

void SymmetricCoefficients::normalize() {
  const double t = total();
  if (!(t > 0.0)) throw std::runtime_error("symmetric coefficients: zero norm");
  for (double& x : c) x /= t;
}

void SymmetricCoefficients::validate(double tol) const {
  if (c.size() < 2) throw std::invalid_argument("symmetric coefficients: need at least two entries");
  for (double x : c)
    if (!(x >= -tol)) throw std::invalid_argument("symmetric coefficients: negative entry");
  if (std::abs(total() - 1.0) > tol) throw std::invalid_argument("symmetric coefficients: not normalized");
}

SigzMatrix::SigzMatrix(int leaves, double p) : nb_(leaves), m_(static_cast<std::size_t>((leaves + 1) * (leaves + 1)), 0.0) {
  check_probability(p, "sigz_on_B");
  // Output weight l from input weight k; i leaf bits are 1 in both, so the
  // flip pattern has weight k + l - 2i.
  for (int l = 0; l <= nb_; ++l)
    for (int k = 0; k <= nb_; ++k) {
      double s = 0.0;
      for (int i = std::max(0, k + l - nb_); i <= std::min(l, k); ++i)
        s += binomial(l, i) * binomial(nb_ - l, k - i) * ipow(p, nb_ - k - l + 2 * i) * ipow(1.0 - p, k + l - 2 * i);
      m_[static_cast<std::size_t>(l * (nb_ + 1) + k)] = s;
    }
}

SymmetricCoefficients SigzMatrix::apply(const SymmetricCoefficients& s) const {
  if (s.leaves() != nb_) throw std::invalid_argument("SigzMatrix: size mismatch");
  SymmetricCoefficients out;
  out.c.assign(s.c.size(), 0.0);
  for (int l = 0; l <= nb_; ++l) {
    double acc = 0.0;
    for (int k = 0; k <= nb_; ++k) acc += m_[static_cast<std::size_t>(l * (nb_ + 1) + k)] * s.c[static_cast<std::size_t>(k)];
    out.c[static_cast<std::size_t>(l)] = acc;
  }
  out.normalize();
  return out;
}

SymmetricCoefficients sigz_on_B(const SymmetricCoefficients& s, double p) { return SigzMatrix(s.leaves(), p).apply(s); }

SymmetricCoefficients sigx_on_A(const SymmetricCoefficients& s, double p) {
  check_probability(p, "sigx_on_A");
  SymmetricCoefficients out = s;
  const int nb = s.leaves();
  for (int l = 0; l <= nb; ++l)
    out.c[static_cast<std::size_t>(l)] = p * s.c[static_cast<std::size_t>(l)] + (1.0 - p) * s.c[static_cast<std::size_t>(nb - l)];
  out.normalize();
  return out;
}

std::pair<SymmetricCoefficients, double> purify_step(const SymmetricCoefficients& s) {
  SymmetricCoefficients out = s;
  for (double& x : out.c) x *= x;
  const double k = out.total();
  if (!(k > 0.0)) throw std::runtime_error("purify_step: success probability vanished");
  for (double& x : out.c) x /= k;
  return {std::move(out), k};
}

SymmetricCoefficients noisy_purify_round(const SymmetricCoefficients& s, double p) {
  return purify_step(sigz_on_B(sigx_on_A(s, p), p)).first;
}

SymFixedPoint iterate_noisy_purification(const SymmetricCoefficients& initial, double p, int max_steps, double tolerance) {
  check_probability(p, "noisy purification");
  const SigzMatrix z(initial.leaves(), p);
  SymFixedPoint r;
  r.state = initial;
  for (r.steps = 1; r.steps <= max_steps; ++r.steps) {
    auto [next, k] = purify_step(z.apply(sigx_on_A(r.state, p)));
    r.success.push_back(k);
    r.last_change = max_change(next, r.state);
    r.state = std::move(next);
    if (r.last_change < tolerance) {
      r.converged = true;
      r.distilled = c0_strictly_largest(r.state);
      return r;
    }
  }
  r.steps = max_steps;
  return r;
}

SymFixedPoint noisy_purify_fixed_point(int n, double p, int max_steps, double tolerance) {
  return iterate_noisy_purification(SymmetricCoefficients::pure(n), p, max_steps, tolerance);
}

SymmetricCoefficients prepare_initial_ghz(int n, double p) {
  check_probability(p, "prepare_initial_ghz");
  if (n < 2) throw std::invalid_argument("prepare_initial_ghz: need at least two qubits");
  // An X error on either qubit of CNOT j -> j+1 is pushed down the chain and
  // ends up flipping a suffix of qubits: suffix j for the control (trivial
  // for j = 0 since X^N stabilises GHZ) and suffix j+1 for the target. Leaf
  // bit m of the star basis is the parity of toggled suffixes s <= m.
  const double r = 1.0 - p;
  const double pair = 2.0 * p * r;
  // dist[parity][weight]
  std::vector<std::vector<double>> dist(2, std::vector<double>(static_cast<std::size_t>(n), 0.0));
  dist[0][0] = 1.0;
  for (int m = 1; m < n; ++m) {
    const double flip = m == n - 1 ? r : pair;
    std::vector<std::vector<double>> next(2, std::vector<double>(static_cast<std::size_t>(n), 0.0));
    for (int par = 0; par < 2; ++par)
      for (int w = 0; w < m; ++w) {
        const double x = dist[static_cast<std::size_t>(par)][static_cast<std::size_t>(w)];
        if (x == 0.0) continue;
        for (int t = 0; t < 2; ++t) {
          const int np = par ^ t;
          next[static_cast<std::size_t>(np)][static_cast<std::size_t>(w + np)] += x * (t ? flip : 1.0 - flip);
        }
      }
    dist = std::move(next);
  }
  SymmetricCoefficients s = SymmetricCoefficients::pure(n);
  for (int k = 0; k < n; ++k)
    s.c[static_cast<std::size_t>(k)] = (dist[0][static_cast<std::size_t>(k)] + dist[1][static_cast<std::size_t>(k)]) / binomial(n - 1, k);
  return s;
}

bool prep_distillable(int n, double p) {
  const SymFixedPoint target = noisy_purify_fixed_point(n, p);
  if (!target.converged || !target.distilled) return false;
  SymmetricCoefficients s = prepare_initial_ghz(n, p);
  const SigzMatrix z(n - 1, p);
  try {
    for (int i = 0; i < kPrepRounds; ++i) s = purify_step(z.apply(sigx_on_A(s, p))).first;
  } catch (const std::runtime_error&) {
    return false;
  }
  return max_change(s, target.state) < kPrepTolerance;
}

double prep_threshold(int n, double tolerance) {
  if (n < 3) throw std::invalid_argument("prep_threshold: need N >= 3");
  double lo = 0.5, hi = 1.0;
  if (prep_distillable(n, lo)) return lo;
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    (prep_distillable(n, mid) ? hi : lo) = mid;
  }
  return hi;
}

DiagonalState to_diagonal(const SymmetricCoefficients& s) {
  const int n = s.qubits();
  std::vector<double> v(std::size_t{1} << n, 0.0);
  for (Index mu = 0; mu < v.size(); mu += 2) v[mu] = s.c[static_cast<std::size_t>(popcount(mu))];
  return {Graph::star(n, 0), std::move(v)};
}

SymmetricCoefficients from_diagonal(const DiagonalState& d, double tol) {
  const int n = d.size();
  if (!(d.graph() == Graph::star(n, 0))) throw std::invalid_argument("from_diagonal: state is not on the star graph");
  SymmetricCoefficients s = SymmetricCoefficients::pure(n);
  std::fill(s.c.begin(), s.c.end(), 0.0);
  for (Index mu = 0; mu < d.dimension(); ++mu) {
    if (mu & 1) {
      if (d[mu] > tol) throw std::invalid_argument("from_diagonal: weight on a centre-flipped pattern");
      continue;
    }
    s.c[static_cast<std::size_t>(popcount(mu))] += d[mu];
  }
  for (int k = 0; k < n; ++k) s.c[static_cast<std::size_t>(k)] /= binomial(n - 1, k);
  return s;
}

double decode_success(const SymmetricCoefficients& resource, double q) {
  const int nb = resource.leaves();
  if (nb % 2 == 0) throw std::invalid_argument("decode_success: need an odd number of encoded qubits");
  const SymmetricCoefficients s = q == 1.0 ? resource : sigz_on_B(resource, q);
  double f = 0.0;
  for (int k = 0; 2 * k < nb; ++k) f += s.weight_probability(k);
  return f;
}

Scenario parse_scenario(const std::string& s) {
  if (s == "A" || s == "a") return Scenario::A;
  if (s == "B" || s == "b") return Scenario::B;
  if (s == "C" || s == "c") return Scenario::C;
  throw std::invalid_argument("unknown scaling scenario '" + s + "'");
}

std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::A: return "A";
    case Scenario::B: return "B";
    case Scenario::C: return "C";
  }
  return "?";
}

}  // namespace gsepp

namespace gsepp {

namespace {

// Smallest p in [lo, 1] with pred(p) true, assuming pred is monotone.
template <class P>
double bisect_threshold(P pred, double lo, double tolerance) {
  double hi = 1.0;
  if (pred(lo)) return lo;
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    (pred(mid) ? hi : lo) = mid;
  }
  return hi;
}

double advantage_over_unencoded(const SymmetricCoefficients& resource, double* q_at) {
  auto [q, v] = detail::maximize_1d([&](double q) { return decode_success(resource, q) - q; }, 0.5, 1.0);
  if (q_at) *q_at = q;
  return v;
}

}  // namespace

SymmetricCoefficients local_model(int n, double a, double b) {
  SymmetricCoefficients s = SymmetricCoefficients::pure(n);
  const int nb = n - 1;
  for (int k = 0; k <= nb; ++k)
    s.c[static_cast<std::size_t>(k)] = a * ipow(b, nb - k) * ipow(1.0 - b, k) + (1.0 - a) * ipow(b, k) * ipow(1.0 - b, nb - k);
  return s;
}

double classical_fidelity(const SymmetricCoefficients& x, const SymmetricCoefficients& y) {
  if (x.c.size() != y.c.size()) throw std::invalid_argument("classical_fidelity: size mismatch");
  double f = 0.0;
  for (int k = 0; k <= x.leaves(); ++k)
    f += binomial(x.leaves(), k) * std::sqrt(std::max(0.0, x.c[static_cast<std::size_t>(k)]) * std::max(0.0, y.c[static_cast<std::size_t>(k)]));
  return f * f;
}

SymmetricLocalFit fit_symmetric_local(const SymmetricCoefficients& s) {
  const int n = s.qubits();
  SymmetricLocalFit best;
  auto inner = [&](double b, double* a_at) {
    auto [a, f] = detail::maximize_1d([&](double a) { return classical_fidelity(s, local_model(n, a, b)); }, 0.5, 1.0, 40, 1e-12);
    if (a_at) *a_at = a;
    return f;
  };
  auto [b, f] = detail::maximize_1d([&](double b) { return inner(b, nullptr); }, 0.5, 1.0, 100, 1e-12);
  best.b = b;
  best.fidelity = inner(b, &best.a);
  (void)f;
  best.model = local_model(n, best.a, best.b);
  return best;
}

SymFixedPoint virtual_centre_fixed_point(int n, double p, int max_steps, double tolerance) {
  check_probability(p, "virtual centre purification");
  const SigzMatrix z(n - 1, p);
  SymFixedPoint r;
  r.state = SymmetricCoefficients::pure(n);
  for (r.steps = 1; r.steps <= max_steps; ++r.steps) {
    auto [next, k] = purify_step(z.apply(r.state));
    r.success.push_back(k);
    r.last_change = max_change(next, r.state);
    r.state = std::move(next);
    if (r.last_change < tolerance) {
      r.converged = true;
      r.distilled = c0_strictly_largest(r.state);
      return r;
    }
  }
  r.steps = max_steps;
  return r;
}

double scenario_advantage(Scenario scenario, int n, double p, double* q_at) {
  const SymFixedPoint fp = scenario == Scenario::B ? virtual_centre_fixed_point(n + 1, p) : noisy_purify_fixed_point(n + 1, p);
  if (!fp.converged || !fp.distilled) {
    if (q_at) *q_at = 0.5;
    return -1.0;
  }
  if (scenario == Scenario::A) return advantage_over_unencoded(fit_symmetric_local(fp.state).model, q_at);
  return advantage_over_unencoded(fp.state, q_at);
}

double scenario_c_advantage(int n, double p, double* q_at) { return scenario_advantage(Scenario::C, n, p, q_at); }

ScalingPoint scaling_threshold(Scenario scenario, int n, double tolerance) {
  if (n < 3 || n % 2 == 0) throw std::invalid_argument("scaling_threshold: N must be odd and >= 3");
  ScalingPoint r;
  r.scenario = scenario;
  r.n = n;
  switch (scenario) {
    case Scenario::A:
      r.note = "closest symmetric local model of the fixed point; noise shifted to the inputs";
      break;
    case Scenario::B:
      r.note = "noise-free virtual centre; leaves carry D_z only, exactly local";
      break;
    case Scenario::C:
      r.note = "fixed point itself; decoding only";
      break;
  }
  r.threshold =
      bisect_threshold([&](double p) { return scenario_advantage(scenario, n, p) > kAdvantageMargin; }, 0.5, tolerance);
  return r;
}

}  // namespace gsepp
