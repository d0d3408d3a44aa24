#include "gsepp/localize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "maximize.hpp"

namespace gsepp {

namespace {

constexpr int kLocalizeGrid = 2000;

double ipow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

// Largest lambda~_k per leaf weight.
std::vector<double> max_by_weight(const GhzStandardForm& sf) {
  std::vector<double> m(static_cast<std::size_t>(sf.n), 0.0);
  for (std::size_t k = 0; k < sf.patterns(); ++k) {
    auto& slot = m[static_cast<std::size_t>(popcount(k))];
    slot = std::max(slot, sf.combined(k));
  }
  return m;
}

double weight_from_maxima(const std::vector<double>& maxima, int n, double p) {
  const auto target = local_target_weights(n, p);
  double q = 1.0;
  for (std::size_t w = 0; w < maxima.size(); ++w)
    if (maxima[w] > 0.0) q = std::min(q, target[w] / maxima[w]);
  return q;
}

}  // namespace

double GhzStandardForm::combined(std::size_t k) const {
  return k == 0 ? lambda0_plus + lambda0_minus : 2.0 * lambda.at(k);
}

void GhzStandardForm::validate(double tol) const {
  if (n < 2) throw std::invalid_argument("GHZ standard form: need at least two qubits");
  if (lambda.size() != (std::size_t{1} << (n - 1))) throw std::invalid_argument("GHZ standard form: wrong number of coefficients");
  if (lambda[0] != 0.0) throw std::invalid_argument("GHZ standard form: lambda[0] is unused and must be 0");
  double total = lambda0_plus + lambda0_minus;
  if (!(lambda0_plus >= -tol && lambda0_minus >= -tol)) throw std::invalid_argument("GHZ standard form: negative coefficient");
  for (std::size_t k = 1; k < lambda.size(); ++k) {
    if (!(lambda[k] >= -tol)) throw std::invalid_argument("GHZ standard form: negative coefficient");
    total += 2.0 * lambda[k];
  }
  if (std::abs(total - 1.0) > tol) throw std::invalid_argument("GHZ standard form: not normalized");
}

DiagonalState GhzStandardForm::to_state() const {
  validate();
  std::vector<double> c(std::size_t{1} << n, 0.0);
  c[0] = lambda0_plus;
  c[1] = lambda0_minus;
  for (Index k = 1; k < lambda.size(); ++k) c[k << 1] = c[(k << 1) | 1] = lambda[k];
  return DiagonalState(Graph::star(n, 0), std::move(c));
}

GhzStandardForm twirl_to_standard_form(const DiagonalState& s) {
  const int n = s.size();
  if (n < 2 || s.graph() != Graph::star(n, 0)) throw std::invalid_argument("twirl_to_standard_form: graph must be the star with centre 0");
  s.validate();
  GhzStandardForm sf;
  sf.n = n;
  sf.lambda0_plus = s[0];
  sf.lambda0_minus = s[1];
  sf.lambda.assign(std::size_t{1} << (n - 1), 0.0);
  for (Index k = 1; k < sf.lambda.size(); ++k) sf.lambda[k] = 0.5 * (s[k << 1] + s[(k << 1) | 1]);
  return sf;
}

std::vector<double> local_target_weights(int n, double p) {
  if (n < 2) throw std::invalid_argument("local_target_weights: need at least two qubits");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("local_target_weights: parameter outside [0, 1]");
  // D_A flips every leaf with probability 1 - p, each D_B flips its own leaf;
  // both randomize the centre bit whenever they act.
  std::vector<double> t(static_cast<std::size_t>(n));
  for (int w = 0; w < n; ++w) t[static_cast<std::size_t>(w)] = ipow(p, n - w) * ipow(1.0 - p, w) + ipow(p, w) * ipow(1.0 - p, n - w);
  return t;
}

double localization_weight(const GhzStandardForm& sf, double p) {
  sf.validate();
  return weight_from_maxima(max_by_weight(sf), sf.n, p);
}

LocalizedState localize_noise_at(const GhzStandardForm& sf, double p) {
  sf.validate();
  const int n = sf.n;
  LocalizationReport r;
  r.p = p;
  r.Q = localization_weight(sf, p);
  r.lambda0_before = sf.lambda0_plus;
  r.fidelity_before = std::sqrt(std::max(0.0, sf.lambda0_plus));
  if (!(r.Q > 0.0)) {
    r.feasible = false;
    r.message = "no positive mixing weight at this parameter";
    return {sf.to_state(), r};
  }

  const auto target = local_target_weights(n, p);
  GhzStandardForm out = sf;
  r.q.assign(sf.patterns(), 0.0);
  for (std::size_t k = 0; k < sf.patterns(); ++k) {
    const double want = target[static_cast<std::size_t>(popcount(k))];
    r.q[k] = std::max(0.0, want - r.Q * sf.combined(k));
    if (k != 0) out.lambda[k] = 0.5 * want;
  }
  out.lambda0_plus = r.Q * sf.lambda0_plus + 0.5 * r.q[0];
  out.lambda0_minus = r.Q * sf.lambda0_minus + 0.5 * r.q[0];

  // Every local model of this family keeps both lambda0 entries at least
  // (1-p)^N / 2; a centre Z flip moves weight from the larger one.
  const double floor = 0.5 * ipow(1.0 - p, n);
  const double gap = out.lambda0_plus - out.lambda0_minus;
  if (out.lambda0_minus < floor && gap > 0.0) {
    r.ratio_flip = std::min(1.0, (floor - out.lambda0_minus) / gap);
  } else if (out.lambda0_plus < floor && gap < 0.0) {
    r.ratio_flip = std::min(1.0, (floor - out.lambda0_plus) / -gap);
  }
  if (r.ratio_flip > 0.0) {
    const double plus = out.lambda0_plus, minus = out.lambda0_minus;
    out.lambda0_plus = (1.0 - r.ratio_flip) * plus + r.ratio_flip * minus;
    out.lambda0_minus = (1.0 - r.ratio_flip) * minus + r.ratio_flip * plus;
  }
  const double pn = ipow(p, n);
  r.centre_z = pn > 0.0 ? std::clamp((out.lambda0_minus - floor) / pn, 0.0, 1.0) : 0.0;

  r.model.channels.assign(static_cast<std::size_t>(n), PauliChannel::from_weights({p, 0.0, 0.5 * (1.0 - p), 0.5 * (1.0 - p)}));
  r.model.channels[0] = PauliChannel::from_weights({p * (1.0 - r.centre_z), 0.5 * (1.0 - p), 0.5 * (1.0 - p), p * r.centre_z});
  r.model.classes.assign(static_cast<std::size_t>(n), 1);
  r.model.classes[0] = 0;

  r.lambda0_after = out.lambda0_plus;
  r.fidelity_after = std::sqrt(std::max(0.0, out.lambda0_plus));
  r.relative_reduction = r.fidelity_before > 0.0 ? (r.fidelity_before - r.fidelity_after) / r.fidelity_before : 0.0;
  return {out.to_state(), r};
}

LocalizedState localize_noise(const GhzStandardForm& sf) {
  sf.validate();
  const auto maxima = max_by_weight(sf);
  const auto [p, q] = detail::maximize_1d([&](double p) { return weight_from_maxima(maxima, sf.n, p); }, 0.5, 1.0, kLocalizeGrid, 1e-12);
  auto result = localize_noise_at(sf, p);
  if (!(q > 0.0)) {
    result.report.feasible = false;
    result.report.message = "no feasible local parameter";
  }
  return result;
}

}  // namespace gsepp
