#include "gsepp/diagonal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace gsepp {

namespace {

// Flat arrays beyond 2^26 doubles stop being a desk-scale computation.
std::size_t checked_dimension(int n, int copies) {
  if (n * copies > 26) throw std::invalid_argument("diagonal state too large for the flat-array engine");
  return std::size_t{1} << (n * copies);
}

}  // namespace

DiagonalState::DiagonalState(Graph g, std::vector<double> coeffs) : graph_(std::move(g)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != checked_dimension(graph_.size(), 1))
    throw std::invalid_argument("DiagonalState: coefficient count must be 2^n");
}

DiagonalState DiagonalState::pure(const Graph& g) {
  std::vector<double> c(checked_dimension(g.size(), 1), 0.0);
  c[0] = 1.0;
  return {g, std::move(c)};
}

DiagonalState DiagonalState::maximally_mixed(const Graph& g) {
  const std::size_t d = checked_dimension(g.size(), 1);
  return {g, std::vector<double>(d, 1.0 / static_cast<double>(d))};
}

DiagonalState DiagonalState::isotropic(const Graph& g, double f) {
  if (!(f >= 0.0 && f <= 1.0)) throw std::invalid_argument("isotropic: fidelity must be in [0,1]");
  const std::size_t d = checked_dimension(g.size(), 1);
  std::vector<double> c(d, (1.0 - f) / static_cast<double>(d - 1));
  c[0] = f;
  return {g, std::move(c)};
}

double DiagonalState::total() const {
  double s = 0.0;
  for (double x : coeffs_) s += x;
  return s;
}

void DiagonalState::validate(double tol) const {
  for (double x : coeffs_)
    if (x < -tol || !std::isfinite(x)) throw std::domain_error("DiagonalState: negative or non-finite coefficient");
  // Summation error grows with the array length; never demand better than that.
  const double sum_tol = std::max(tol, 1e-15 * static_cast<double>(coeffs_.size()));
  if (std::abs(total() - 1.0) > sum_tol)
    throw std::domain_error("DiagonalState: coefficients do not sum to 1 (sum = " + std::to_string(total()) + ")");
}

JointDiagonalState::JointDiagonalState(Graph g, std::vector<double> coeffs) : graph_(std::move(g)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != checked_dimension(graph_.size(), 2))
    throw std::invalid_argument("JointDiagonalState: coefficient count must be 4^n");
}

JointDiagonalState JointDiagonalState::product(const DiagonalState& first, const DiagonalState& second) {
  if (first.size() != second.size()) throw std::invalid_argument("JointDiagonalState: size mismatch");
  const std::size_t d = first.dimension();
  std::vector<double> c(d * d);
  for (std::size_t nu = 0; nu < d; ++nu)
    for (std::size_t mu = 0; mu < d; ++mu) c[mu + nu * d] = first[mu] * second[nu];
  return {first.graph(), std::move(c)};
}

std::vector<double> apply_mask_mixture(const std::vector<double>& in, const std::vector<std::pair<Index, double>>& terms) {
  std::vector<double> out(in.size(), 0.0);
  for (const auto& [mask, w] : terms) {
    if (w == 0.0) continue;
    for (std::size_t mu = 0; mu < in.size(); ++mu) out[mu] += w * in[mu ^ mask];
  }
  return out;
}

std::vector<std::pair<Index, double>> channel_masks(const Graph& g, int q, const PauliChannel& c) {
  const Index nb = g.neighbors(q);
  return {{0, c[0]}, {nb, c[1]}, {nb | bit(q), c[2]}, {bit(q), c[3]}};
}

DiagonalState apply_local_channel(const DiagonalState& s, int q, const PauliChannel& c) {
  if (c.is_identity()) return s;
  return {s.graph(), apply_mask_mixture(s.coeffs(), channel_masks(s.graph(), q, c))};
}

DiagonalState apply_local_channels(const DiagonalState& s, const std::vector<PauliChannel>& per_qubit) {
  if (static_cast<int>(per_qubit.size()) != s.size()) throw std::invalid_argument("apply_local_channels: one channel per qubit");
  DiagonalState out = s;
  for (int q = 0; q < s.size(); ++q) out = apply_local_channel(out, q, per_qubit[static_cast<std::size_t>(q)]);
  return out;
}

DiagonalState apply_pauli(const DiagonalState& s, const PauliString& p) {
  const Index m = pauli_index_action(p, s.graph());
  std::vector<double> out(s.dimension());
  for (std::size_t mu = 0; mu < out.size(); ++mu) out[mu ^ m] = s[mu];
  return {s.graph(), std::move(out)};
}

DiagonalState apply_global_depolarizing(const DiagonalState& s, double p_tilde) {
  if (!(p_tilde >= 0.0 && p_tilde <= 1.0)) throw std::invalid_argument("global depolarizing: p must be in [0,1]");
  const double floor = (1.0 - p_tilde) / static_cast<double>(s.dimension());
  std::vector<double> out(s.dimension());
  for (std::size_t mu = 0; mu < out.size(); ++mu) out[mu] = p_tilde * s[mu] + floor;
  return {s.graph(), std::move(out)};
}

double fidelity_diagonal(const DiagonalState& a, const DiagonalState& b) {
  if (!(a.graph() == b.graph())) throw std::invalid_argument("fidelity_diagonal: graph mismatch");
  double f = 0.0;
  for (std::size_t mu = 0; mu < a.dimension(); ++mu) f += std::sqrt(std::max(0.0, a[mu]) * std::max(0.0, b[mu]));
  return f;
}

DiagonalState local_complement_state(const DiagonalState& s, int a) {
  std::vector<double> out(s.dimension());
  for (std::size_t mu = 0; mu < out.size(); ++mu) out[lc_transform_index(mu, s.graph(), a)] = s[mu];
  return {local_complement(s.graph(), a), std::move(out)};
}

Index multilateral_cnot_index(Index joint, int n, Index purified) {
  const Index full = low_mask(n);
  const Index rest = full & ~purified;
  const Index mu = joint & full;
  const Index nu = joint >> n;
  const Index mu2 = mu ^ (nu & rest);
  const Index nu2 = nu ^ (mu & purified);
  return mu2 | (nu2 << n);
}

JointDiagonalState multilateral_cnot(const JointDiagonalState& j, Index purified) {
  const int n = j.size();
  std::vector<double> out(j.coeffs().size());
  for (std::size_t idx = 0; idx < out.size(); ++idx) out[multilateral_cnot_index(idx, n, purified)] = j.coeffs()[idx];
  return {j.graph(), std::move(out)};
}

JointDiagonalState multilateral_cnot(const JointDiagonalState& j, const Coloring& coloring) {
  if (!coloring.two_colorable()) throw std::invalid_argument("multilateral_cnot: graph is not two-colorable");
  return multilateral_cnot(j, coloring.set_a());
}

}  // namespace gsepp
