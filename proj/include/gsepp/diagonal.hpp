#pragma once

#include <utility>
#include <vector>

#include "gsepp/graph.hpp"
#include "gsepp/noise.hpp"

namespace gsepp {

inline constexpr double kNormTolerance = 1e-12;

/// Density operator diagonal in the graph-state basis of `graph`:
/// sum_mu coeffs[mu] |mu><mu|_G with bit i of mu belonging to vertex i.
class DiagonalState {
 public:
  DiagonalState() = default;
  DiagonalState(Graph g, std::vector<double> coeffs);

  static DiagonalState pure(const Graph& g);
  static DiagonalState maximally_mixed(const Graph& g);
  /// lambda_0 = f, remaining weight spread uniformly.
  static DiagonalState isotropic(const Graph& g, double f);

  const Graph& graph() const { return graph_; }
  int size() const { return graph_.size(); }
  std::size_t dimension() const { return coeffs_.size(); }
  const std::vector<double>& coeffs() const { return coeffs_; }
  double operator[](Index mu) const { return coeffs_[mu]; }
  /// Overlap with the pure graph state.
  double fidelity() const { return coeffs_[0]; }
  double total() const;

  /// Throws when a coefficient is negative beyond tolerance or the sum is off.
  void validate(double tol = kNormTolerance) const;

 private:
  Graph graph_;
  std::vector<double> coeffs_;
};

/// Two copies of a state on the same graph: index mu | (nu << n).
class JointDiagonalState {
 public:
  JointDiagonalState() = default;
  JointDiagonalState(Graph g, std::vector<double> coeffs);
  static JointDiagonalState product(const DiagonalState& first, const DiagonalState& second);

  const Graph& graph() const { return graph_; }
  int size() const { return graph_.size(); }
  const std::vector<double>& coeffs() const { return coeffs_; }
  std::vector<double>& mutable_coeffs() { return coeffs_; }
  double operator()(Index mu, Index nu) const { return coeffs_[mu | (nu << graph_.size())]; }

 private:
  Graph graph_;
  std::vector<double> coeffs_;
};

/// out[mu] = sum_k w_k in[mu ^ m_k].
std::vector<double> apply_mask_mixture(const std::vector<double>& in, const std::vector<std::pair<Index, double>>& terms);

/// Index masks of I, X, Y, Z on vertex q, weighted by the channel.
std::vector<std::pair<Index, double>> channel_masks(const Graph& g, int q, const PauliChannel& c);

DiagonalState apply_local_channel(const DiagonalState& s, int q, const PauliChannel& c);
DiagonalState apply_local_channels(const DiagonalState& s, const std::vector<PauliChannel>& per_qubit);
DiagonalState apply_pauli(const DiagonalState& s, const PauliString& p);
DiagonalState apply_global_depolarizing(const DiagonalState& s, double p_tilde);

/// Exact Uhlmann fidelity of two commuting states: sum sqrt(lambda omega).
double fidelity_diagonal(const DiagonalState& a, const DiagonalState& b);

/// Re-expresses the state in the basis of local_complement(g, a); the local
/// Clifford realising the complementation maps |mu>_G to |mu'>_{tau(G)}.
DiagonalState local_complement_state(const DiagonalState& s, int a);

/// Multilateral CNOT between two copies. Vertices in `purified` are the
/// targets-in-copy-1 side: copy 2 sends CNOTs into copy 1 on those vertices
/// and copy 1 sends into copy 2 elsewhere. With purified = set A the index
/// rule is (mu_A, mu_B ^ nu_B), (nu_A ^ mu_A, nu_B).
Index multilateral_cnot_index(Index joint, int n, Index purified);
JointDiagonalState multilateral_cnot(const JointDiagonalState& j, Index purified);
/// Same with purified = set A of a two-coloring.
JointDiagonalState multilateral_cnot(const JointDiagonalState& j, const Coloring& coloring);

}  // namespace gsepp
