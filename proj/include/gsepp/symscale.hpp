#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gsepp/diagonal.hpp"
#include "gsepp/epp.hpp"

// Permutation-symmetric binary-like mixtures of the N-qubit GHZ graph state
// (star graph, centre = set A = vertex 0). Only patterns with mu_A = 0 carry
// weight and c_k is the common coefficient of every leaf pattern of Hamming
// weight k, so a state needs N numbers instead of 2^N.

namespace gsepp {

double binomial(int n, int k);

struct SymmetricCoefficients {
  /// c[k] for k = 0..N_b, N_b = N - 1 leaves.
  std::vector<double> c;

  static SymmetricCoefficients pure(int n);
  /// Every leaf pattern equally likely.
  static SymmetricCoefficients uniform(int n);

  int leaves() const { return static_cast<int>(c.size()) - 1; }
  int qubits() const { return static_cast<int>(c.size()); }
  double fidelity() const { return c.at(0); }
  /// sum_k binom(N_b, k) c_k.
  double total() const;
  /// Probability that the leaf pattern has weight k.
  double weight_probability(int k) const { return binomial(leaves(), k) * c.at(static_cast<std::size_t>(k)); }
  void normalize();
  void validate(double tol = 1e-12) const;
};

/// D_z(p) on every leaf.
SymmetricCoefficients sigz_on_B(const SymmetricCoefficients& s, double p);
/// D_x(p) on the centre, which flips every leaf bit.
SymmetricCoefficients sigx_on_A(const SymmetricCoefficients& s, double p);
/// Squaring step of the recurrence EPP; returns the new state and the
/// success probability.
std::pair<SymmetricCoefficients, double> purify_step(const SymmetricCoefficients& s);

/// Transition matrix m[l][k] of sigz_on_B so repeated application costs
/// O(N^2) per step.
class SigzMatrix {
 public:
  SigzMatrix(int leaves, double p);
  SymmetricCoefficients apply(const SymmetricCoefficients& s) const;

 private:
  int nb_;
  std::vector<double> m_;
};

/// One noisy EPP round with binary-like gate noise of parameter p: every
/// CNOT of the multilateral CNOT carries D_x on the centre pair and D_z on
/// the leaf pairs; both copies see the same noise before the squaring step.
SymmetricCoefficients noisy_purify_round(const SymmetricCoefficients& s, double p);

struct SymFixedPoint {
  SymmetricCoefficients state;
  int steps = 0;
  bool converged = false;
  /// Converged with c_0 the largest coefficient by kDistilledMargin.
  bool distilled = false;
  double last_change = 0.0;
  std::vector<double> success;
};

/// Iterates noisy_purify_round from `initial` until one round changes every
/// weight-class probability binom(N_b,k) c_k by less than `tolerance`.
SymFixedPoint iterate_noisy_purification(const SymmetricCoefficients& initial, double p, int max_steps = 200000,
                                         double tolerance = 1e-14);
/// Fixed point reached from the pure GHZ state.
SymFixedPoint noisy_purify_fixed_point(int n, double p, int max_steps = 200000, double tolerance = 1e-14);

/// CNOT chain 0->1->...->N-1 on |+>|0...0> with D_x(p) on both qubits of
/// every CNOT (bit-flip frame), mapped to the star graph basis and averaged
/// over leaf permutations.
SymmetricCoefficients prepare_initial_ghz(int n, double p);

/// Rounds used by the preparation distillability test and its tolerance on
/// the weight-class probabilities against the fixed point. Comparing c_0
/// alone breaks down for large N where the fixed point fidelity itself is
/// below the tolerance.
inline constexpr int kPrepRounds = 200;
inline constexpr double kPrepTolerance = 1e-6;

/// The prepared state reaches the distilled fixed point within kPrepRounds.
bool prep_distillable(int n, double p);
/// Smallest gate parameter whose prepared state is still distillable
/// (bisection on [0.5, 1]).
double prep_threshold(int n, double tolerance = 1e-4);

/// Mapping to and from the 2^N diagonal engine on Graph::star(n, 0).
DiagonalState to_diagonal(const SymmetricCoefficients& s);
/// Averages each weight class; throws when mu_A = 1 patterns carry weight.
SymmetricCoefficients from_diagonal(const DiagonalState& d, double tol = 1e-12);

/// Majority decoding of N encoded qubits through the decoding resource
/// (an (N+1)-qubit state) after external D_z(q) on the inputs: probability
/// that the majority of leaf bits is unflipped.
double decode_success(const SymmetricCoefficients& resource, double q);

/// Advantages below this count as none (absorbs optimizer round-off).
inline constexpr double kAdvantageMargin = 1e-12;

enum class Scenario { A, B, C };
Scenario parse_scenario(const std::string& s);
std::string to_string(Scenario s);

struct ScalingPoint {
  Scenario scenario = Scenario::C;
  int n = 0;
  double threshold = 1.0;
  std::string note;
};

/// Gate-parameter threshold of the scaling scenarios for N encoding qubits
/// (N odd), bisection to `tolerance`.
ScalingPoint scaling_threshold(Scenario scenario, int n, double tolerance = 1e-4);

/// Largest advantage F(q) - q of encoded over unencoded transmission across
/// external D_z(q), q in [1/2, 1], for N encoding qubits decoded through the
/// scenario's (N+1)-qubit resource at gate parameter p. Returns -1 when the
/// EPP does not distill; `q_at` receives the maximiser.
double scenario_advantage(Scenario scenario, int n, double p, double* q_at = nullptr);
double scenario_c_advantage(int n, double p, double* q_at = nullptr);

/// Symmetric local noise model: D_x(a) on the centre, D_z(b) on every leaf.
SymmetricCoefficients local_model(int n, double a, double b);
/// (sum_k binom(N_b,k) sqrt(x_k y_k))^2, the fidelity of commuting states.
double classical_fidelity(const SymmetricCoefficients& x, const SymmetricCoefficients& y);

struct SymmetricLocalFit {
  double a = 1.0;
  double b = 1.0;
  double fidelity = 1.0;
  SymmetricCoefficients model;
};
/// Closest symmetric local model (a, b in [1/2, 1]) by fidelity.
SymmetricLocalFit fit_symmetric_local(const SymmetricCoefficients& s);

/// EPP fixed point when the centre is a noise-free virtual qubit: only D_z
/// gate noise on the leaves, which keeps the state exactly locally noisy.
SymFixedPoint virtual_centre_fixed_point(int n, double p, int max_steps = 200000, double tolerance = 1e-14);

}  // namespace gsepp
