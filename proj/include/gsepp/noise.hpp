#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "gsepp/pauli.hpp"

namespace gsepp {

/// Single-qubit Pauli-diagonal channel: rho -> sum_i p[i] s_i rho s_i with
/// s = (I, X, Y, Z).
struct PauliChannel {
  std::array<double, 4> p{1.0, 0.0, 0.0, 0.0};

  static PauliChannel identity() { return {}; }
  /// D_x: [px, 1-px, 0, 0].
  static PauliChannel bitflip(double px);
  /// D_z: [pz, 0, 0, 1-pz].
  static PauliChannel phaseflip(double pz);
  /// D_w: [p+(1-p)/4, (1-p)/4, (1-p)/4, (1-p)/4].
  static PauliChannel depolarizing(double p);
  static PauliChannel from_weights(const std::array<double, 4>& w);

  double operator[](int i) const { return p[static_cast<std::size_t>(i)]; }
  double operator[](Pauli s) const { return p[static_cast<std::size_t>(s)]; }
  bool is_identity() const { return p[0] == 1.0; }
  /// (4 p^0 - 1) / 3; composes multiplicatively for depolarizing channels.
  double white_noise_parameter() const { return (4.0 * p[0] - 1.0) / 3.0; }

  /// Channel equivalent to applying `first` and then `second`.
  friend PauliChannel compose(const PauliChannel& first, const PauliChannel& second);

  bool operator==(const PauliChannel&) const = default;
};

/// Builds a channel by name: "bitflip", "phaseflip", "depolarizing" (also
/// "identity", parameter ignored).
PauliChannel make_channel(std::string_view name, double param);

/// Two-qubit Pauli-diagonal channel; slot 4a+b holds the weight of s_a (x) s_b.
struct TwoQubitPauliChannel {
  std::array<double, 16> p{};

  TwoQubitPauliChannel() { p[0] = 1.0; }
  /// Identity with weight p' + (1-p')/16, every other pair (1-p')/16.
  static TwoQubitPauliChannel depolarizing(double p_prime);
  static TwoQubitPauliChannel product(const PauliChannel& first, const PauliChannel& second);

  double operator()(Pauli a, Pauli b) const {
    return p[static_cast<std::size_t>(4 * static_cast<int>(a) + static_cast<int>(b))];
  }
};

/// rho -> p~ rho + (1 - p~) 1/2^N.
struct GlobalDepolarizing {
  double p_tilde = 1.0;
  int n = 1;
};

/// Which side of a two-colorable graph a qubit belongs to; local gate noise
/// may differ between the two sides (binary-like model).
enum class Side { A, B };

/// Noise attached to otherwise perfect two-qubit gates. The noise acts on
/// both gate qubits simultaneously, before the perfect gate.
struct GateNoiseModel {
  enum class Kind { Local, Correlated };

  Kind kind = Kind::Local;
  /// Local kind: channel for qubits of set A and of set B.
  PauliChannel on_a;
  PauliChannel on_b;
  /// Correlated kind: joint two-qubit channel.
  TwoQubitPauliChannel joint;
  /// Gate error parameter as given by the user (p, p_xz or p').
  double param = 1.0;
  std::string label = "perfect";

  static GateNoiseModel perfect();
  static GateNoiseModel local_depolarizing(double p);
  /// D_x on set-A qubits and D_z on set-B qubits, both with parameter pxz.
  static GateNoiseModel binary_like(double pxz);
  static GateNoiseModel correlated_depolarizing(double p_prime);
  static GateNoiseModel local(const PauliChannel& a, const PauliChannel& b, double param, std::string label);

  bool is_perfect() const;
  const PauliChannel& channel(Side s) const { return s == Side::A ? on_a : on_b; }
  /// Joint channel on (source, target) when both qubits sit on side `s`.
  TwoQubitPauliChannel pair_channel(Side s) const;
};

struct WeightedPauli {
  double weight = 0.0;
  PauliString pauli;
};

/// Pauli-mixture decomposition of a noisy CNOT on an n-qubit register: each
/// term applies `pauli` and then the perfect CNOT(source -> target). Zero
/// weight terms are dropped.
std::vector<WeightedPauli> noisy_cnot_mixture(const GateNoiseModel& model, int n, int source, int target,
                                              Side side = Side::A);

enum class Clifford { CNOT, CZ, H, SqrtX, SqrtZ };

std::string clifford_name(Clifford g);
int clifford_arity(Clifford g);

/// Returns G P G^dagger, so that G P = P' G, with the phase tracked.
/// SqrtX = sqrt(-i X) = (1 - iX)/sqrt2 and SqrtZ = sqrt(i Z) = (1 + iZ)/sqrt2.
PauliString conjugate_pauli_through_clifford(const PauliString& p, Clifford gate, const std::vector<int>& qubits);

}  // namespace gsepp
