#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gsepp/dense.hpp"
#include "gsepp/diagonal.hpp"
#include "gsepp/epp.hpp"
#include "gsepp/localfit.hpp"

// Measurement-based encoding and decoding with graph-state resources.
//
// A code is given by its encoder resource: the Choi state of the encoding
// isometry, a graph state whose vertex 0 is the logical side and vertices
// 1..n are the physical qubits, optionally with a Hadamard on every physical
// qubit (bit-flip repetition code). Physical qubit j of the code is resource
// vertex j + 1. Pauli patterns on the n physical qubits are keyed by
// x | (z << n).

namespace gsepp {

enum class CodeKind { RepetitionBitflip, RepetitionPhaseflip, ClusterRing };

struct Code {
  CodeKind kind = CodeKind::RepetitionBitflip;
  int n = 3;
  Graph resource_graph;
  bool hadamard_frame = false;
  /// Generators of the code stabilizer on the n physical qubits.
  std::vector<PauliString> stabilizers;
  PauliString logical_x;
  PauliString logical_z;
  /// Errors the code corrects; the identity comes first.
  std::vector<PauliString> correctable;

  static Code repetition_bitflip(int n = 3);
  static Code repetition_phaseflip(int n = 3);
  static Code cluster_ring();

  std::string name() const;
  /// Pattern key of a physical Pauli string.
  Index key(const PauliString& p) const;
  PauliString from_key(Index key) const;
  std::size_t patterns() const { return std::size_t{1} << (2 * n); }
};

/// "repetition3", "repetition-bitflip", "repetition-phaseflip" (optional
/// ":n" suffix, odd n >= 3) and "cluster-ring".
Code parse_code(const std::string& name);
std::string to_string(CodeKind k);

/// True when p maps the code space onto itself.
bool preserves_code(const Code& code, const PauliString& p);
/// Logical Pauli implemented by p; p must preserve the code space.
Pauli logical_action(const Code& code, const PauliString& p);

/// Pauli string on the n+1 resource qubits for graph-basis pattern mu,
/// including the Hadamard frame.
PauliString resource_error(const Code& code, Index mu);

struct CorrectionEntry {
  /// Index into CorrectionTable::errors; -1 for a pattern no listed error produces.
  int error = -1;
  Pauli correction = Pauli::I;
};

struct CorrectionTable {
  int n = 0;
  std::vector<PauliString> errors;
  /// One entry per Bell outcome pattern (sigma_{i_1}, ..., sigma_{i_n}).
  std::vector<CorrectionEntry> entries;

  const CorrectionEntry& lookup(Index pattern_key) const { return entries.at(pattern_key); }
  bool complete() const;
};

/// Reads a correctable error into a perfect resource and records every
/// outcome pattern it can produce together with the Pauli that restores the
/// output. Throws if two errors share a pattern but need different
/// corrections, or if some pattern is left unassigned.
CorrectionTable derive_correction_table(const Code& code);

struct PatternRow {
  PauliString pattern;
  Pauli correction = Pauli::I;
};
/// Patterns that occur without an error, grouped by correction in the order
/// I, Z, X, Y; inside a group the logical operator times every stabilizer
/// element (generator subsets in binary order).
std::vector<PatternRow> no_error_patterns(const Code& code, const CorrectionTable& table);

/// Logical Pauli left on the output when the physical qubits carry error P
/// (indexed by key) and the decoding resource is perfect. Averages the table
/// correction over every outcome pattern P can produce and throws if they
/// disagree.
std::vector<Pauli> measurement_decoding_map(const Code& code, const CorrectionTable& table);

// ---------------------------------------------------------------------------
// Gate-based circuits.

struct CircuitGate {
  Clifford gate = Clifford::CNOT;
  std::vector<int> qubits;
};

/// Encoder on qubits 0..n-1: qubit 0 carries the input, the others start in
/// the measurement basis eigenstate (|0> for Z, |+> for X).
std::vector<CircuitGate> encoding_circuit(const Code& code);
/// The encoder reversed; afterwards qubits 1..n-1 are measured.
std::vector<CircuitGate> decoding_circuit(const Code& code);
Basis ancilla_basis(const Code& code);

/// Syndrome (bit j-1 for measured qubit j) to correction on qubit 0,
/// derived by pushing each correctable error through the perfect decoder.
std::vector<Pauli> derive_gate_syndrome_table(const Code& code);

/// Distribution over n-qubit Pauli frames, keyed like Code::key.
using PauliDistribution = std::vector<double>;

PauliDistribution identity_distribution(int n);
/// Pushes a frame distribution through a circuit whose two-qubit gates carry
/// the gate noise (set-A channel on qubit 0, set-B channel elsewhere).
PauliDistribution propagate(const PauliDistribution& d, int n, const std::vector<CircuitGate>& circuit,
                            const GateNoiseModel& model);
/// Independent channel on every qubit.
PauliDistribution apply_channel(const PauliDistribution& d, int n, const PauliChannel& c);
/// XOR convolution of two independent frame distributions.
PauliDistribution combine(const PauliDistribution& a, const PauliDistribution& b, int n);

// ---------------------------------------------------------------------------
// Resources.

enum class PrepKind { Perfect, Epp, DirectGates };
PrepKind parse_prep(const std::string& s);
std::string to_string(PrepKind k);

struct PrepSpec {
  PrepKind kind = PrepKind::Perfect;
  GateNoiseKind noise = GateNoiseKind::LocalDepolarizing;
  double gate_param = 1.0;
  /// Step ending each EPP cycle: P1/P2 for GHZ resources, a color of the
  /// three-colorable graph for the cluster-ring resource.
  int final_step = kP1;
  double initial_fidelity = 0.9;
  /// Final step of the auxiliary EPPs (cluster-ring only); empty = P2.
  std::vector<int> aux_final;
};

enum class Role { Encode, Decode, EncodeDecode };

struct ResourceState {
  DiagonalState state;
  std::vector<int> inputs;
  std::vector<int> outputs;
  Role role = Role::Decode;
};

/// |+>^N followed by a noisy CZ per edge (noise before each gate).
DiagonalState direct_gate_state(const Graph& g, const GateNoiseModel& model, Index side_a);
/// Throws std::runtime_error when the EPP does not reach a distilled fixed point.
ResourceState build_resource(const Code& code, Role role, const PrepSpec& prep);

// ---------------------------------------------------------------------------
// Effective maps.

enum class CommScenario { DecodeOnly, ChannelDecode, EncodeChannelDecode, Unencoded };
CommScenario parse_scenario_name(const std::string& s);
std::string to_string(CommScenario s);

enum class DecodeImpl { MeasurementBased, GateBased };

struct MapSpec {
  CommScenario scenario = CommScenario::ChannelDecode;
  DecodeImpl impl = DecodeImpl::MeasurementBased;
  /// Channel on every physical qubit (on the single qubit when unencoded).
  PauliChannel channel;
  /// Measurement-based: decoding and (scenario iii) encoding resources.
  std::optional<DiagonalState> decode_resource;
  std::optional<DiagonalState> encode_resource;
  /// Gate-based: noise of the two-qubit gates.
  GateNoiseModel gate_noise = GateNoiseModel::perfect();
};

/// Largest number of enumerated error configurations.
inline constexpr double kMaxEnumeration = 1e7;

struct EffectiveMap {
  /// Weights of I, X, Y, Z on the logical qubit.
  std::array<double, 4> logical{1.0, 0.0, 0.0, 0.0};
  /// Choi state (reference qubit 0, output qubit 1).
  Eigen::Matrix4cd choi;
  CommScenario scenario = CommScenario::ChannelDecode;
};

Eigen::Matrix4cd choi_from_pauli_weights(const std::array<double, 4>& w);
EffectiveMap effective_map(const Code& code, const MapSpec& spec);
/// <Phi+| choi |Phi+>.
double jamiolkowski_fidelity(const EffectiveMap& m);

/// Smallest channel parameter in [lo, hi] from which the encoded map beats
/// unencoded transmission, by bisection on the sign change (channel built by
/// make_channel(channel_name, q)). Scenario ii with perfect resources.
double benefit_threshold(const Code& code, const std::string& channel_name, double lo, double hi, double tol = 1e-6);

// ---------------------------------------------------------------------------
// Sweeps.

enum class Approach { EppMeasurement, DirectMeasurement, GateBased, Unencoded };
std::string to_string(Approach a);

struct RegionOptions {
  Code code = Code::repetition_phaseflip(3);
  CommScenario scenario = CommScenario::ChannelDecode;
  GateNoiseKind noise = GateNoiseKind::BinaryLike;
  std::string channel = "phaseflip";
  int final_step = kP1;
  std::vector<double> gate_grid;
  std::vector<double> channel_grid;
};

struct RegionPoint {
  double p = 1.0;
  double q = 1.0;
  Approach approach = Approach::Unencoded;
  double jam_fidelity = 0.0;
  bool beats_unencoded = false;
  bool ok = true;
  std::string error;
};

/// Every (p, q, approach) triple; rows ordered by p, then q, then approach.
/// Gate parameters run on the worker pool; failures are kept in-band.
std::vector<RegionPoint> region_scan(const RegionOptions& options);

struct RegionBoundary {
  Approach approach = Approach::Unencoded;
  double p = 1.0;
  /// Smallest and largest sampled q that beat unencoded; NaN if none.
  double q_min = 0.0;
  double q_max = 0.0;
  int points = 0;
};
std::vector<RegionBoundary> region_boundaries(const std::vector<RegionPoint>& points);
/// True when every grid point where `inner` beats unencoded is also won by `outer`.
bool region_contains(const std::vector<RegionPoint>& points, Approach outer, Approach inner);

struct ByFidelityPoint {
  double gate_param = 1.0;
  /// lambda_0 shared by all three resources.
  double fidelity = 1.0;
  double epp = 0.0;
  double local_depolarizing = 0.0;
  double global_depolarizing = 0.0;
  double local_param = 1.0;
  double global_param = 1.0;
  bool ok = true;
  std::string error;
};

/// Decode-only Jamiolkowski fidelity of the EPP resource and of local and
/// global depolarized resources tuned to the same lambda_0.
std::vector<ByFidelityPoint> by_fidelity(const Code& code, const std::vector<double>& gate_grid, const PrepSpec& prep);

}  // namespace gsepp
