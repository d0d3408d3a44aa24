#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gsepp/diagonal.hpp"
#include "gsepp/epp.hpp"
#include "gsepp/graph.hpp"
#include "gsepp/noise.hpp"

namespace gsepp {

/// Per-qubit Pauli channels; qubits with the same class id share one channel.
struct LocalNoiseModel {
  std::vector<PauliChannel> channels;
  std::vector<int> classes;  // empty: every qubit its own class

  static LocalNoiseModel identity(int n);
  static LocalNoiseModel uniform(int n, const PauliChannel& c);
  int size() const { return static_cast<int>(channels.size()); }
  void validate() const;
};

/// The local noise channels applied to |G><G|.
DiagonalState local_model_state(const LocalNoiseModel& m, const Graph& g);

/// Class id per qubit (0..k-1, ordered by first qubit) from the orbits of
/// the graph automorphisms that map every color class onto itself.
std::vector<int> symmetry_classes(const Graph& g, const Coloring& coloring);
/// Every qubit in its own class.
std::vector<int> trivial_classes(int n);

struct FitOptions {
  int restarts = 16;
  std::uint64_t seed = 1;
  /// Outer block-coordinate cycles stop once F improves by less than this.
  double tolerance = 1e-11;
  int max_outer_cycles = 200;
  int max_inner_iterations = 500;
};

struct FitReport {
  LocalNoiseModel model;
  /// Uhlmann fidelity sum sqrt(lambda_mu m_mu) of target and best model.
  double fidelity = 0.0;
  /// Same convention against the pure graph state: sqrt(lambda_0).
  double target_fidelity = 0.0;
  double one_minus_f() const { return 1.0 - fidelity; }
  /// (1 - F) / (1 - f); NaN for a pure target.
  double relative_deviation = 0.0;
  int restarts = 0;
  int restarts_converged = 0;
  int iterations = 0;
  bool converged = false;
  std::string message;
};

/// Closest local Pauli noise model by fidelity. Block-coordinate BFGS over
/// symmetry classes followed by a joint polish, repeated from `restarts`
/// seeded starting points (the first one is a deterministic guess).
FitReport fit_closest_local(const DiagonalState& target, const std::vector<int>& classes, const FitOptions& options = {});
FitReport fit_closest_local(const DiagonalState& target, const FitOptions& options = {});

/// Best fidelity over a grid of binary-like local models: D_x(a) on set A,
/// D_z(b) on set B, a and b stepped by `step` over [0, 1]. An independent
/// lower bound for fit_closest_local on binary-like targets.
double binary_like_grid_fidelity(const DiagonalState& target, const Coloring& coloring, double step = 0.01);

enum class GraphFamily { Ghz, LinearCluster, RingPurification, Ring };
GraphFamily parse_graph_family(const std::string& s);
std::string to_string(GraphFamily f);
/// GHZ: star with centre 0; linear cluster: path; ring purification: the three-colorable
/// six-qubit graph purified for the cluster-ring code; ring: cycle.
Graph family_graph(GraphFamily f, int n);

enum class GateNoiseKind { BinaryLike, LocalDepolarizing, CorrelatedDepolarizing };
GateNoiseKind parse_gate_noise(const std::string& s);
std::string to_string(GateNoiseKind k);
GateNoiseModel make_gate_noise(GateNoiseKind k, double p);

struct DeviationPoint {
  double gate_param = 1.0;
  double one_minus_F = 0.0;
  double relative_deviation = 0.0;
  double f = 1.0;  // sqrt(lambda_0) of the fixed point
  int restarts_converged = 0;
  bool ok = true;
  std::string error;
};

struct DeviationOptions {
  GraphFamily family = GraphFamily::Ghz;
  int n = 4;
  GateNoiseKind noise = GateNoiseKind::LocalDepolarizing;
  /// Step ending each cycle (two-colorable) or final color (all-graph).
  int final_step = kP2;
  double initial_fidelity = 0.9;
  FitOptions fit;
};

/// EPP fixed point and closest local model for every gate parameter; a
/// failing point is recorded and the sweep continues. Points run on the
/// worker pool.
std::vector<DeviationPoint> deviation_curve(const std::vector<double>& gate_params, const DeviationOptions& options);

/// Schedule used for a family: binary-like noise needs only P2; other
/// two-colorable cases alternate; all-graph cycles through the colors.
EppSchedule family_schedule(const Coloring& coloring, GateNoiseKind noise, int final_step);
/// Fixed point of the EPP for one deviation-curve point.
EppResult family_fixed_point(const DeviationOptions& options, double gate_param);

}  // namespace gsepp
