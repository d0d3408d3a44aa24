#pragma once

#include <string>
#include <vector>

#include "gsepp/diagonal.hpp"
#include "gsepp/graph.hpp"
#include "gsepp/noise.hpp"

namespace gsepp {

/// Purification steps are named by the color class whose correlation
/// operators get purified. On a two-colorable graph color 0 is set A, so step
/// 0 is P1 and step 1 is P2.
inline constexpr int kP1 = 0;
inline constexpr int kP2 = 1;

struct EppSchedule {
  /// Steps of one cycle; the last entry is the step that ends every cycle.
  std::vector<int> cycle{kP1, kP2};
  int max_cycles = 500;
  /// L-infinity change of the coefficients over one full cycle.
  double tolerance = 1e-12;
  /// Final step of the two-colorable EPP producing each auxiliary state
  /// (all-graph protocol only); empty means P2 for all.
  std::vector<int> aux_final;

  /// Strict P1/P2 alternation ending with `final_step`.
  static EppSchedule alternating(int final_step);
  /// Binary-like mixtures need only the squaring step P2.
  static EppSchedule p2_only();
  /// Colors 0..k-1 in cyclic order, arranged to end with `final_color`.
  static EppSchedule cyclic(int k, int final_color);

  int final_step() const { return cycle.back(); }
  void validate() const;
};

struct StepOutput {
  DiagonalState state;
  double success = 1.0;
};

struct EppResult {
  DiagonalState state;
  int cycles = 0;
  /// Success probability of every executed step, in order.
  std::vector<double> success;
  bool converged = false;
  /// Converged with lambda_0 the largest coefficient by kDistilledMargin; false when the
  /// iteration collapsed onto a useless fixed point such as the maximally
  /// mixed state.
  bool distilled = false;
  int final_step = kP1;
  double last_change = 0.0;
  std::string failure;  // set when a step failed outright
};

/// Relative gap by which lambda_0 must beat every other coefficient to count
/// as distilled; a collapsed fixed point is uniform up to round-off.
inline constexpr double kDistilledMargin = 1e-6;

/// Success probabilities below this abort the step.
inline constexpr double kMinSuccess = 1e-15;

/// One recurrence step. `aux` lives on auxiliary_graph(main graph, purified);
/// for two-colorable graphs purified with a copy of themselves that is the
/// main graph again. Vertices in `purified` use the auxiliary qubit as CNOT
/// source, all others the main qubit. Gate noise on vertex v uses the set-A
/// channel when v is in `side_a`. Throws std::runtime_error when the success
/// probability falls below kMinSuccess.
StepOutput purification_step(const DiagonalState& main, const DiagonalState& aux, Index purified,
                             const GateNoiseModel& model, Index side_a);
/// Same step evaluated on the full joint distribution of both states; exact
/// for every noise model and used to cross-check the factorised fast path.
StepOutput purification_step_joint(const DiagonalState& main, const DiagonalState& aux, Index purified,
                                   const GateNoiseModel& model, Index side_a);

/// P1 (which = kP1) or P2 (which = kP2) on two copies of s.
StepOutput p_step(const DiagonalState& s, const Coloring& coloring, const GateNoiseModel& model, int which);

/// Edges of g incident to `color_class`.
Graph auxiliary_graph(const Graph& g, Index color_class);

/// P_i of the all-graph protocol with aux[color] on auxiliary_graph(g, V_color).
StepOutput allgraph_step(const DiagonalState& s, const Coloring& coloring, const std::vector<DiagonalState>& aux,
                         const GateNoiseModel& model, int color);

/// Fixed points of the two-colorable EPP on every auxiliary graph.
std::vector<DiagonalState> auxiliary_states(const Graph& g, const Coloring& coloring, const GateNoiseModel& model,
                                            const std::vector<int>& aux_final, int max_cycles = 500,
                                            double tolerance = 1e-12);

/// Iterates the schedule until one full cycle changes the coefficients by
/// less than the tolerance. Two-colorable graphs purify two copies; other
/// graphs use the all-graph protocol with auxiliary states. Protocol failure
/// or exhausting max_cycles yields converged = false.
EppResult fixed_point(const GateNoiseModel& model, const DiagonalState& initial, const EppSchedule& schedule);
/// Variant with a caller-supplied coloring and, for k > 2, auxiliary states.
EppResult fixed_point(const GateNoiseModel& model, const DiagonalState& initial, const EppSchedule& schedule,
                      const Coloring& coloring, const std::vector<DiagonalState>& aux);

/// Resource state of the cluster-ring code prepared by purifying the
/// three-colorable LU-equivalent graph and changing basis by local
/// complementation. The schedule refers to colors of that graph.
EppResult purify_cluster_ring_resource(const GateNoiseModel& model, const EppSchedule& schedule,
                                       double initial_fidelity = 0.9);

}  // namespace gsepp
