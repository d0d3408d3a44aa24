#include "gsepp/epp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gsepp {

EppSchedule EppSchedule::alternating(int final_step) {
  if (final_step != kP1 && final_step != kP2) throw std::invalid_argument("alternating schedule ends with P1 or P2");
  EppSchedule s;
  s.cycle = final_step == kP2 ? std::vector<int>{kP1, kP2} : std::vector<int>{kP2, kP1};
  return s;
}

EppSchedule EppSchedule::p2_only() {
  EppSchedule s;
  s.cycle = {kP2};
  return s;
}

EppSchedule EppSchedule::cyclic(int k, int final_color) {
  if (k < 1 || final_color < 0 || final_color >= k) throw std::invalid_argument("cyclic schedule: bad color");
  EppSchedule s;
  s.cycle.clear();
  for (int i = 1; i <= k; ++i) s.cycle.push_back((final_color + i) % k);
  return s;
}

void EppSchedule::validate() const {
  if (cycle.empty()) throw std::invalid_argument("EppSchedule: empty cycle");
  if (!(tolerance > 0.0)) throw std::invalid_argument("EppSchedule: tolerance must be positive");
  if (max_cycles < 1) throw std::invalid_argument("EppSchedule: max_cycles must be positive");
  for (int s : cycle)
    if (s < 0) throw std::invalid_argument("EppSchedule: negative step");
  for (int s : aux_final)
    if (s != kP1 && s != kP2) throw std::invalid_argument("EppSchedule: auxiliary end step must be P1 or P2");
}

namespace {

void check_step_inputs(const DiagonalState& main, const DiagonalState& aux, Index purified) {
  const Graph& g = main.graph();
  if (aux.size() != g.size()) throw std::invalid_argument("purification step: auxiliary size mismatch");
  for (int v = 0; v < g.size(); ++v)
    if (test_bit(purified, v) && (g.neighbors(v) & purified) != 0)
      throw std::invalid_argument("purification step: purified class is not independent");
  if (!(aux.graph() == auxiliary_graph(g, purified)))
    throw std::invalid_argument("purification step: auxiliary graph does not match the purified class");
}

// In-place Walsh-Hadamard transform over the bits in `bits`.
void walsh_hadamard(std::vector<double>& v, Index bits) {
  for (int b = 0; b < 64 && (bits >> b) != 0; ++b) {
    if (!test_bit(bits, b)) continue;
    const std::size_t m = std::size_t{1} << b;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i & m) continue;
      const double x = v[i];
      const double y = v[i | m];
      v[i] = x + y;
      v[i | m] = x - y;
    }
  }
}

std::vector<PauliChannel> per_vertex_channels(const GateNoiseModel& model, int n, Index side_a) {
  std::vector<PauliChannel> out;
  for (int v = 0; v < n; ++v) out.push_back(model.channel(test_bit(side_a, v) ? Side::A : Side::B));
  return out;
}

StepOutput finish(const Graph& g, std::vector<double> out) {
  double k = 0.0;
  for (double x : out) k += x;
  if (!(k >= kMinSuccess)) throw std::runtime_error("purification step failed: success probability vanished");
  for (double& x : out) x = std::max(0.0, x) / k;
  return {DiagonalState(g, std::move(out)), k};
}

}  // namespace

Graph auxiliary_graph(const Graph& g, Index color_class) {
  Graph aux(g.size());
  for (const auto& [a, b] : g.edges())
    if (test_bit(color_class, a) || test_bit(color_class, b)) aux.add_edge(a, b);
  return aux;
}

StepOutput purification_step(const DiagonalState& main, const DiagonalState& aux, Index purified,
                             const GateNoiseModel& model, Index side_a) {
  if (model.kind == GateNoiseModel::Kind::Correlated) return purification_step_joint(main, aux, purified, model, side_a);
  check_step_inputs(main, aux, purified);
  const int n = main.size();
  // Local gate noise factorises over the two states, so it can be applied
  // to each before the perfect step.
  const auto channels = per_vertex_channels(model, n, side_a);
  std::vector<double> f = apply_local_channels(main, channels).coeffs();
  std::vector<double> h = apply_local_channels(aux, channels).coeffs();

  // Surviving terms need mu_C = nu_C; the rest bits combine by XOR, which is
  // a convolution over those bits.
  const Index rest = low_mask(n) & ~purified;
  walsh_hadamard(f, rest);
  walsh_hadamard(h, rest);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] *= h[i];
  walsh_hadamard(f, rest);
  const double scale = 1.0 / static_cast<double>(Index{1} << popcount(rest));
  for (double& x : f) x *= scale;
  return finish(main.graph(), std::move(f));
}

StepOutput purification_step_joint(const DiagonalState& main, const DiagonalState& aux, Index purified,
                                   const GateNoiseModel& model, Index side_a) {
  check_step_inputs(main, aux, purified);
  const int n = main.size();
  const Graph& gm = main.graph();
  const Graph& ga = aux.graph();
  std::vector<double> joint = JointDiagonalState::product(main, DiagonalState(gm, aux.coeffs())).coeffs();

  for (int v = 0; v < n; ++v) {
    const Side side = test_bit(side_a, v) ? Side::A : Side::B;
    const TwoQubitPauliChannel pc = model.pair_channel(side);
    if (pc.p[0] == 1.0) continue;
    const bool aux_is_source = test_bit(purified, v);
    std::vector<std::pair<Index, double>> terms;
    for (int s = 0; s < 4; ++s) {
      for (int t = 0; t < 4; ++t) {
        const double w = pc.p[static_cast<std::size_t>(4 * s + t)];
        if (w == 0.0) continue;
        const Pauli on_main = static_cast<Pauli>(aux_is_source ? t : s);
        const Pauli on_aux = static_cast<Pauli>(aux_is_source ? s : t);
        const Index m = pauli_index_action(on_main, v, gm) | (pauli_index_action(on_aux, v, ga) << n);
        terms.emplace_back(m, w);
      }
    }
    joint = apply_mask_mixture(joint, terms);
  }

  std::vector<double> out(std::size_t{1} << n, 0.0);
  const Index full = low_mask(n);
  for (std::size_t idx = 0; idx < joint.size(); ++idx) {
    const Index j2 = multilateral_cnot_index(idx, n, purified);
    if (((j2 >> n) & purified) == 0) out[j2 & full] += joint[idx];
  }
  return finish(gm, std::move(out));
}

StepOutput p_step(const DiagonalState& s, const Coloring& coloring, const GateNoiseModel& model, int which) {
  if (!coloring.two_colorable()) throw std::invalid_argument("p_step: graph is not two-colorable");
  if (which != kP1 && which != kP2) throw std::invalid_argument("p_step: which must be P1 or P2");
  return purification_step(s, s, coloring.members(which), model, coloring.set_a());
}

StepOutput allgraph_step(const DiagonalState& s, const Coloring& coloring, const std::vector<DiagonalState>& aux,
                         const GateNoiseModel& model, int color) {
  if (color < 0 || color >= coloring.k) throw std::invalid_argument("allgraph_step: color out of range");
  if (static_cast<int>(aux.size()) != coloring.k) throw std::invalid_argument("allgraph_step: one auxiliary state per color");
  const Index cls = coloring.members(color);
  // Local gate noise type follows the two-coloring of the auxiliary graph.
  return purification_step(s, aux[static_cast<std::size_t>(color)], cls, model, cls);
}

std::vector<DiagonalState> auxiliary_states(const Graph& g, const Coloring& coloring, const GateNoiseModel& model,
                                            const std::vector<int>& aux_final, int max_cycles, double tolerance) {
  std::vector<DiagonalState> out;
  for (int c = 0; c < coloring.k; ++c) {
    const Index cls = coloring.members(c);
    const Graph ag = auxiliary_graph(g, cls);
    const Coloring ac = two_coloring(ag, cls);
    EppSchedule sched = EppSchedule::alternating(aux_final.empty() ? kP2 : aux_final.at(static_cast<std::size_t>(c)));
    sched.max_cycles = max_cycles;
    sched.tolerance = tolerance;
    EppResult r = fixed_point(model, DiagonalState::isotropic(ag, 0.95), sched, ac, {});
    if (!r.converged) throw std::runtime_error("auxiliary state EPP did not converge for color " + std::to_string(c));
    out.push_back(std::move(r.state));
  }
  return out;
}

EppResult fixed_point(const GateNoiseModel& model, const DiagonalState& initial, const EppSchedule& schedule) {
  const Coloring c = color(initial.graph());
  if (c.k <= 2) return fixed_point(model, initial, schedule, c, {});
  return fixed_point(model, initial, schedule, c, auxiliary_states(initial.graph(), c, model, schedule.aux_final));
}

EppResult fixed_point(const GateNoiseModel& model, const DiagonalState& initial, const EppSchedule& schedule,
                      const Coloring& coloring, const std::vector<DiagonalState>& aux) {
  schedule.validate();
  for (int s : schedule.cycle)
    if (s >= std::max(coloring.k, 2)) throw std::invalid_argument("schedule step exceeds the number of colors");
  const bool two = coloring.k <= 2;
  if (!two && static_cast<int>(aux.size()) != coloring.k)
    throw std::invalid_argument("fixed_point: all-graph protocol needs one auxiliary state per color");

  EppResult r;
  r.state = initial;
  r.final_step = schedule.final_step();
  for (r.cycles = 1; r.cycles <= schedule.max_cycles; ++r.cycles) {
    const DiagonalState before = r.state;
    try {
      for (int step : schedule.cycle) {
        StepOutput o = two ? p_step(r.state, coloring, model, step) : allgraph_step(r.state, coloring, aux, model, step);
        r.state = std::move(o.state);
        r.success.push_back(o.success);
      }
    } catch (const std::runtime_error& e) {
      r.failure = e.what();
      r.converged = false;
      return r;
    }
    double change = 0.0;
    for (std::size_t i = 0; i < before.dimension(); ++i) change = std::max(change, std::abs(before[i] - r.state[i]));
    r.last_change = change;
    if (change < schedule.tolerance) {
      r.converged = true;
      const auto& c = r.state.coeffs();
      r.distilled = std::all_of(c.begin() + 1, c.end(), [&](double x) { return x * (1.0 + kDistilledMargin) < c[0]; });
      return r;
    }
  }
  r.cycles = schedule.max_cycles;
  return r;
}

EppResult purify_cluster_ring_resource(const GateNoiseModel& model, const EppSchedule& schedule, double initial_fidelity) {
  const Graph g = ring_purification_graph();
  EppResult r = fixed_point(model, DiagonalState::isotropic(g, initial_fidelity), schedule);
  r.state = local_complement_state(r.state, kRingPurificationPivot);
  return r;
}

}  // namespace gsepp
