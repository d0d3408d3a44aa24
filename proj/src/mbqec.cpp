#include "gsepp/mbqec.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "gsepp/parallel.hpp"

namespace gsepp {

namespace {

Pauli letter(bool x, bool z) {
  if (x && z) return Pauli::Y;
  if (x) return Pauli::X;
  if (z) return Pauli::Z;
  return Pauli::I;
}

bool has_x(Pauli p) { return p == Pauli::X || p == Pauli::Y; }
bool has_z(Pauli p) { return p == Pauli::Z || p == Pauli::Y; }

Pauli product(Pauli a, Pauli b) { return letter(has_x(a) != has_x(b), has_z(a) != has_z(b)); }

// Bits of letter p on qubit q in the x | (z << n) key layout.
Index letter_key(Pauli p, int q, int n) {
  Index k = 0;
  if (has_x(p)) k |= bit(q);
  if (has_z(p)) k |= bit(q + n);
  return k;
}

Pauli key_letter(Index key, int q, int n) { return letter(test_bit(key, q), test_bit(key, q + n)); }

PauliString hadamard_frame(const PauliString& p) { return PauliString(p.size(), p.z(), p.x()); }

Code code_from_resource(CodeKind kind, int n, Graph g, bool frame) {
  Code c;
  c.kind = kind;
  c.n = n;
  c.resource_graph = std::move(g);
  c.hadamard_frame = frame;
  const Index n0 = c.resource_graph.neighbors(0) >> 1;
  if (n0 == 0) throw std::invalid_argument("code resource: logical vertex has no neighbors");
  // Correlation operators of the physical graph; |0_L> is that graph state
  // and |1_L> = Z^{N(0)} |0_L>.
  std::vector<PauliString> k;
  for (int j = 0; j < n; ++j) k.emplace_back(n, bit(j), (c.resource_graph.neighbors(j + 1) >> 1) & ~bit(j));
  int j0 = 0;
  while (!test_bit(n0, j0)) ++j0;
  c.logical_x = PauliString(n, 0, n0);
  c.logical_z = k[static_cast<std::size_t>(j0)];
  for (int j = 0; j < n; ++j) {
    if (j == j0) continue;
    c.stabilizers.push_back(test_bit(n0, j) ? k[static_cast<std::size_t>(j0)] * k[static_cast<std::size_t>(j)]
                                            : k[static_cast<std::size_t>(j)]);
  }
  for (auto& s : c.stabilizers) s = s.with_phase(0);
  if (frame) {
    for (auto& s : c.stabilizers) s = hadamard_frame(s);
    c.logical_x = hadamard_frame(c.logical_x);
    c.logical_z = hadamard_frame(c.logical_z);
  }
  return c;
}

void check_repetition(int n) {
  if (n < 3 || n % 2 == 0) throw std::invalid_argument("repetition code: n must be odd and >= 3");
  if (n > 9) throw std::invalid_argument("repetition code: n > 9 exceeds the enumeration budget");
}

// Single-letter errors of weight <= t, identity first, lower weights first.
std::vector<PauliString> low_weight_errors(int n, int t, Pauli p) {
  std::vector<PauliString> out;
  for (int w = 0; w <= t; ++w)
    for (Index m = 0; m < bit(n); ++m) {
      if (popcount(m) != w) continue;
      PauliString e(n);
      for (int q = 0; q < n; ++q)
        if (test_bit(m, q)) e.set(q, p);
      out.push_back(e);
    }
  return out;
}

std::vector<PauliString> group_generators(const Code& code) {
  std::vector<PauliString> g = code.stabilizers;
  g.push_back(code.logical_x);
  g.push_back(code.logical_z);
  return g;
}

PauliString subset_product(const std::vector<PauliString>& gens, Index subset, int n) {
  PauliString p(n);
  for (std::size_t i = 0; i < gens.size(); ++i)
    if (test_bit(subset, static_cast<int>(i))) p *= gens[i];
  return p.with_phase(0);
}

}  // namespace

// ---------------------------------------------------------------------------
// Codes.

Code Code::repetition_bitflip(int n) {
  check_repetition(n);
  Code c = code_from_resource(CodeKind::RepetitionBitflip, n, Graph::star(n + 1, 0), true);
  c.correctable = low_weight_errors(n, (n - 1) / 2, Pauli::X);
  return c;
}

Code Code::repetition_phaseflip(int n) {
  check_repetition(n);
  Code c = code_from_resource(CodeKind::RepetitionPhaseflip, n, Graph::star(n + 1, 0), false);
  c.correctable = low_weight_errors(n, (n - 1) / 2, Pauli::Z);
  return c;
}

Code Code::cluster_ring() {
  Code c = code_from_resource(CodeKind::ClusterRing, 5, cluster_ring_resource_graph(), false);
  c.correctable.emplace_back(5);
  for (int q = 0; q < 5; ++q)
    for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) c.correctable.push_back(PauliString::single(5, q, p));
  return c;
}

std::string Code::name() const {
  switch (kind) {
    case CodeKind::RepetitionBitflip: return "repetition-bitflip:" + std::to_string(n);
    case CodeKind::RepetitionPhaseflip: return "repetition-phaseflip:" + std::to_string(n);
    case CodeKind::ClusterRing: return "cluster-ring";
  }
  return "?";
}

Index Code::key(const PauliString& p) const {
  if (p.size() != n) throw std::invalid_argument("Code::key: size mismatch");
  return p.x() | (p.z() << n);
}

PauliString Code::from_key(Index k) const { return PauliString(n, k & low_mask(n), (k >> n) & low_mask(n)); }

std::string to_string(CodeKind k) {
  switch (k) {
    case CodeKind::RepetitionBitflip: return "repetition-bitflip";
    case CodeKind::RepetitionPhaseflip: return "repetition-phaseflip";
    case CodeKind::ClusterRing: return "cluster-ring";
  }
  return "?";
}

Code parse_code(const std::string& name) {
  if (name == "repetition3") return Code::repetition_bitflip(3);
  if (name == "cluster-ring") return Code::cluster_ring();
  std::string base = name;
  int n = 3;
  if (const auto colon = name.find(':'); colon != std::string::npos) {
    base = name.substr(0, colon);
    try {
      std::size_t used = 0;
      n = std::stoi(name.substr(colon + 1), &used);
      if (used != name.size() - colon - 1) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw std::invalid_argument("bad code size in '" + name + "'");
    }
  }
  if (base == "repetition-bitflip") return Code::repetition_bitflip(n);
  if (base == "repetition-phaseflip") return Code::repetition_phaseflip(n);
  throw std::invalid_argument("unknown code '" + name + "'");
}

bool preserves_code(const Code& code, const PauliString& p) {
  return std::all_of(code.stabilizers.begin(), code.stabilizers.end(), [&](const PauliString& s) { return s.commutes_with(p); });
}

Pauli logical_action(const Code& code, const PauliString& p) {
  if (!preserves_code(code, p)) throw std::invalid_argument("logical_action: operator leaves the code space");
  return letter(!p.commutes_with(code.logical_z), !p.commutes_with(code.logical_x));
}

PauliString resource_error(const Code& code, Index mu) {
  const int m = code.n + 1;
  PauliString z(m, 0, mu & low_mask(m));
  if (!code.hadamard_frame) return z;
  // H on vertices 1..n turns their Z into X.
  const Index phys = mu & ~Index{1} & low_mask(m);
  return PauliString(m, phys, mu & 1);
}

// ---------------------------------------------------------------------------
// Correction tables.

bool CorrectionTable::complete() const {
  return std::all_of(entries.begin(), entries.end(), [](const CorrectionEntry& e) { return e.error >= 0; });
}

CorrectionTable derive_correction_table(const Code& code) {
  CorrectionTable t;
  t.n = code.n;
  t.errors = code.correctable;
  t.entries.assign(code.patterns(), {});
  for (std::size_t i = 0; i < t.errors.size(); ++i) {
    const PauliString& e = t.errors[i];
    for (Index s = 0; s < code.patterns(); ++s) {
      // Outcome s acts like sigma_s on the input; it occurs iff sigma_s E
      // maps the code space onto itself, and the output then carries the
      // logical action of sigma_s E.
      const PauliString total = code.from_key(s) * e;
      if (!preserves_code(code, total)) continue;
      const Pauli corr = logical_action(code, total);
      CorrectionEntry& slot = t.entries[s];
      if (slot.error < 0) {
        slot = {static_cast<int>(i), corr};
      } else if (slot.correction != corr) {
        throw std::runtime_error("correction table: errors " + t.errors[static_cast<std::size_t>(slot.error)].letters() +
                                 " and " + e.letters() + " share pattern " + code.from_key(s).letters());
      }
    }
  }
  if (!t.complete()) throw std::runtime_error("correction table: some outcome patterns match no listed error");
  return t;
}

std::vector<PatternRow> no_error_patterns(const Code& code, const CorrectionTable& table) {
  std::vector<PatternRow> rows;
  const PauliString bases[] = {PauliString(code.n), code.logical_z, code.logical_x, code.logical_x * code.logical_z};
  const Index subsets = bit(static_cast<int>(code.stabilizers.size()));
  for (const auto& base : bases)
    for (Index m = 0; m < subsets; ++m) {
      const PauliString s = (base * subset_product(code.stabilizers, m, code.n)).with_phase(0);
      const CorrectionEntry& e = table.lookup(code.key(s));
      if (e.error != 0) throw std::logic_error("no_error_patterns: pattern is not assigned to the identity error");
      rows.push_back({s, e.correction});
    }
  return rows;
}

std::vector<Pauli> measurement_decoding_map(const Code& code, const CorrectionTable& table) {
  const auto gens = group_generators(code);
  const Index group = bit(static_cast<int>(gens.size()));
  std::vector<PauliString> elements;
  std::vector<Pauli> element_logical;
  for (Index m = 0; m < group; ++m) {
    elements.push_back(subset_product(gens, m, code.n));
    element_logical.push_back(logical_action(code, elements.back()));
  }
  std::vector<Pauli> out(code.patterns(), Pauli::I);
  for (Index k = 0; k < code.patterns(); ++k) {
    const PauliString p = code.from_key(k);
    for (std::size_t g = 0; g < elements.size(); ++g) {
      // Outcome s = P g; the output then carries L(s P) = L(g).
      const CorrectionEntry& e = table.lookup(code.key(p * elements[g]));
      if (e.error < 0) throw std::runtime_error("decoding map: outcome pattern missing from the table");
      const Pauli result = product(e.correction, element_logical[g]);
      if (g == 0) {
        out[k] = result;
      } else if (result != out[k]) {
        throw std::runtime_error("decoding map: table is inconsistent on the outcomes of " + p.letters());
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Circuits.

std::vector<CircuitGate> encoding_circuit(const Code& code) {
  std::vector<CircuitGate> c;
  const int n = code.n;
  if (code.kind == CodeKind::RepetitionBitflip) {
    for (int j = 1; j < n; ++j) c.push_back({Clifford::CNOT, {0, j}});
    return c;
  }
  // Ancillas in |+>: CNOTs into qubit 0 copy its X-basis value outwards.
  c.push_back({Clifford::H, {0}});
  for (int j = 1; j < n; ++j) c.push_back({Clifford::CNOT, {j, 0}});
  for (const auto& [a, b] : code.resource_graph.edges())
    if (a > 0 && b > 0) c.push_back({Clifford::CZ, {a - 1, b - 1}});
  return c;
}

std::vector<CircuitGate> decoding_circuit(const Code& code) {
  auto c = encoding_circuit(code);
  std::reverse(c.begin(), c.end());
  return c;
}

Basis ancilla_basis(const Code& code) { return code.kind == CodeKind::RepetitionBitflip ? Basis::Z : Basis::X; }

namespace {

// Syndrome bit j-1 flips when the frame on measured qubit j anticommutes
// with the measurement.
unsigned syndrome_of(Index key, int n, Basis b) {
  unsigned s = 0;
  for (int j = 1; j < n; ++j) {
    const Pauli l = key_letter(key, j, n);
    if (b == Basis::Z ? has_x(l) : has_z(l)) s |= 1U << (j - 1);
  }
  return s;
}

std::vector<Index> permutation(const CircuitGate& g, int n) {
  std::vector<Index> perm(std::size_t{1} << (2 * n));
  for (Index k = 0; k < perm.size(); ++k) {
    const PauliString p(n, k & low_mask(n), (k >> n) & low_mask(n));
    const PauliString q = conjugate_pauli_through_clifford(p, g.gate, g.qubits);
    perm[k] = q.x() | (q.z() << n);
  }
  return perm;
}

// Mixes a two-qubit Pauli channel on (a, b) into the distribution.
PauliDistribution mix_pair(const PauliDistribution& d, int n, int a, int b, const TwoQubitPauliChannel& c) {
  PauliDistribution out(d.size(), 0.0);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const double w = c.p[static_cast<std::size_t>(4 * i + j)];
      if (w == 0.0) continue;
      const Index m = letter_key(static_cast<Pauli>(i), a, n) ^ letter_key(static_cast<Pauli>(j), b, n);
      for (Index k = 0; k < d.size(); ++k) out[k ^ m] += w * d[k];
    }
  return out;
}

PauliDistribution mix_single(const PauliDistribution& d, int n, int q, const PauliChannel& c) {
  PauliDistribution out(d.size(), 0.0);
  for (int i = 0; i < 4; ++i) {
    const double w = c.p[static_cast<std::size_t>(i)];
    if (w == 0.0) continue;
    const Index m = letter_key(static_cast<Pauli>(i), q, n);
    for (Index k = 0; k < d.size(); ++k) out[k ^ m] += w * d[k];
  }
  return out;
}

}  // namespace

std::vector<Pauli> derive_gate_syndrome_table(const Code& code) {
  const int n = code.n;
  const auto circuit = decoding_circuit(code);
  const Basis b = ancilla_basis(code);
  std::vector<int> filled(std::size_t{1} << (n - 1), -1);
  std::vector<Pauli> table(filled.size(), Pauli::I);
  for (std::size_t i = 0; i < code.correctable.size(); ++i) {
    PauliString f = code.correctable[i];
    for (const auto& g : circuit) f = conjugate_pauli_through_clifford(f, g.gate, g.qubits);
    const Index k = code.key(f);
    const unsigned s = syndrome_of(k, n, b);
    const Pauli residual = key_letter(k, 0, n);
    if (filled[s] >= 0 && table[s] != residual)
      throw std::runtime_error("gate syndrome table: errors " + code.correctable[static_cast<std::size_t>(filled[s])].letters() +
                               " and " + code.correctable[i].letters() + " collide");
    if (filled[s] < 0) filled[s] = static_cast<int>(i), table[s] = residual;
  }
  if (std::any_of(filled.begin(), filled.end(), [](int f) { return f < 0; }))
    throw std::runtime_error("gate syndrome table: unassigned syndrome");
  return table;
}

PauliDistribution identity_distribution(int n) {
  PauliDistribution d(std::size_t{1} << (2 * n), 0.0);
  d[0] = 1.0;
  return d;
}

PauliDistribution propagate(const PauliDistribution& d, int n, const std::vector<CircuitGate>& circuit, const GateNoiseModel& model) {
  PauliDistribution cur = d;
  for (const auto& g : circuit) {
    if (clifford_arity(g.gate) == 2 && !model.is_perfect()) {
      const int a = g.qubits.at(0), b = g.qubits.at(1);
      if (model.kind == GateNoiseModel::Kind::Correlated) {
        cur = mix_pair(cur, n, a, b, model.joint);
      } else {
        cur = mix_single(cur, n, a, model.channel(a == 0 ? Side::A : Side::B));
        cur = mix_single(cur, n, b, model.channel(b == 0 ? Side::A : Side::B));
      }
    }
    const auto perm = permutation(g, n);
    PauliDistribution next(cur.size(), 0.0);
    for (Index k = 0; k < cur.size(); ++k) next[perm[k]] += cur[k];
    cur = std::move(next);
  }
  return cur;
}

PauliDistribution apply_channel(const PauliDistribution& d, int n, const PauliChannel& c) {
  PauliDistribution cur = d;
  for (int q = 0; q < n; ++q) cur = mix_single(cur, n, q, c);
  return cur;
}

PauliDistribution combine(const PauliDistribution& a, const PauliDistribution& b, int n) {
  const std::size_t size = std::size_t{1} << (2 * n);
  if (a.size() != size || b.size() != size) throw std::invalid_argument("combine: size mismatch");
  PauliDistribution out(size, 0.0);
  for (Index i = 0; i < size; ++i) {
    if (a[i] == 0.0) continue;
    for (Index j = 0; j < size; ++j) out[i ^ j] += a[i] * b[j];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Resources.

PrepKind parse_prep(const std::string& s) {
  if (s == "perfect") return PrepKind::Perfect;
  if (s == "epp") return PrepKind::Epp;
  if (s == "direct-gates") return PrepKind::DirectGates;
  throw std::invalid_argument("unknown preparation '" + s + "'");
}

std::string to_string(PrepKind k) {
  switch (k) {
    case PrepKind::Perfect: return "perfect";
    case PrepKind::Epp: return "epp";
    case PrepKind::DirectGates: return "direct-gates";
  }
  return "?";
}

DiagonalState direct_gate_state(const Graph& g, const GateNoiseModel& model, Index side_a) {
  const int n = g.size();
  Graph cur(n);
  DiagonalState s = DiagonalState::pure(cur);
  for (const auto& [a, b] : g.edges()) {
    if (!model.is_perfect()) {
      if (model.kind == GateNoiseModel::Kind::Correlated) {
        std::vector<std::pair<Index, double>> terms;
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 4; ++j) {
            const double w = model.joint.p[static_cast<std::size_t>(4 * i + j)];
            if (w > 0.0)
              terms.emplace_back(pauli_index_action(static_cast<Pauli>(i), a, cur) ^ pauli_index_action(static_cast<Pauli>(j), b, cur), w);
          }
        s = DiagonalState(cur, apply_mask_mixture(s.coeffs(), terms));
      } else {
        s = apply_local_channel(s, a, model.channel(test_bit(side_a, a) ? Side::A : Side::B));
        s = apply_local_channel(s, b, model.channel(test_bit(side_a, b) ? Side::A : Side::B));
      }
    }
    // Z-type patterns commute with CZ, so the coefficients carry over.
    cur.add_edge(a, b);
    s = DiagonalState(cur, s.coeffs());
  }
  return s;
}

ResourceState build_resource(const Code& code, Role role, const PrepSpec& prep) {
  ResourceState r{DiagonalState::pure(code.resource_graph), {}, {}, role};
  for (int v = 1; v <= code.n; ++v) (role == Role::Encode ? r.outputs : r.inputs).push_back(v);
  (role == Role::Encode ? r.inputs : r.outputs).push_back(0);
  if (!(prep.gate_param >= 0.0 && prep.gate_param <= 1.0)) throw std::invalid_argument("build_resource: gate parameter outside [0, 1]");
  const GateNoiseModel model = make_gate_noise(prep.noise, prep.gate_param);
  switch (prep.kind) {
    case PrepKind::Perfect: break;
    case PrepKind::DirectGates: r.state = direct_gate_state(code.resource_graph, model, bit(0)); break;
    case PrepKind::Epp: {
      EppResult e;
      if (code.kind == CodeKind::ClusterRing) {
        EppSchedule s = EppSchedule::cyclic(3, prep.final_step);
        s.aux_final = prep.aux_final;
        e = purify_cluster_ring_resource(model, s, prep.initial_fidelity);
      } else {
        DeviationOptions o;
        o.family = GraphFamily::Ghz;
        o.n = code.n + 1;
        o.noise = prep.noise;
        o.final_step = prep.final_step;
        o.initial_fidelity = prep.initial_fidelity;
        e = family_fixed_point(o, prep.gate_param);
      }
      if (!e.converged) throw std::runtime_error(e.failure.empty() ? "EPP did not converge" : e.failure);
      if (!e.distilled) throw std::runtime_error("EPP fixed point is not distilled");
      r.state = e.state;
      break;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Effective maps.

CommScenario parse_scenario_name(const std::string& s) {
  if (s == "decode-only") return CommScenario::DecodeOnly;
  if (s == "channel+decode") return CommScenario::ChannelDecode;
  if (s == "encode+channel+decode") return CommScenario::EncodeChannelDecode;
  if (s == "unencoded") return CommScenario::Unencoded;
  throw std::invalid_argument("unknown scenario '" + s + "'");
}

std::string to_string(CommScenario s) {
  switch (s) {
    case CommScenario::DecodeOnly: return "decode-only";
    case CommScenario::ChannelDecode: return "channel+decode";
    case CommScenario::EncodeChannelDecode: return "encode+channel+decode";
    case CommScenario::Unencoded: return "unencoded";
  }
  return "?";
}

Eigen::Matrix4cd choi_from_pauli_weights(const std::array<double, 4>& w) {
  Eigen::Vector4cd phi = Eigen::Vector4cd::Zero();
  phi(0) = phi(3) = 1.0 / std::sqrt(2.0);
  Eigen::Matrix4cd choi = Eigen::Matrix4cd::Zero();
  for (int i = 0; i < 4; ++i) {
    // Basis index r | (o << 1): reference r, output o.
    const Mat2 s = pauli_mat(static_cast<Pauli>(i));
    Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
    for (int r = 0; r < 2; ++r)
      for (int o2 = 0; o2 < 2; ++o2)
        for (int o = 0; o < 2; ++o) v(r | (o2 << 1)) += s(o2, o) * phi(r | (o << 1));
    choi += w[static_cast<std::size_t>(i)] * v * v.adjoint();
  }
  return choi;
}

double jamiolkowski_fidelity(const EffectiveMap& m) {
  Eigen::Vector4cd phi = Eigen::Vector4cd::Zero();
  phi(0) = phi(3) = 1.0 / std::sqrt(2.0);
  return std::clamp((phi.adjoint() * m.choi * phi)(0).real(), 0.0, 1.0);
}

namespace {

struct ResourceTerm {
  Pauli logical;  // error on vertex 0
  Index phys;     // key of the error on vertices 1..n
  double weight;
};

std::vector<ResourceTerm> resource_terms(const Code& code, const DiagonalState& s) {
  if (s.graph() != code.resource_graph) throw std::invalid_argument("effective_map: resource is not on the code's graph");
  std::vector<ResourceTerm> out;
  for (Index mu = 0; mu < s.dimension(); ++mu) {
    if (s[mu] == 0.0) continue;
    const PauliString e = resource_error(code, mu);
    const Index phys = ((e.x() >> 1) & low_mask(code.n)) | (((e.z() >> 1) & low_mask(code.n)) << code.n);
    out.push_back({e.at(0), phys, s[mu]});
  }
  return out;
}

}  // namespace

EffectiveMap effective_map(const Code& code, const MapSpec& spec) {
  EffectiveMap m;
  m.scenario = spec.scenario;
  if (spec.scenario == CommScenario::Unencoded) {
    m.logical = spec.channel.p;
    m.choi = choi_from_pauli_weights(m.logical);
    return m;
  }
  const int n = code.n;
  const std::size_t size = code.patterns();
  const bool mb = spec.impl == DecodeImpl::MeasurementBased;

  // joint[e][P]: logical error before encoding and physical frame.
  std::array<PauliDistribution, 4> joint;
  for (auto& j : joint) j.assign(size, 0.0);
  if (spec.scenario == CommScenario::EncodeChannelDecode) {
    if (mb) {
      if (!spec.encode_resource) throw std::invalid_argument("effective_map: encoding resource missing");
      for (const auto& t : resource_terms(code, *spec.encode_resource)) joint[static_cast<std::size_t>(t.logical)][t.phys] += t.weight;
    } else {
      joint[0] = propagate(identity_distribution(n), n, encoding_circuit(code), spec.gate_noise);
    }
  } else {
    joint[0][0] = 1.0;
  }
  if (spec.scenario != CommScenario::DecodeOnly)
    for (auto& j : joint) j = apply_channel(j, n, spec.channel);

  std::array<double, 4> out{};
  if (mb) {
    if (!spec.decode_resource) throw std::invalid_argument("effective_map: decoding resource missing");
    const auto terms = resource_terms(code, *spec.decode_resource);
    if (4.0 * static_cast<double>(size) * static_cast<double>(terms.size()) > kMaxEnumeration)
      throw std::runtime_error("effective_map: enumeration exceeds the size cap");
    const auto table = derive_correction_table(code);
    const auto decode = measurement_decoding_map(code, table);
    for (int e = 0; e < 4; ++e)
      for (Index p = 0; p < size; ++p) {
        const double w = joint[static_cast<std::size_t>(e)][p];
        if (w == 0.0) continue;
        for (const auto& t : terms) {
          const Pauli l = product(product(static_cast<Pauli>(e), decode[p ^ t.phys]), t.logical);
          out[static_cast<std::size_t>(l)] += w * t.weight;
        }
      }
  } else {
    const auto table = derive_gate_syndrome_table(code);
    const auto circuit = decoding_circuit(code);
    const Basis b = ancilla_basis(code);
    for (int e = 0; e < 4; ++e) {
      const auto after = propagate(joint[static_cast<std::size_t>(e)], n, circuit, spec.gate_noise);
      for (Index k = 0; k < size; ++k) {
        if (after[k] == 0.0) continue;
        const Pauli l = product(product(key_letter(k, 0, n), table[syndrome_of(k, n, b)]), static_cast<Pauli>(e));
        out[static_cast<std::size_t>(l)] += after[k];
      }
    }
  }
  m.logical = out;
  m.choi = choi_from_pauli_weights(out);
  return m;
}

double benefit_threshold(const Code& code, const std::string& channel_name, double lo, double hi, double tol) {
  MapSpec spec;
  spec.scenario = CommScenario::ChannelDecode;
  spec.decode_resource = DiagonalState::pure(code.resource_graph);
  auto gain = [&](double q) {
    spec.channel = make_channel(channel_name, q);
    return jamiolkowski_fidelity(effective_map(code, spec)) - spec.channel.p[0];
  };
  double glo = gain(lo), ghi = gain(hi);
  if (!(glo < 0.0 && ghi > 0.0)) throw std::runtime_error("benefit_threshold: no sign change on the bracket");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (gain(mid) > 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// Sweeps.

std::string to_string(Approach a) {
  switch (a) {
    case Approach::EppMeasurement: return "epp";
    case Approach::DirectMeasurement: return "direct-gates";
    case Approach::GateBased: return "gate-based";
    case Approach::Unencoded: return "unencoded";
  }
  return "?";
}

std::vector<RegionPoint> region_scan(const RegionOptions& o) {
  if (o.scenario != CommScenario::ChannelDecode && o.scenario != CommScenario::EncodeChannelDecode)
    throw std::invalid_argument("region_scan: scenario must involve the channel");
  const std::size_t nq = o.channel_grid.size();
  constexpr Approach kOrder[] = {Approach::EppMeasurement, Approach::DirectMeasurement, Approach::GateBased, Approach::Unencoded};
  std::vector<RegionPoint> out(o.gate_grid.size() * nq * 4);
  parallel_for(o.gate_grid.size(), [&](std::size_t i) {
    const double p = o.gate_grid[i];
    PrepSpec prep;
    prep.noise = o.noise;
    prep.gate_param = p;
    prep.final_step = o.final_step;
    std::optional<DiagonalState> epp, direct;
    std::string epp_error, direct_error;
    try {
      prep.kind = PrepKind::Epp;
      epp = build_resource(o.code, Role::Decode, prep).state;
    } catch (const std::exception& e) {
      epp_error = e.what();
    }
    try {
      prep.kind = PrepKind::DirectGates;
      direct = build_resource(o.code, Role::Decode, prep).state;
    } catch (const std::exception& e) {
      direct_error = e.what();
    }
    const GateNoiseModel gates = make_gate_noise(o.noise, p);
    for (std::size_t j = 0; j < nq; ++j) {
      const double q = o.channel_grid[j];
      MapSpec spec;
      spec.scenario = o.scenario;
      RegionPoint* row = &out[(i * nq + j) * 4];
      double unencoded = 0.0;
      try {
        spec.channel = make_channel(o.channel, q);
        unencoded = spec.channel.p[0];
      } catch (const std::exception& e) {
        for (int a = 0; a < 4; ++a) row[a] = {p, q, kOrder[a], 0.0, false, false, e.what()};
        continue;
      }
      auto eval = [&](int a, const std::optional<DiagonalState>& res, const std::string& err, DecodeImpl impl) {
        RegionPoint& pt = row[a];
        pt = {p, q, kOrder[a], 0.0, false, true, {}};
        try {
          if (impl == DecodeImpl::MeasurementBased && !res) throw std::runtime_error(err);
          MapSpec s = spec;
          s.impl = impl;
          s.decode_resource = res;
          s.encode_resource = res;
          s.gate_noise = gates;
          pt.jam_fidelity = jamiolkowski_fidelity(effective_map(o.code, s));
          pt.beats_unencoded = pt.jam_fidelity > unencoded + 1e-12;
        } catch (const std::exception& e) {
          pt.ok = false;
          pt.error = e.what();
        }
      };
      eval(0, epp, epp_error, DecodeImpl::MeasurementBased);
      eval(1, direct, direct_error, DecodeImpl::MeasurementBased);
      eval(2, std::nullopt, {}, DecodeImpl::GateBased);
      row[3] = {p, q, Approach::Unencoded, unencoded, false, true, {}};
    }
  });
  return out;
}

std::vector<RegionBoundary> region_boundaries(const std::vector<RegionPoint>& points) {
  std::map<std::pair<int, double>, RegionBoundary> acc;
  for (const auto& pt : points) {
    if (pt.approach == Approach::Unencoded) continue;
    auto [it, fresh] = acc.try_emplace({static_cast<int>(pt.approach), pt.p});
    RegionBoundary& b = it->second;
    if (fresh) {
      b.approach = pt.approach;
      b.p = pt.p;
      b.q_min = b.q_max = std::numeric_limits<double>::quiet_NaN();
    }
    if (!pt.ok || !pt.beats_unencoded) continue;
    b.q_min = b.points == 0 ? pt.q : std::min(b.q_min, pt.q);
    b.q_max = b.points == 0 ? pt.q : std::max(b.q_max, pt.q);
    ++b.points;
  }
  std::vector<RegionBoundary> out;
  for (auto& [k, b] : acc) out.push_back(b);
  return out;
}

bool region_contains(const std::vector<RegionPoint>& points, Approach outer, Approach inner) {
  std::map<std::pair<double, double>, bool> wins;
  for (const auto& pt : points)
    if (pt.approach == outer) wins[{pt.p, pt.q}] = pt.ok && pt.beats_unencoded;
  for (const auto& pt : points)
    if (pt.approach == inner && pt.ok && pt.beats_unencoded && !wins[{pt.p, pt.q}]) return false;
  return true;
}

std::vector<ByFidelityPoint> by_fidelity(const Code& code, const std::vector<double>& gate_grid, const PrepSpec& prep) {
  std::vector<ByFidelityPoint> out(gate_grid.size());
  const Graph& g = code.resource_graph;
  const double dim = std::ldexp(1.0, g.size());
  parallel_for(gate_grid.size(), [&](std::size_t i) {
    ByFidelityPoint& pt = out[i];
    pt.gate_param = gate_grid[i];
    try {
      PrepSpec p = prep;
      p.kind = PrepKind::Epp;
      p.gate_param = pt.gate_param;
      const DiagonalState epp = build_resource(code, Role::Decode, p).state;
      pt.fidelity = epp[0];
      auto decode = [&](const DiagonalState& s) {
        MapSpec spec;
        spec.scenario = CommScenario::DecodeOnly;
        spec.decode_resource = s;
        return jamiolkowski_fidelity(effective_map(code, spec));
      };
      // lambda_0 of D_w(x) on every qubit grows with x; bisect to 1e-10 in fidelity.
      auto local_state = [&](double x) { return local_model_state(LocalNoiseModel::uniform(g.size(), PauliChannel::depolarizing(x)), g); };
      double lo = 0.0, hi = 1.0;
      while (hi - lo > 1e-13) {
        const double mid = 0.5 * (lo + hi);
        (local_state(mid)[0] < pt.fidelity ? lo : hi) = mid;
      }
      pt.local_param = 0.5 * (lo + hi);
      const DiagonalState local = local_state(pt.local_param);
      if (std::abs(local[0] - pt.fidelity) > 1e-10) throw std::runtime_error("local depolarizing fidelity match failed");
      // Global: lambda_0 = p~ + (1 - p~) / 2^N.
      pt.global_param = (pt.fidelity - 1.0 / dim) / (1.0 - 1.0 / dim);
      const DiagonalState global = apply_global_depolarizing(DiagonalState::pure(g), pt.global_param);
      pt.epp = decode(epp);
      pt.local_depolarizing = decode(local);
      pt.global_depolarizing = decode(global);
    } catch (const std::exception& e) {
      pt.ok = false;
      pt.error = e.what();
    }
  });
  return out;
}

}  // namespace gsepp
