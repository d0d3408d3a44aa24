#include "gsepp/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

#include "gsepp/dense.hpp"
#include "gsepp/localfit.hpp"
#include "gsepp/localize.hpp"
#include "gsepp/parallel.hpp"
#include "gsepp/symscale.hpp"

namespace gsepp {

namespace {

std::string num(double x, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep = ", ") {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

std::vector<double> random_distribution(std::size_t d, std::mt19937_64& rng) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> v(d);
  double s = 0.0;
  for (auto& x : v) s += (x = e(rng));
  for (auto& x : v) x /= s;
  return v;
}

DiagonalState random_with_fidelity(const Graph& g, double f, std::mt19937_64& rng) {
  const auto rest = random_distribution((std::size_t{1} << g.size()) - 1, rng);
  std::vector<double> c(std::size_t{1} << g.size());
  c[0] = f;
  for (std::size_t i = 1; i < c.size(); ++i) c[i] = (1.0 - f) * rest[i - 1];
  return {g, std::move(c)};
}

PauliChannel random_channel(std::mt19937_64& rng) {
  const auto w = random_distribution(4, rng);
  return PauliChannel::from_weights({w[0], w[1], w[2], w[3]});
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return INFINITY;
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// One representative per isomorphism class of graphs on n vertices.
std::vector<Graph> all_graphs(int n) {
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) pairs.emplace_back(a, b);
  std::vector<std::vector<int>> perms;
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  do perms.push_back(perm);
  while (std::next_permutation(perm.begin(), perm.end()));
  // Index of each pair under each permutation.
  std::vector<std::vector<int>> image(perms.size(), std::vector<int>(pairs.size()));
  for (std::size_t p = 0; p < perms.size(); ++p)
    for (std::size_t e = 0; e < pairs.size(); ++e) {
      int a = perms[p][static_cast<std::size_t>(pairs[e].first)], b = perms[p][static_cast<std::size_t>(pairs[e].second)];
      if (a > b) std::swap(a, b);
      image[p][e] = static_cast<int>(std::find(pairs.begin(), pairs.end(), std::pair{a, b}) - pairs.begin());
    }
  std::set<Index> seen;
  std::vector<Graph> out;
  for (Index mask = 0; mask < bit(static_cast<int>(pairs.size())); ++mask) {
    Index canon = mask;
    for (const auto& img : image) {
      Index m = 0;
      for (std::size_t e = 0; e < pairs.size(); ++e)
        if (test_bit(mask, static_cast<int>(e))) m |= bit(img[e]);
      canon = std::min(canon, m);
    }
    if (!seen.insert(canon).second) continue;
    Graph g(n);
    for (std::size_t e = 0; e < pairs.size(); ++e)
      if (test_bit(mask, static_cast<int>(e))) g.add_edge(pairs[e].first, pairs[e].second);
    out.push_back(g);
  }
  return out;
}

using Check = std::function<void(CriterionResult&, Suite)>;

// ---------------------------------------------------------------------------

void pattern_table(CriterionResult& r, Suite) {
  const Code c = parse_code("repetition3");
  const auto rows = no_error_patterns(c, derive_correction_table(c));
  r.expected = "16 error-free patterns and corrections of the repetition code, exact";
  const std::string diff = pattern_table_mismatch(rows);
  r.passed = diff.empty();
  r.actual = r.passed ? "16/16 rows identical" : diff;
}

void repetition_threshold(CriterionResult& r, Suite) {
  const Code c = Code::repetition_bitflip(3);
  const double t = benefit_threshold(c, "bitflip", 0.3, 0.9, 1e-6);
  MapSpec s;
  s.decode_resource = DiagonalState::pure(c.resource_graph);
  auto gain = [&](double q) {
    s.channel = PauliChannel::bitflip(q);
    return jamiolkowski_fidelity(effective_map(c, s)) - q;
  };
  const bool sides = gain(0.49) < 0.0 && gain(0.51) > 0.0;
  r.expected = "crossing at q_x = 0.5 +- 1e-3, encoded better only above";
  r.actual = "crossing " + num(t, 8) + (sides ? ", sign change confirmed at 0.49/0.51" : ", wrong sides");
  r.passed = std::abs(t - 0.5) <= 1e-3 && sides;
}

void cluster_ring(CriterionResult& r, Suite) {
  const Code c = Code::cluster_ring();
  const auto table = derive_correction_table(c);
  const auto decode = measurement_decoding_map(c, table);
  const auto syndromes = derive_gate_syndrome_table(c);
  const auto circuit = decoding_circuit(c);
  int corrected = 0;
  double worst = 1.0;
  for (std::size_t i = 1; i < c.correctable.size(); ++i) {
    const PauliString& e = c.correctable[i];
    // Measurement-based: logical weights of the deterministic frame e.
    std::array<double, 4> w{};
    w[static_cast<std::size_t>(decode[c.key(e)])] = 1.0;
    EffectiveMap m;
    m.choi = choi_from_pauli_weights(w);
    const double f_mb = jamiolkowski_fidelity(m);
    // Gate-based: push e through the perfect decoder.
    PauliString f = e;
    for (const auto& g : circuit) f = conjugate_pauli_through_clifford(f, g.gate, g.qubits);
    const Basis b = ancilla_basis(c);
    unsigned s = 0;
    for (int j = 1; j < c.n; ++j) {
      const Pauli l = f.at(j);
      const bool flips = l == Pauli::Y || l == (b == Basis::Z ? Pauli::X : Pauli::Z);
      if (flips) s |= 1U << (j - 1);
    }
    const PauliString residual = PauliString::single(1, 0, f.at(0)) * PauliString::single(1, 0, syndromes[s]);
    const double f_gate = residual.is_identity() ? 1.0 : 0.0;
    worst = std::min({worst, f_mb, f_gate});
    if (f_mb >= 1.0 - 1e-10 && f_gate >= 1.0 - 1e-10) ++corrected;
  }
  const double t1 = benefit_threshold(c, "depolarizing", 0.5, 0.999, 1e-7);
  const double t2 = benefit_threshold(c, "depolarizing", 0.6, 0.95, 1e-7);
  r.expected = "15/15 single-qubit errors corrected to fidelity 1 (1e-10); threshold stable to 0.01 across reruns";
  r.actual = std::to_string(corrected) + "/15 corrected (worst fidelity " + num(worst, 12) + "); threshold " + num(t1, 6) + " / " +
             num(t2, 6);
  r.notes.push_back("white-noise benefit threshold p = " + num(t1, 5) +
                    " (D_w(p) on each code qubit, Jamiolkowski fidelity vs unencoded p + (1-p)/4); cited value 0.8250 uses an "
                    "external convention and is not asserted");
  r.passed = corrected == 15 && std::abs(t1 - t2) <= 0.01;
}

void engine_equivalence(CriterionResult& r, Suite suite) {
  // Diagonal engine against the dense oracle.
  std::vector<Graph> graphs;
  for (int n = 2; n <= 6; ++n)
    for (auto& g : all_graphs(n)) graphs.push_back(std::move(g));
  const int per_graph = suite == Suite::Full ? 100 : 1;
  std::vector<double> worst(graphs.size(), 0.0);
  parallel_for(graphs.size(), [&](std::size_t gi) {
    const Graph& g = graphs[gi];
    const int n = g.size();
    std::mt19937_64 rng(1000 + gi);
    std::uniform_int_distribution<int> qubit(0, n - 1), kind(0, 3);
    for (int seq = 0; seq < per_graph; ++seq) {
      DiagonalState s(g, random_distribution(std::size_t{1} << n, rng));
      DenseOperator d = DenseOperator::from_diagonal(s);
      for (int step = 0; step < 6; ++step) {
        const int k = kind(rng);
        if (k <= 1) {
          const int q = qubit(rng);
          const auto c = random_channel(rng);
          s = apply_local_channel(s, q, c);
          d.apply_channel(q, c);
        } else if (k == 2) {
          const int a = qubit(rng);
          int b = qubit(rng);
          if (b == a) b = (a + 1) % n;
          const auto w = random_distribution(16, rng);
          TwoQubitPauliChannel c;
          std::copy(w.begin(), w.end(), c.p.begin());
          std::vector<std::pair<Index, double>> terms;
          for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
              terms.emplace_back(pauli_index_action(static_cast<Pauli>(i), a, g) ^ pauli_index_action(static_cast<Pauli>(j), b, g),
                                 c.p[static_cast<std::size_t>(4 * i + j)]);
          s = DiagonalState(g, apply_mask_mixture(s.coeffs(), terms));
          d.apply_channel(a, b, c);
        } else {
          const double pt = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
          s = apply_global_depolarizing(s, pt);
          d.apply_global_depolarizing(pt);
        }
      }
      worst[gi] = std::max(worst[gi], max_diff(s.coeffs(), depolarize_to_diagonal(d, g).coeffs()));
    }
  });
  const double dense_dev = *std::max_element(worst.begin(), worst.end());

  // Symmetric engine against the diagonal engine.
  std::mt19937_64 rng(77);
  double sym_dev = 0.0;
  const int reps = suite == Suite::Full ? 25 : 5;
  for (int n = 2; n <= 8; ++n) {
    const Graph g = Graph::star(n, 0);
    const Coloring col = two_coloring(g, bit(0));
    for (int rep = 0; rep < reps; ++rep) {
      SymmetricCoefficients s = SymmetricCoefficients::pure(n);
      const auto w = random_distribution(static_cast<std::size_t>(n), rng);
      for (int k = 0; k < n; ++k) s.c[static_cast<std::size_t>(k)] = w[static_cast<std::size_t>(k)] / binomial(n - 1, k);
      const DiagonalState d = to_diagonal(s);
      const double p = std::uniform_real_distribution<double>(0.75, 1.0)(rng);
      std::vector<PauliChannel> zb(static_cast<std::size_t>(n), PauliChannel::phaseflip(p));
      zb[0] = PauliChannel::identity();
      std::vector<PauliChannel> xa(static_cast<std::size_t>(n), PauliChannel::identity());
      xa[0] = PauliChannel::bitflip(p);
      sym_dev = std::max(sym_dev, max_diff(from_diagonal(apply_local_channels(d, zb)).c, sigz_on_B(s, p).c));
      sym_dev = std::max(sym_dev, max_diff(from_diagonal(apply_local_channels(d, xa)).c, sigx_on_A(s, p).c));
      sym_dev = std::max(sym_dev, max_diff(from_diagonal(p_step(d, col, GateNoiseModel::perfect(), kP2).state).c, purify_step(s).first.c));
      sym_dev = std::max(sym_dev, max_diff(from_diagonal(p_step(d, col, GateNoiseModel::binary_like(p), kP2).state).c,
                                           noisy_purify_round(s, p).c));
    }
  }
  r.expected = "max coefficient deviation <= 1e-12 (diagonal vs dense, symmetric vs diagonal)";
  r.actual = "dense: " + num(dense_dev, 3) + " over " + std::to_string(graphs.size()) + " graphs x " + std::to_string(per_graph) +
             " sequences; symmetric: " + num(sym_dev, 3) + " for N = 2..8";
  r.passed = dense_dev <= 1e-12 && sym_dev <= 1e-12;
}

void noiseless_convergence(CriterionResult& r, Suite suite) {
  const std::vector<std::pair<std::string, Graph>> graphs = {{"GHZ-4", Graph::star(4, 0)},
                                                             {"GHZ-5", Graph::star(5, 0)},
                                                             {"linear-cluster-5", Graph::line(5)},
                                                             {"ring-purification-6", family_graph(GraphFamily::RingPurification, 6)}};
  const int inputs = suite == Suite::Full ? 20 : 4;
  std::vector<double> worst(graphs.size(), 1.0);
  std::vector<int> failed(graphs.size(), 0);
  parallel_for(graphs.size(), [&](std::size_t i) {
    const Graph& g = graphs[i].second;
    std::mt19937_64 rng(500 + i);
    std::uniform_real_distribution<double> f(0.7, 0.95);
    const auto schedule = family_schedule(color(g), GateNoiseKind::LocalDepolarizing, kP2);
    for (int k = 0; k < inputs; ++k) {
      const auto res = fixed_point(GateNoiseModel::perfect(), random_with_fidelity(g, f(rng), rng), schedule);
      if (!res.converged) ++failed[i];
      worst[i] = std::min(worst[i], res.converged ? res.state[0] : 0.0);
    }
  });
  std::vector<std::string> parts;
  bool ok = true;
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    parts.push_back(graphs[i].first + " min lambda0 " + num(worst[i], 15) + (failed[i] ? " (" + std::to_string(failed[i]) + " unconverged)" : ""));
    ok = ok && failed[i] == 0 && worst[i] >= 1.0 - 1e-10;
  }
  r.expected = "lambda0 >= 1 - 1e-10 from " + std::to_string(inputs) + " random inputs (lambda0 in [0.7, 0.95]) per graph";
  r.actual = join(parts);
  r.passed = ok;
}

void locality_exact(CriterionResult& r, Suite) {
  std::vector<std::string> parts;
  bool ok = true;
  DeviationOptions b;
  b.family = GraphFamily::Ghz;
  b.n = 3;
  b.noise = GateNoiseKind::BinaryLike;
  for (double p : {0.85, 0.9, 0.95}) {
    const auto fp = family_fixed_point(b, p);
    const double dev = fp.distilled ? fit_closest_local(fp.state).one_minus_f() : INFINITY;
    parts.push_back("GHZ-3 binary-like p=" + num(p) + ": 1-F " + num(dev, 3));
    ok = ok && dev <= 1e-9;
  }
  for (int n : {4, 9}) {
    DeviationOptions o;
    o.n = n;
    o.noise = GateNoiseKind::LocalDepolarizing;
    const auto fp = family_fixed_point(o, 0.99);
    if (!fp.distilled) {
      parts.push_back("GHZ-" + std::to_string(n) + ": EPP did not distill");
      ok = false;
      continue;
    }
    const auto loc = localize_noise(twirl_to_standard_form(fp.state));
    const double dev = fit_closest_local(loc.state).one_minus_f();
    parts.push_back("GHZ-" + std::to_string(n) + " localized p=0.99: 1-F " + num(dev, 3) + ", (F-F')/F " +
                    num(loc.report.relative_reduction, 3));
    ok = ok && loc.report.feasible && dev <= 1e-9 && loc.report.relative_reduction < 0.05;
  }
  r.expected = "1-F <= 1e-9 for all; (F-F')/F < 5% after localization";
  r.actual = join(parts, "; ");
  r.passed = ok;
}

void locality_inexact(CriterionResult& r, Suite) {
  DeviationOptions o;
  o.n = 4;
  o.noise = GateNoiseKind::BinaryLike;
  const std::vector<double> grid = {0.83, 0.86, 0.90, 0.94, 0.97};
  std::vector<std::string> parts;
  bool ok = true;
  double previous = INFINITY;
  for (double p : grid) {
    const auto fp = family_fixed_point(o, p);
    if (!fp.distilled) {
      parts.push_back("p=" + num(p) + " not distilled");
      ok = false;
      continue;
    }
    const auto fit = fit_closest_local(fp.state);
    const double certificate = binary_like_grid_fidelity(fp.state, two_coloring(fp.state.graph(), bit(0)), 0.01);
    const double dev = fit.one_minus_f();
    parts.push_back("p=" + num(p) + ": 1-F " + num(dev, 3) + ", rel " + num(fit.relative_deviation, 3));
    ok = ok && dev >= 1e-7 && fit.fidelity >= certificate - 1e-12 && fit.relative_deviation < 0.05 && dev < previous;
    previous = dev;
  }
  // N = 3 stays exactly local on the same grid.
  o.n = 3;
  double n3 = 0.0;
  for (double p : grid) n3 = std::max(n3, fit_closest_local(family_fixed_point(o, p).state).one_minus_f());
  ok = ok && n3 <= 1e-9;
  r.expected = "GHZ-4: 1-F >= 1e-7, optimizer at least as good as the grid certificate, relative < 0.05, shrinking in p; GHZ-3 zero";
  r.actual = join(parts, "; ") + "; GHZ-3 max 1-F " + num(n3, 3);
  r.notes.push_back("p = 0.80 skipped: below the GHZ-4 binary-like EPP threshold 0.8264 the fixed point is the uniform mixture");
  o.n = 4;
  const auto top = family_fixed_point(o, 0.98);
  r.notes.push_back("p = 0.98 reported only: 1-F " + num(fit_closest_local(top.state).one_minus_f(), 3) +
                    " (root fidelity; positive, below the 1e-7 floor)");
  r.passed = ok;
}

void end_step(CriterionResult& r, Suite) {
  const std::vector<double> grid = {0.96, 0.97, 0.98, 0.99, 0.995};
  std::vector<std::string> parts;
  bool ok = true;
  for (const Code& c : {Code::repetition_phaseflip(3), Code::repetition_bitflip(3)}) {
    int wins = 0;
    double margin = INFINITY;
    for (double p : grid) {
      double f[2];
      for (int step : {kP1, kP2}) {
        PrepSpec prep;
        prep.kind = PrepKind::Epp;
        prep.noise = GateNoiseKind::LocalDepolarizing;
        prep.gate_param = p;
        prep.final_step = step;
        MapSpec s;
        s.scenario = CommScenario::DecodeOnly;
        s.decode_resource = build_resource(c, Role::Decode, prep).state;
        f[step == kP1 ? 0 : 1] = jamiolkowski_fidelity(effective_map(c, s));
      }
      if (f[0] > f[1]) ++wins;
      margin = std::min(margin, f[0] - f[1]);
    }
    parts.push_back(c.name() + ": P1 > P2 at " + std::to_string(wins) + "/5 points, min margin " + num(margin, 3));
    ok = ok && wins == 5;
  }
  r.expected = "decode-only fidelity with P1-ending resources strictly above P2-ending on p in {0.96, 0.97, 0.98, 0.99, 0.995}";
  r.actual = join(parts, "; ");
  r.passed = ok;
}

void advantage_regions(CriterionResult& r, Suite) {
  std::vector<std::string> parts;
  bool ok = true;
  for (auto sc : {CommScenario::ChannelDecode, CommScenario::EncodeChannelDecode}) {
    RegionOptions o;
    o.scenario = sc;
    for (int i = 0; i < 20; ++i) o.gate_grid.push_back(0.85 + 0.15 * i / 19.0);
    for (int j = 0; j < 20; ++j) o.channel_grid.push_back(0.5 + 0.5 * (j + 0.5) / 20.0);
    const auto pts = region_scan(o);
    int count[3] = {0, 0, 0}, failed = 0;
    for (const auto& pt : pts) {
      if (!pt.ok) ++failed;
      if (pt.approach != Approach::Unencoded && pt.beats_unencoded) ++count[static_cast<int>(pt.approach)];
    }
    const bool in_direct = region_contains(pts, Approach::EppMeasurement, Approach::DirectMeasurement);
    const bool in_gate = region_contains(pts, Approach::EppMeasurement, Approach::GateBased);
    const bool strict = count[0] > count[1] && count[0] > count[2];
    parts.push_back(to_string(sc) + ": EPP " + std::to_string(count[0]) + ", direct " + std::to_string(count[1]) + ", gate-based " +
                    std::to_string(count[2]) + " points" + (in_direct && in_gate ? ", inclusion holds" : ", inclusion violated") +
                    (failed ? ", " + std::to_string(failed) + " failed points" : ""));
    ok = ok && in_direct && in_gate && strict && failed == 0;
  }
  r.expected = "phase-flip repetition code, binary-like gates, D_z channel, 20x20 grid: EPP region strictly contains direct and gate-based regions";
  r.actual = join(parts, "; ");
  r.passed = ok;
}

void scaling_limit(CriterionResult& r, Suite) {
  std::vector<int> ns;
  for (int n = 3; n <= 41; n += 2) ns.push_back(n);
  std::vector<double> t(ns.size());
  parallel_for(ns.size(), [&](std::size_t i) { t[i] = scaling_threshold(Scenario::C, ns[i]).threshold; });
  std::vector<std::string> tail;
  bool ok = true;
  for (std::size_t i = t.size() - 3; i < t.size(); ++i) {
    tail.push_back("N=" + std::to_string(ns[i]) + " " + num(t[i], 5));
    ok = ok && std::abs(t[i] - 0.762) <= 0.01;
  }
  r.expected = "scenario C thresholds for N = 3..41; last three within 0.762 +- 0.01";
  r.actual = "N=3 " + num(t.front(), 5) + " ... " + join(tail);
  r.passed = ok;
}

void prep_monotone(CriterionResult& r, Suite) {
  std::vector<double> t;
  for (int n = 3; n <= 20; ++n) t.push_back(prep_threshold(n));
  int drops = 0;
  for (std::size_t i = 1; i < t.size(); ++i)
    if (t[i] < t[i - 1]) ++drops;
  r.expected = "prep_threshold(N) nondecreasing for N = 3..20";
  r.actual = "N=3 " + num(t.front(), 5) + ", N=4 " + num(t[1], 5) + ", N=10 " + num(t[7], 5) + ", N=20 " + num(t.back(), 5) + "; " +
             std::to_string(drops) + "/17 steps decrease";
  r.passed = drops == 0;
  if (!r.passed) r.notes.push_back("known failure: the verified preparation model gives a threshold that falls with N");
}

struct Entry {
  const char* title;
  Check check;
};

const Entry kEntries[kCriteria] = {
    {"Repetition pattern table", pattern_table},
    {"Repetition threshold", repetition_threshold},
    {"Cluster-ring correctability", cluster_ring},
    {"Engine equivalence", engine_equivalence},
    {"Noiseless EPP convergence", noiseless_convergence},
    {"Locality of noise, exact cases", locality_exact},
    {"Locality of noise, inexact cases", locality_inexact},
    {"End-step sensitivity", end_step},
    {"Advantage regions", advantage_regions},
    {"Scaling limit", scaling_limit},
    {"Preparation threshold monotonicity", prep_monotone},
};

}  // namespace

Suite parse_suite(const std::string& s) {
  if (s == "fast") return Suite::Fast;
  if (s == "full") return Suite::Full;
  throw std::invalid_argument("unknown suite '" + s + "' (fast or full)");
}

std::string to_string(Suite s) { return s == Suite::Fast ? "fast" : "full"; }

std::vector<std::pair<std::string, char>> repetition_pattern_reference() {
  return {{"III", 'I'}, {"ZZI", 'I'}, {"ZIZ", 'I'}, {"IZZ", 'I'}, {"ZII", 'Z'}, {"IZI", 'Z'}, {"IIZ", 'Z'}, {"ZZZ", 'Z'},
          {"XXX", 'X'}, {"YYX", 'X'}, {"YXY", 'X'}, {"XYY", 'X'}, {"YXX", 'Y'}, {"XYX", 'Y'}, {"XXY", 'Y'}, {"YYY", 'Y'}};
}

std::string pattern_table_mismatch(const std::vector<PatternRow>& rows) {
  const auto ref = repetition_pattern_reference();
  if (rows.size() != ref.size()) return "expected 16 rows, got " + std::to_string(rows.size());
  for (std::size_t i = 0; i < ref.size(); ++i) {
    const std::string got = rows[i].pattern.letters();
    const char corr = pauli_char(rows[i].correction);
    if (got != ref[i].first || corr != ref[i].second)
      return "row " + std::to_string(i + 1) + ": expected " + ref[i].first + " -> " + ref[i].second + ", got " + got + " -> " + corr;
  }
  return {};
}

CriterionResult run_criterion(int id, Suite suite) {
  if (id < 1 || id > kCriteria) throw std::invalid_argument("criterion id out of range");
  const Entry& e = kEntries[id - 1];
  CriterionResult r;
  r.id = id;
  r.title = e.title;
  const auto start = std::chrono::steady_clock::now();
  try {
    e.check(r, suite);
  } catch (const std::exception& ex) {
    r.passed = false;
    r.actual = std::string("exception: ") + ex.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::string format_result(const CriterionResult& r) {
  char head[96];
  std::snprintf(head, sizeof head, "%s %2d  ", r.passed ? "PASS" : "FAIL", r.id);
  std::string line = head + r.title + " | expected: " + r.expected + " | actual: " + r.actual + " | " + num(r.seconds, 3) + " s";
  for (const auto& n : r.notes) line += "\n        note: " + n;
  return line;
}

}  // namespace gsepp
