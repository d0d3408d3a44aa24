#include "gsepp/noise.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace gsepp {

namespace {

void check_probability(double x, const char* what) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument(std::string(what) + ": parameter must be in [0,1]");
}

}  // namespace

PauliChannel PauliChannel::bitflip(double px) {
  check_probability(px, "bitflip");
  return {{px, 1.0 - px, 0.0, 0.0}};
}

PauliChannel PauliChannel::phaseflip(double pz) {
  check_probability(pz, "phaseflip");
  return {{pz, 0.0, 0.0, 1.0 - pz}};
}

PauliChannel PauliChannel::depolarizing(double p) {
  check_probability(p, "depolarizing");
  const double r = (1.0 - p) / 4.0;
  return {{p + r, r, r, r}};
}

PauliChannel PauliChannel::from_weights(const std::array<double, 4>& w) {
  double sum = 0.0;
  for (double x : w) {
    if (x < 0.0) throw std::invalid_argument("PauliChannel: negative weight");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("PauliChannel: weights do not sum to 1");
  return {w};
}

PauliChannel compose(const PauliChannel& first, const PauliChannel& second) {
  // Letter products up to phase, in slot numbering.
  static constexpr int kProduct[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  PauliChannel out{{0.0, 0.0, 0.0, 0.0}};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out.p[static_cast<std::size_t>(kProduct[i][j])] += first[i] * second[j];
  return out;
}

PauliChannel make_channel(std::string_view name, double param) {
  if (name == "bitflip") return PauliChannel::bitflip(param);
  if (name == "phaseflip") return PauliChannel::phaseflip(param);
  if (name == "depolarizing") return PauliChannel::depolarizing(param);
  if (name == "identity") return PauliChannel::identity();
  throw std::invalid_argument("unknown channel kind: " + std::string(name));
}

TwoQubitPauliChannel TwoQubitPauliChannel::depolarizing(double p_prime) {
  check_probability(p_prime, "two-qubit depolarizing");
  TwoQubitPauliChannel c;
  c.p.fill((1.0 - p_prime) / 16.0);
  c.p[0] += p_prime;
  return c;
}

TwoQubitPauliChannel TwoQubitPauliChannel::product(const PauliChannel& first, const PauliChannel& second) {
  TwoQubitPauliChannel c;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) c.p[static_cast<std::size_t>(4 * a + b)] = first[a] * second[b];
  return c;
}

GateNoiseModel GateNoiseModel::perfect() { return {}; }

GateNoiseModel GateNoiseModel::local_depolarizing(double p) {
  const auto ch = PauliChannel::depolarizing(p);
  return local(ch, ch, p, "local-depolarizing");
}

GateNoiseModel GateNoiseModel::binary_like(double pxz) {
  return local(PauliChannel::bitflip(pxz), PauliChannel::phaseflip(pxz), pxz, "binary-like");
}

GateNoiseModel GateNoiseModel::correlated_depolarizing(double p_prime) {
  GateNoiseModel m;
  m.kind = Kind::Correlated;
  m.joint = TwoQubitPauliChannel::depolarizing(p_prime);
  m.param = p_prime;
  m.label = "correlated-depolarizing";
  return m;
}

GateNoiseModel GateNoiseModel::local(const PauliChannel& a, const PauliChannel& b, double param, std::string label) {
  GateNoiseModel m;
  m.kind = Kind::Local;
  m.on_a = a;
  m.on_b = b;
  m.param = param;
  m.label = std::move(label);
  return m;
}

bool GateNoiseModel::is_perfect() const {
  if (kind == Kind::Local) return on_a.is_identity() && on_b.is_identity();
  return joint.p[0] == 1.0;
}

TwoQubitPauliChannel GateNoiseModel::pair_channel(Side s) const {
  if (kind == Kind::Correlated) return joint;
  return TwoQubitPauliChannel::product(channel(s), channel(s));
}

std::vector<WeightedPauli> noisy_cnot_mixture(const GateNoiseModel& model, int n, int source, int target, Side side) {
  if (source == target || source < 0 || target < 0 || source >= n || target >= n)
    throw std::invalid_argument("noisy_cnot_mixture: invalid qubits");
  const auto joint = model.pair_channel(side);
  std::vector<WeightedPauli> out;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      const double w = joint.p[static_cast<std::size_t>(4 * a + b)];
      if (w == 0.0) continue;
      PauliString ps(n);
      ps.set(source, static_cast<Pauli>(a));
      ps.set(target, static_cast<Pauli>(b));
      out.push_back({w, ps});
    }
  }
  return out;
}

std::string clifford_name(Clifford g) {
  switch (g) {
    case Clifford::CNOT: return "CNOT";
    case Clifford::CZ: return "CZ";
    case Clifford::H: return "H";
    case Clifford::SqrtX: return "SqrtX";
    case Clifford::SqrtZ: return "SqrtZ";
  }
  return "?";
}

int clifford_arity(Clifford g) { return (g == Clifford::CNOT || g == Clifford::CZ) ? 2 : 1; }

namespace {

using Mat = Eigen::MatrixXcd;
using cd = std::complex<double>;

Mat pauli_matrix(Pauli p) {
  Mat m(2, 2);
  switch (p) {
    case Pauli::I: m << 1, 0, 0, 1; break;
    case Pauli::X: m << 0, 1, 1, 0; break;
    case Pauli::Y: m << 0, cd(0, -1), cd(0, 1), 0; break;
    case Pauli::Z: m << 1, 0, 0, -1; break;
  }
  return m;
}

// Kronecker product with `lo` acting on the least significant index bit.
Mat kron(const Mat& hi, const Mat& lo) {
  Mat out(hi.rows() * lo.rows(), hi.cols() * lo.cols());
  for (Eigen::Index i = 0; i < hi.rows(); ++i)
    for (Eigen::Index j = 0; j < hi.cols(); ++j)
      out.block(i * lo.rows(), j * lo.cols(), lo.rows(), lo.cols()) = hi(i, j) * lo;
  return out;
}

Mat gate_matrix(Clifford g) {
  const double s = 1.0 / std::sqrt(2.0);
  Mat m;
  switch (g) {
    case Clifford::H:
      m.resize(2, 2);
      m << s, s, s, -s;
      break;
    case Clifford::SqrtX:
      m.resize(2, 2);
      m << s, cd(0, -s), cd(0, -s), s;
      break;
    case Clifford::SqrtZ:
      m.resize(2, 2);
      m << cd(s, s), 0, 0, cd(s, -s);
      break;
    case Clifford::CZ:
      m = Mat::Identity(4, 4);
      m(3, 3) = -1;
      break;
    case Clifford::CNOT:
      // Control on index bit 0, target on bit 1.
      m = Mat::Zero(4, 4);
      m(0, 0) = 1;
      m(2, 2) = 1;
      m(3, 1) = 1;
      m(1, 3) = 1;
      break;
  }
  return m;
}

}  // namespace

PauliString conjugate_pauli_through_clifford(const PauliString& p, Clifford gate, const std::vector<int>& qubits) {
  const int arity = clifford_arity(gate);
  if (static_cast<int>(qubits.size()) != arity) throw std::invalid_argument("conjugate: gate arity mismatch");
  for (int q : qubits)
    if (q < 0 || q >= p.size()) throw std::out_of_range("conjugate: qubit out of range");
  if (arity == 2 && qubits[0] == qubits[1]) throw std::invalid_argument("conjugate: repeated qubit");

  Mat sub = pauli_matrix(p.at(qubits[0]));
  if (arity == 2) sub = kron(pauli_matrix(p.at(qubits[1])), sub);
  const Mat g = gate_matrix(gate);
  const Mat conj = g * sub * g.adjoint();
  const double dim = static_cast<double>(conj.rows());

  for (int code = 0; code < (arity == 2 ? 16 : 4); ++code) {
    const Pauli lo = static_cast<Pauli>(code % 4);
    const Pauli hi = static_cast<Pauli>(code / 4);
    Mat cand = pauli_matrix(lo);
    if (arity == 2) cand = kron(pauli_matrix(hi), cand);
    const cd c = (cand * conj).trace() / dim;
    if (std::abs(c) < 0.5) continue;
    int k = 0;
    if (std::abs(c - cd(0, 1)) < 1e-9) k = 1;
    else if (std::abs(c + 1.0) < 1e-9) k = 2;
    else if (std::abs(c - cd(0, -1)) < 1e-9) k = 3;
    PauliString out = p.with_phase(p.phase() + k);
    out.set(qubits[0], lo);
    if (arity == 2) out.set(qubits[1], hi);
    return out;
  }
  throw std::logic_error("conjugate: result is not a Pauli operator");
}

}  // namespace gsepp
