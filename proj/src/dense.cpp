#include "gsepp/dense.hpp"

#include <cmath>
#include <stdexcept>

namespace gsepp {

namespace {

void check_dense(int n) {
  if (n < 1 || n > kDenseMaxQubits) throw std::invalid_argument("dense oracle supports 1..12 qubits");
}

// Kernels on a packed amplitude array over `bits` qubits.
void kernel_1q(cplx* v, int bits, int q, const Mat2& u) {
  const std::size_t size = std::size_t{1} << bits;
  const std::size_t b = std::size_t{1} << q;
  for (std::size_t i = 0; i < size; ++i) {
    if (i & b) continue;
    const cplx a0 = v[i];
    const cplx a1 = v[i | b];
    v[i] = u(0, 0) * a0 + u(0, 1) * a1;
    v[i | b] = u(1, 0) * a0 + u(1, 1) * a1;
  }
}

void kernel_cnot(cplx* v, int bits, int c, int t) {
  const std::size_t size = std::size_t{1} << bits;
  const std::size_t bc = std::size_t{1} << c;
  const std::size_t bt = std::size_t{1} << t;
  for (std::size_t i = 0; i < size; ++i)
    if ((i & bc) && !(i & bt)) std::swap(v[i], v[i | bt]);
}

void kernel_cz(cplx* v, int bits, int a, int b) {
  const std::size_t size = std::size_t{1} << bits;
  const std::size_t mask = (std::size_t{1} << a) | (std::size_t{1} << b);
  for (std::size_t i = 0; i < size; ++i)
    if ((i & mask) == mask) v[i] = -v[i];
}

Mat2 clifford_1q(Clifford g) {
  const double s = 1.0 / std::sqrt(2.0);
  Mat2 m;
  switch (g) {
    case Clifford::H: m << s, s, s, -s; break;
    case Clifford::SqrtX: m << s, cplx(0, -s), cplx(0, -s), s; break;
    case Clifford::SqrtZ: m << cplx(s, s), 0, 0, cplx(s, -s); break;
    default: throw std::invalid_argument("not a single-qubit gate");
  }
  return m;
}

void check_gate(Clifford g, const std::vector<int>& qubits, int n) {
  if (static_cast<int>(qubits.size()) != clifford_arity(g)) throw std::invalid_argument("gate arity mismatch");
  for (int q : qubits)
    if (q < 0 || q >= n) throw std::out_of_range("gate qubit out of range");
  if (qubits.size() == 2 && qubits[0] == qubits[1]) throw std::invalid_argument("gate on repeated qubit");
}

}  // namespace

Mat2 pauli_mat(Pauli p) {
  Mat2 m;
  switch (p) {
    case Pauli::I: m << 1, 0, 0, 1; break;
    case Pauli::X: m << 0, 1, 1, 0; break;
    case Pauli::Y: m << 0, cplx(0, -1), cplx(0, 1), 0; break;
    case Pauli::Z: m << 1, 0, 0, -1; break;
  }
  return m;
}

Mat2 hadamard_mat() { return clifford_1q(Clifford::H); }

StateVector::StateVector(int n) : n_(n) {
  check_dense(n);
  amp_ = Eigen::VectorXcd::Zero(Eigen::Index{1} << n);
  amp_[0] = 1.0;
}

StateVector::StateVector(int n, Eigen::VectorXcd amp) : n_(n), amp_(std::move(amp)) {
  check_dense(n);
  if (amp_.size() != (Eigen::Index{1} << n)) throw std::invalid_argument("StateVector: wrong amplitude count");
}

StateVector StateVector::plus(int n) {
  check_dense(n);
  const Eigen::Index d = Eigen::Index{1} << n;
  return {n, Eigen::VectorXcd::Constant(d, 1.0 / std::sqrt(static_cast<double>(d)))};
}

StateVector& StateVector::apply(int q, const Mat2& u) {
  if (q < 0 || q >= n_) throw std::out_of_range("StateVector: qubit out of range");
  kernel_1q(amp_.data(), n_, q, u);
  return *this;
}

StateVector& StateVector::apply(const PauliString& p) {
  if (p.size() != n_) throw std::invalid_argument("StateVector: Pauli size mismatch");
  for (int q = 0; q < n_; ++q)
    if (p.at(q) != Pauli::I) apply(q, pauli_mat(p.at(q)));
  static const cplx kPhase[] = {1.0, cplx(0, 1), -1.0, cplx(0, -1)};
  amp_ *= kPhase[p.phase()];
  return *this;
}

StateVector& StateVector::apply(Clifford g, const std::vector<int>& qubits) {
  check_gate(g, qubits, n_);
  if (g == Clifford::CNOT) return cnot(qubits[0], qubits[1]);
  if (g == Clifford::CZ) return cz(qubits[0], qubits[1]);
  return apply(qubits[0], clifford_1q(g));
}

StateVector& StateVector::cnot(int control, int target) {
  check_gate(Clifford::CNOT, {control, target}, n_);
  kernel_cnot(amp_.data(), n_, control, target);
  return *this;
}

StateVector& StateVector::cz(int a, int b) {
  check_gate(Clifford::CZ, {a, b}, n_);
  kernel_cz(amp_.data(), n_, a, b);
  return *this;
}

StateVector StateVector::tensor(const StateVector& other) const {
  const int n = n_ + other.n_;
  check_dense(n);
  Eigen::VectorXcd out(Eigen::Index{1} << n);
  for (Eigen::Index hi = 0; hi < other.amp_.size(); ++hi)
    out.segment(hi * amp_.size(), amp_.size()) = other.amp_[hi] * amp_;
  return {n, std::move(out)};
}

StateVector graph_state_dense(const Graph& g) {
  StateVector psi = StateVector::plus(g.size());
  for (const auto& [a, b] : g.edges()) psi.cz(a, b);
  return psi;
}

StateVector graph_basis_state(const Graph& g, Index mu) {
  StateVector psi = graph_state_dense(g);
  psi.apply(PauliString(g.size(), 0, mu));
  return psi;
}

DenseOperator::DenseOperator(int n) : n_(n) {
  check_dense(n);
  rho_ = Eigen::MatrixXcd::Zero(Eigen::Index{1} << n, Eigen::Index{1} << n);
}

DenseOperator::DenseOperator(int n, Eigen::MatrixXcd rho) : n_(n), rho_(std::move(rho)) {
  check_dense(n);
  const Eigen::Index d = Eigen::Index{1} << n;
  if (rho_.rows() != d || rho_.cols() != d) throw std::invalid_argument("DenseOperator: wrong dimension");
}

DenseOperator DenseOperator::from_pure(const StateVector& psi) {
  return {psi.size(), psi.amplitudes() * psi.amplitudes().adjoint()};
}

DenseOperator DenseOperator::maximally_mixed(int n) {
  check_dense(n);
  const Eigen::Index d = Eigen::Index{1} << n;
  return {n, Eigen::MatrixXcd::Identity(d, d) / static_cast<double>(d)};
}

DenseOperator DenseOperator::from_diagonal(const DiagonalState& s) {
  // |mu>_G = prod CZ H^n |mu>, so build the diagonal operator and rotate.
  const int n = s.size();
  DenseOperator out(n);
  for (Eigen::Index mu = 0; mu < out.rho_.rows(); ++mu) out.rho_(mu, mu) = s[static_cast<Index>(mu)];
  for (int q = 0; q < n; ++q) out.apply(q, hadamard_mat());
  for (const auto& [a, b] : s.graph().edges()) out.cz(a, b);
  return out;
}

void DenseOperator::for_both_sides(int q, const Mat2& u) {
  if (q < 0 || q >= n_) throw std::out_of_range("DenseOperator: qubit out of range");
  // Column-major storage: entry (r, c) sits at r | (c << n).
  kernel_1q(rho_.data(), 2 * n_, q, u);
  kernel_1q(rho_.data(), 2 * n_, q + n_, u.conjugate());
}

DenseOperator& DenseOperator::apply(int q, const Mat2& u) {
  for_both_sides(q, u);
  return *this;
}

DenseOperator& DenseOperator::apply(const PauliString& p) {
  if (p.size() != n_) throw std::invalid_argument("DenseOperator: Pauli size mismatch");
  for (int q = 0; q < n_; ++q)
    if (p.at(q) != Pauli::I) for_both_sides(q, pauli_mat(p.at(q)));
  return *this;
}

DenseOperator& DenseOperator::apply(Clifford g, const std::vector<int>& qubits) {
  check_gate(g, qubits, n_);
  if (g == Clifford::CNOT) return cnot(qubits[0], qubits[1]);
  if (g == Clifford::CZ) return cz(qubits[0], qubits[1]);
  return apply(qubits[0], clifford_1q(g));
}

DenseOperator& DenseOperator::cnot(int control, int target) {
  check_gate(Clifford::CNOT, {control, target}, n_);
  kernel_cnot(rho_.data(), 2 * n_, control, target);
  kernel_cnot(rho_.data(), 2 * n_, control + n_, target + n_);
  return *this;
}

DenseOperator& DenseOperator::cz(int a, int b) {
  check_gate(Clifford::CZ, {a, b}, n_);
  kernel_cz(rho_.data(), 2 * n_, a, b);
  kernel_cz(rho_.data(), 2 * n_, a + n_, b + n_);
  return *this;
}

DenseOperator& DenseOperator::apply_channel(int q, const PauliChannel& c) {
  Eigen::MatrixXcd acc = c[0] * rho_;
  for (int i = 1; i < 4; ++i) {
    if (c[i] == 0.0) continue;
    DenseOperator term = *this;
    term.for_both_sides(q, pauli_mat(static_cast<Pauli>(i)));
    acc += c[i] * term.rho_;
  }
  rho_ = std::move(acc);
  return *this;
}

DenseOperator& DenseOperator::apply_channel(int q1, int q2, const TwoQubitPauliChannel& c) {
  if (q1 == q2) throw std::invalid_argument("two-qubit channel on repeated qubit");
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(rho_.rows(), rho_.cols());
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      const double w = c.p[static_cast<std::size_t>(4 * a + b)];
      if (w == 0.0) continue;
      DenseOperator term = *this;
      if (a != 0) term.for_both_sides(q1, pauli_mat(static_cast<Pauli>(a)));
      if (b != 0) term.for_both_sides(q2, pauli_mat(static_cast<Pauli>(b)));
      acc += w * term.rho_;
    }
  }
  rho_ = std::move(acc);
  return *this;
}

DenseOperator& DenseOperator::apply_global_depolarizing(double p_tilde) {
  const Eigen::Index d = rho_.rows();
  rho_ = p_tilde * rho_ + (1.0 - p_tilde) * trace() * Eigen::MatrixXcd::Identity(d, d) / static_cast<double>(d);
  return *this;
}

DenseOperator& DenseOperator::noisy_cnot(const GateNoiseModel& m, int control, int target, Side side) {
  apply_channel(control, target, m.pair_channel(side));
  return cnot(control, target);
}

double DenseOperator::postselect(int q, Basis b, int outcome) {
  if (q < 0 || q >= n_) throw std::out_of_range("postselect: qubit out of range");
  if (b == Basis::X) for_both_sides(q, hadamard_mat());
  const Eigen::Index bq = Eigen::Index{1} << q;
  const Eigen::Index want = outcome ? bq : 0;
  for (Eigen::Index c = 0; c < rho_.cols(); ++c)
    for (Eigen::Index r = 0; r < rho_.rows(); ++r)
      if ((r & bq) != want || (c & bq) != want) rho_(r, c) = 0.0;
  if (b == Basis::X) for_both_sides(q, hadamard_mat());
  const double prob = trace();
  if (prob > 0.0) rho_ /= prob;
  return prob;
}

DenseOperator DenseOperator::left_multiply(const PauliString& k) const {
  if (k.size() != n_) throw std::invalid_argument("left_multiply: size mismatch");
  DenseOperator out = *this;
  for (int q = 0; q < n_; ++q)
    if (k.at(q) != Pauli::I) kernel_1q(out.rho_.data(), 2 * n_, q, pauli_mat(k.at(q)));
  static const cplx kPhase[] = {1.0, cplx(0, 1), -1.0, cplx(0, -1)};
  out.rho_ *= kPhase[k.phase()];
  return out;
}

double DenseOperator::project_stabilizer(const PauliString& k) {
  if (k.phase() % 2 != 0) throw std::invalid_argument("project_stabilizer: operator is not Hermitian");
  const Eigen::MatrixXcd k_rho = left_multiply(k).rho_;
  DenseOperator krk = *this;
  krk.apply(k);  // K rho K^dagger
  rho_ = 0.25 * (rho_ + k_rho + k_rho.adjoint() + krk.rho_);
  const double prob = trace();
  if (prob > 0.0) rho_ /= prob;
  return prob;
}

DenseOperator DenseOperator::partial_trace_keep(Index keep) const {
  keep &= low_mask(n_);
  const int m = popcount(keep);
  if (m == 0) throw std::invalid_argument("partial trace must keep at least one qubit");
  std::vector<int> kept;
  std::vector<int> traced;
  for (int q = 0; q < n_; ++q) (test_bit(keep, q) ? kept : traced).push_back(q);
  auto spread = [](Index compact, const std::vector<int>& positions) {
    Index out = 0;
    for (std::size_t i = 0; i < positions.size(); ++i)
      if (test_bit(compact, static_cast<int>(i))) out |= bit(positions[i]);
    return out;
  };
  DenseOperator out(m);
  const Index dk = Index{1} << m;
  const Index dt = Index{1} << traced.size();
  for (Index r = 0; r < dk; ++r) {
    const Index rr = spread(r, kept);
    for (Index c = 0; c < dk; ++c) {
      const Index cc = spread(c, kept);
      cplx s = 0.0;
      for (Index t = 0; t < dt; ++t) {
        const Index tt = spread(t, traced);
        s += rho_(static_cast<Eigen::Index>(rr | tt), static_cast<Eigen::Index>(cc | tt));
      }
      out.rho_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = s;
    }
  }
  return out;
}

DenseOperator DenseOperator::tensor(const DenseOperator& other) const {
  const int n = n_ + other.n_;
  check_dense(n);
  DenseOperator out(n);
  const Eigen::Index d = rho_.rows();
  for (Eigen::Index i = 0; i < other.rho_.rows(); ++i)
    for (Eigen::Index j = 0; j < other.rho_.cols(); ++j)
      out.rho_.block(i * d, j * d, d, d) = other.rho_(i, j) * rho_;
  return out;
}

double DenseOperator::expectation(const PauliString& p) const {
  // tr(P rho) = sum_c (P rho)_{cc}; apply P to each column.
  cplx s = 0.0;
  for (Eigen::Index c = 0; c < rho_.cols(); ++c) {
    StateVector col(n_, rho_.col(c));
    col.apply(p);
    s += col[static_cast<Index>(c)];
  }
  return s.real();
}

double DenseOperator::fidelity(const StateVector& psi) const {
  if (psi.size() != n_) throw std::invalid_argument("fidelity: size mismatch");
  return psi.amplitudes().dot(rho_ * psi.amplitudes()).real();
}

double DenseOperator::uhlmann_fidelity(const DenseOperator& sigma) const {
  if (sigma.n_ != n_) throw std::invalid_argument("uhlmann_fidelity: size mismatch");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho_);
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXcd sq = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> inner(sq * sigma.rho_ * sq, Eigen::EigenvaluesOnly);
  return inner.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
}

void DenseOperator::validate() const {
  if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > kHermitianTolerance)
    throw std::domain_error("DenseOperator: not Hermitian");
  if (std::abs(trace() - 1.0) > kTraceTolerance) throw std::domain_error("DenseOperator: trace is not 1");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < kPsdFloor) throw std::domain_error("DenseOperator: not positive semidefinite");
}

DiagonalState depolarize_to_diagonal(const DenseOperator& d, const Graph& g) {
  if (d.size() != g.size()) throw std::invalid_argument("depolarize_to_diagonal: size mismatch");
  if (std::abs(d.trace() - 1.0) > 1e-8) throw std::domain_error("depolarize_to_diagonal: trace deviates from 1");
  DenseOperator rot = d;
  for (const auto& [a, b] : g.edges()) rot.cz(a, b);
  for (int q = 0; q < g.size(); ++q) rot.apply(q, hadamard_mat());
  std::vector<double> lambda(std::size_t{1} << g.size());
  for (std::size_t mu = 0; mu < lambda.size(); ++mu)
    lambda[mu] = rot.matrix()(static_cast<Eigen::Index>(mu), static_cast<Eigen::Index>(mu)).real();
  return {g, std::move(lambda)};
}

std::pair<DenseOperator, double> dense_evolve(DenseOperator d, const std::vector<DenseStep>& circuit) {
  double prob = 1.0;
  for (const auto& s : circuit) {
    switch (s.kind) {
      case DenseStep::Kind::Gate: d.apply(s.gate, s.qubits); break;
      case DenseStep::Kind::Channel: d.apply_channel(s.qubits.at(0), s.channel); break;
      case DenseStep::Kind::PairChannel: d.apply_channel(s.qubits.at(0), s.qubits.at(1), s.pair); break;
      case DenseStep::Kind::NoisyCnot: d.noisy_cnot(s.model, s.qubits.at(0), s.qubits.at(1), s.side); break;
      case DenseStep::Kind::Postselect: prob *= d.postselect(s.qubits.at(0), s.basis, s.outcome); break;
      case DenseStep::Kind::GlobalDepolarizing: d.apply_global_depolarizing(s.p); break;
    }
  }
  return {std::move(d), prob};
}

}  // namespace gsepp
