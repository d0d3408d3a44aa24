#pragma once

#include <Eigen/Dense>
#include <complex>
#include <utility>
#include <vector>

#include "gsepp/diagonal.hpp"
#include "gsepp/graph.hpp"
#include "gsepp/noise.hpp"

// Exact state-vector and density-matrix simulation used as an oracle for
// the diagonal engines. Qubit q is bit q of the computational-basis index.

namespace gsepp {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;

inline constexpr int kDenseMaxQubits = 12;
inline constexpr double kHermitianTolerance = 1e-10;
inline constexpr double kTraceTolerance = 1e-10;
inline constexpr double kPsdFloor = -1e-10;

Mat2 pauli_mat(Pauli p);
Mat2 hadamard_mat();

class StateVector {
 public:
  StateVector() = default;
  explicit StateVector(int n);  // |0...0>
  StateVector(int n, Eigen::VectorXcd amp);

  static StateVector plus(int n);

  int size() const { return n_; }
  const Eigen::VectorXcd& amplitudes() const { return amp_; }
  Eigen::VectorXcd& amplitudes() { return amp_; }
  cplx operator[](Index i) const { return amp_[static_cast<Eigen::Index>(i)]; }

  StateVector& apply(int q, const Mat2& u);
  StateVector& apply(const PauliString& p);  // phase included
  StateVector& apply(Clifford g, const std::vector<int>& qubits);
  StateVector& cnot(int control, int target);
  StateVector& cz(int a, int b);

  double norm() const { return amp_.norm(); }
  cplx inner(const StateVector& other) const { return amp_.dot(other.amp_); }  // <this|other>

  /// this (x) other, with `this` on the low qubits.
  StateVector tensor(const StateVector& other) const;

 private:
  int n_ = 0;
  Eigen::VectorXcd amp_;
};

/// |G> = prod CZ_ab |+>^n.
StateVector graph_state_dense(const Graph& g);
/// |mu>_G = Z^mu |G>.
StateVector graph_basis_state(const Graph& g, Index mu);

enum class Basis { Z, X };

class DenseOperator {
 public:
  DenseOperator() = default;
  explicit DenseOperator(int n);  // zero operator
  DenseOperator(int n, Eigen::MatrixXcd rho);

  static DenseOperator from_pure(const StateVector& psi);
  static DenseOperator maximally_mixed(int n);
  static DenseOperator from_diagonal(const DiagonalState& s);

  int size() const { return n_; }
  const Eigen::MatrixXcd& matrix() const { return rho_; }

  DenseOperator& apply(int q, const Mat2& u);
  DenseOperator& apply(const PauliString& p);
  DenseOperator& apply(Clifford g, const std::vector<int>& qubits);
  DenseOperator& cnot(int control, int target);
  DenseOperator& cz(int a, int b);

  DenseOperator& apply_channel(int q, const PauliChannel& c);
  /// Slot 4a+b acts with letter a on q1 and b on q2.
  DenseOperator& apply_channel(int q1, int q2, const TwoQubitPauliChannel& c);
  DenseOperator& apply_global_depolarizing(double p_tilde);
  /// Noise on both qubits followed by the perfect CNOT.
  DenseOperator& noisy_cnot(const GateNoiseModel& m, int control, int target, Side side = Side::A);

  /// Projects qubit q onto outcome (0 = +1 eigenvalue) in the given basis and
  /// renormalizes. Returns the outcome probability; a zero-probability branch
  /// leaves the zero operator.
  double postselect(int q, Basis b, int outcome);

  /// Applies the projector (1 + K)/2 for a Hermitian Pauli K, renormalizes
  /// and returns the probability of the +1 outcome.
  double project_stabilizer(const PauliString& k);
  /// K rho for a Pauli string K (phase included).
  DenseOperator left_multiply(const PauliString& k) const;

  DenseOperator partial_trace_keep(Index keep) const;
  /// this (x) other, with `this` on the low qubits.
  DenseOperator tensor(const DenseOperator& other) const;

  double trace() const { return rho_.trace().real(); }
  double expectation(const PauliString& p) const;
  double fidelity(const StateVector& psi) const;  // <psi|rho|psi>
  /// tr sqrt(sqrt(rho) sigma sqrt(rho)).
  double uhlmann_fidelity(const DenseOperator& sigma) const;

  void validate() const;

 private:
  void for_both_sides(int q, const Mat2& u);

  int n_ = 0;
  Eigen::MatrixXcd rho_;
};

/// lambda_mu = <mu|rho|mu>_G.
DiagonalState depolarize_to_diagonal(const DenseOperator& d, const Graph& g);

/// One step of a dense circuit.
struct DenseStep {
  enum class Kind { Gate, Channel, PairChannel, NoisyCnot, Postselect, GlobalDepolarizing };
  Kind kind = Kind::Gate;
  Clifford gate = Clifford::H;
  std::vector<int> qubits;
  PauliChannel channel;
  TwoQubitPauliChannel pair;
  GateNoiseModel model;
  Side side = Side::A;
  Basis basis = Basis::Z;
  int outcome = 0;
  double p = 1.0;
};

/// Runs the steps in order; returns the final operator and the product of
/// postselection probabilities.
std::pair<DenseOperator, double> dense_evolve(DenseOperator d, const std::vector<DenseStep>& circuit);

}  // namespace gsepp
