#pragma once

#include <string>
#include <vector>

#include "gsepp/diagonal.hpp"
#include "gsepp/localfit.hpp"

// Localizing the noise of GHZ states (star graph, centre = vertex 0). Leaf
// pattern k is stored with bit j-1 for leaf j; |Psi_k^+> = |0,k>_G and
// |Psi_k^-> = |1,k>_G, so the full index is (k << 1) | centre bit.

namespace gsepp {

struct GhzStandardForm {
  int n = 0;
  double lambda0_plus = 1.0;
  double lambda0_minus = 0.0;
  /// lambda[k] for every leaf pattern; entry 0 is unused and kept at 0.
  std::vector<double> lambda;

  std::size_t patterns() const { return lambda.size(); }
  /// lambda~_k: lambda0+ + lambda0- for k = 0, 2 lambda_k otherwise.
  double combined(std::size_t k) const;
  void validate(double tol = kNormTolerance) const;
  DiagonalState to_state() const;
};

/// Averages lambda_k^+ and lambda_k^- for k != 0, which is what the random
/// local Cliffords sqrt(-i X_a) sqrt(i Z_centre) with probability 1/2 per leaf
/// achieve. Throws unless the graph is Graph::star(n, 0).
GhzStandardForm twirl_to_standard_form(const DiagonalState& s);

/// Coefficients lambda~'_k of |GHZ> under D_A(p) on the centre and D_B(p)
/// on every leaf, by leaf Hamming weight w = 0..N-1.
std::vector<double> local_target_weights(int n, double p);

/// Largest mixing weight Q compatible with local parameter p: the minimum
/// of lambda~'_k / lambda~_k over patterns with lambda~_k > 0.
double localization_weight(const GhzStandardForm& sf, double p);

struct LocalizationReport {
  double p = 1.0;
  double Q = 1.0;
  /// Mixing weight of rho_k per leaf pattern; sums to 1 - Q.
  std::vector<double> q;
  /// Probability of the extra Z on the centre that sets lambda0+ / lambda0-.
  double centre_z = 0.0;
  /// Probability of the Z flip applied to the mixed state when lambda0- falls
  /// below what any local model allows (usually 0).
  double ratio_flip = 0.0;
  double lambda0_before = 1.0;
  double lambda0_after = 1.0;
  /// Root fidelity sqrt(lambda0) with |GHZ>, before and after.
  double fidelity_before = 1.0;
  double fidelity_after = 1.0;
  double relative_reduction = 0.0;  // (F - F') / F
  /// Local channels that reproduce the output exactly.
  LocalNoiseModel model;
  bool feasible = true;
  std::string message;
};

struct LocalizedState {
  DiagonalState state;
  LocalizationReport report;
};

/// Mixes in the separable states rho_k so the result is exactly |GHZ> under
/// local Pauli noise, choosing p in [1/2, 1] to maximize Q.
LocalizedState localize_noise(const GhzStandardForm& sf);
/// Same with p fixed.
LocalizedState localize_noise_at(const GhzStandardForm& sf, double p);

}  // namespace gsepp
