#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace gsepp {

/// Packed bit vector over qubits; bit i belongs to qubit i.
using Index = std::uint64_t;

inline constexpr int kMaxQubits = 62;

constexpr Index bit(int i) { return Index{1} << i; }
constexpr bool test_bit(Index v, int i) { return ((v >> i) & 1U) != 0; }
constexpr Index low_mask(int n) { return n >= 64 ? ~Index{0} : bit(n) - 1; }
int popcount(Index v);

/// Single-qubit Pauli letter. The numeric value is the channel slot p^i.
enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char pauli_char(Pauli p);
Pauli pauli_from_char(char c);

/// Tensor product of Pauli letters times a power of i.
///
/// Stored in symplectic form: qubit q carries X if bit q of x() is set and Z
/// if bit q of z() is set; both set means Y. The operator represented is
/// i^phase() * (letter_0 (x) letter_1 (x) ...), with Y Hermitian.
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(int n);
  PauliString(int n, Index x, Index z, int phase = 0);

  /// Parses strings like "XZZI", "+XYZ", "-iZZ". Leftmost letter is qubit 0.
  static PauliString parse(std::string_view text);
  static PauliString single(int n, int qubit, Pauli p);

  int size() const { return n_; }
  Index x() const { return x_; }
  Index z() const { return z_; }
  int phase() const { return phase_; }
  Index support() const { return x_ | z_; }
  bool is_identity() const { return support() == 0; }
  int weight() const;

  Pauli at(int qubit) const;
  void set(int qubit, Pauli p);
  PauliString with_phase(int phase) const;

  PauliString& operator*=(const PauliString& rhs);
  friend PauliString operator*(PauliString lhs, const PauliString& rhs) {
    lhs *= rhs;
    return lhs;
  }

  bool commutes_with(const PauliString& other) const;
  /// Equal as operators up to the phase factor.
  bool same_letters(const PauliString& other) const {
    return n_ == other.n_ && x_ == other.x_ && z_ == other.z_;
  }
  bool operator==(const PauliString& other) const = default;

  /// Letters without phase, e.g. "XZZI".
  std::string letters() const;
  /// Letters with phase prefix, e.g. "-iXZZI".
  std::string str() const;

 private:
  int n_ = 0;
  Index x_ = 0;
  Index z_ = 0;
  int phase_ = 0;
};

}  // namespace gsepp
