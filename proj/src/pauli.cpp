#include "gsepp/pauli.hpp"

#include <bit>
#include <stdexcept>

namespace gsepp {

int popcount(Index v) { return std::popcount(v); }

char pauli_char(Pauli p) {
  static constexpr char kChars[] = {'I', 'X', 'Y', 'Z'};
  return kChars[static_cast<int>(p)];
}

Pauli pauli_from_char(char c) {
  switch (c) {
    case 'I': case '1': case '_': return Pauli::I;
    case 'X': case 'x': return Pauli::X;
    case 'Y': case 'y': return Pauli::Y;
    case 'Z': case 'z': return Pauli::Z;
    default: throw std::invalid_argument(std::string("not a Pauli letter: ") + c);
  }
}

PauliString::PauliString(int n) : n_(n) {
  if (n < 0 || n > kMaxQubits) throw std::invalid_argument("PauliString: bad qubit count");
}

PauliString::PauliString(int n, Index x, Index z, int phase)
    : n_(n), x_(x), z_(z), phase_(((phase % 4) + 4) % 4) {
  if (n < 0 || n > kMaxQubits) throw std::invalid_argument("PauliString: bad qubit count");
  if (((x | z) & ~low_mask(n)) != 0) throw std::invalid_argument("PauliString: bits outside register");
}

PauliString PauliString::parse(std::string_view text) {
  int phase = 0;
  std::size_t pos = 0;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    if (text[pos] == '-') phase = 2;
    ++pos;
  }
  if (pos < text.size() && text[pos] == 'i') {
    phase += 1;
    ++pos;
  }
  const auto body = text.substr(pos);
  PauliString out(static_cast<int>(body.size()));
  for (std::size_t q = 0; q < body.size(); ++q) out.set(static_cast<int>(q), pauli_from_char(body[q]));
  out.phase_ = phase % 4;
  return out;
}

PauliString PauliString::single(int n, int qubit, Pauli p) {
  PauliString out(n);
  out.set(qubit, p);
  return out;
}

int PauliString::weight() const { return popcount(support()); }

Pauli PauliString::at(int qubit) const {
  const bool xb = test_bit(x_, qubit);
  const bool zb = test_bit(z_, qubit);
  if (xb && zb) return Pauli::Y;
  if (xb) return Pauli::X;
  if (zb) return Pauli::Z;
  return Pauli::I;
}

void PauliString::set(int qubit, Pauli p) {
  if (qubit < 0 || qubit >= n_) throw std::out_of_range("PauliString: qubit out of range");
  x_ &= ~bit(qubit);
  z_ &= ~bit(qubit);
  if (p == Pauli::X || p == Pauli::Y) x_ |= bit(qubit);
  if (p == Pauli::Z || p == Pauli::Y) z_ |= bit(qubit);
}

PauliString PauliString::with_phase(int phase) const { return PauliString(n_, x_, z_, phase); }

PauliString& PauliString::operator*=(const PauliString& rhs) {
  if (rhs.n_ != n_) throw std::invalid_argument("PauliString: size mismatch");
  // Each letter is i^{x z} X^x Z^z; reorder Z1 X2 and convert back.
  int phase = phase_ + rhs.phase_;
  phase += popcount(x_ & z_) + popcount(rhs.x_ & rhs.z_);
  phase += 2 * popcount(z_ & rhs.x_);
  x_ ^= rhs.x_;
  z_ ^= rhs.z_;
  phase -= popcount(x_ & z_);
  phase_ = ((phase % 4) + 4) % 4;
  return *this;
}

bool PauliString::commutes_with(const PauliString& other) const {
  return (popcount(x_ & other.z_) + popcount(z_ & other.x_)) % 2 == 0;
}

std::string PauliString::letters() const {
  std::string s(static_cast<std::size_t>(n_), 'I');
  for (int q = 0; q < n_; ++q) s[static_cast<std::size_t>(q)] = pauli_char(at(q));
  return s;
}

std::string PauliString::str() const {
  static constexpr const char* kPrefix[] = {"+", "+i", "-", "-i"};
  return kPrefix[phase_] + letters();
}

}  // namespace gsepp
