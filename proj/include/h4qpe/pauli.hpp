#pragma once

// Pauli strings as (x-mask, z-mask) pairs and a small algebra of weighted
// Pauli sums. Qubit k is bit k of both masks; printed words list the highest
// qubit first.

#include <bit>
#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <utility>

#include "h4qpe/errors.hpp"

namespace h4qpe {

using cplx = std::complex<double>;

/// P = i^{|x & z|} X^x Z^z, so a qubit with both bits set carries Y.
struct PauliString {
  int n_qubits = 0;
  std::uint64_t x = 0;
  std::uint64_t z = 0;

  static PauliString identity(int n) { return {n, 0, 0}; }

  static PauliString single(int n, int qubit, char letter) {
    require(qubit >= 0 && qubit < n, "qubit index out of range");
    PauliString p{n, 0, 0};
    p.set(qubit, letter);
    return p;
  }

  /// Word with qubit n-1 leftmost; spaces are ignored ("XZXI IIII").
  static PauliString parse(const std::string &word) {
    std::string letters;
    for (char c : word)
      if (c != ' ')
        letters.push_back(c);
    const int n = static_cast<int>(letters.size());
    require(n >= 1 && n <= 63, "Pauli word length must be in [1, 63]");
    PauliString p{n, 0, 0};
    for (int k = 0; k < n; ++k)
      p.set(n - 1 - k, letters[static_cast<std::size_t>(k)]);
    return p;
  }

  void set(int qubit, char letter) {
    const std::uint64_t bit = std::uint64_t{1} << qubit;
    x &= ~bit;
    z &= ~bit;
    switch (letter) {
    case 'I': break;
    case 'X': x |= bit; break;
    case 'Y': x |= bit; z |= bit; break;
    case 'Z': z |= bit; break;
    default: fail(ErrorKind::InvalidInput, std::string("bad Pauli letter '") + letter + "'");
    }
  }

  char letter(int qubit) const {
    const bool bx = (x >> qubit) & 1u, bz = (z >> qubit) & 1u;
    return bx ? (bz ? 'Y' : 'X') : (bz ? 'Z' : 'I');
  }

  bool is_identity() const noexcept { return x == 0 && z == 0; }
  int weight() const noexcept { return std::popcount(x | z); }
  int y_count() const noexcept { return std::popcount(x & z); }

  /// Word with qubit n-1 leftmost, optionally grouped in blocks of `group`.
  std::string to_string(int group = 0) const {
    std::string s;
    for (int k = n_qubits - 1; k >= 0; --k) {
      s.push_back(letter(k));
      if (group > 0 && k > 0 && k % group == 0)
        s.push_back(' ');
    }
    return s;
  }

  bool commutes_with(const PauliString &o) const {
    return (std::popcount((x & o.z) ^ (z & o.x)) & 1) == 0;
  }

  auto operator<=>(const PauliString &) const = default;
};

inline cplx i_pow(int k) {
  switch (((k % 4) + 4) % 4) {
  case 0: return {1.0, 0.0};
  case 1: return {0.0, 1.0};
  case 2: return {-1.0, 0.0};
  default: return {0.0, -1.0};
  }
}

/// a * b = phase * result.
inline std::pair<cplx, PauliString> pauli_mul(const PauliString &a, const PauliString &b) {
  if (a.n_qubits != b.n_qubits)
    fail(ErrorKind::InvalidInput, "pauli_mul: qubit counts differ");
  const PauliString r{a.n_qubits, a.x ^ b.x, a.z ^ b.z};
  // X^x1 Z^z1 X^x2 Z^z2 = (-1)^{|z1 & x2|} X^x Z^z.
  const int k = std::popcount(a.x & a.z) + std::popcount(b.x & b.z) -
                std::popcount(r.x & r.z) + 2 * std::popcount(a.z & b.x);
  return {i_pow(k), r};
}

/// Linear combination of Pauli strings with complex weights, kept in
/// canonical (x, z) order.
class PauliSum {
public:
  explicit PauliSum(int n_qubits = 0) : n_(n_qubits) {}

  static PauliSum term(const PauliString &p, cplx c) {
    PauliSum s(p.n_qubits);
    s.add(p, c);
    return s;
  }

  int n_qubits() const noexcept { return n_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }
  const std::map<PauliString, cplx> &terms() const noexcept { return terms_; }

  void add(const PauliString &p, cplx c) {
    if (p.n_qubits != n_)
      fail(ErrorKind::InvalidInput, "PauliSum: qubit count mismatch");
    terms_[p] += c;
  }

  cplx coefficient(const PauliString &p) const {
    const auto it = terms_.find(p);
    return it == terms_.end() ? cplx{} : it->second;
  }

  PauliSum &operator+=(const PauliSum &o) {
    for (const auto &[p, c] : o.terms_)
      add(p, c);
    return *this;
  }
  PauliSum &operator-=(const PauliSum &o) {
    for (const auto &[p, c] : o.terms_)
      add(p, -c);
    return *this;
  }
  PauliSum &operator*=(cplx s) {
    for (auto &[p, c] : terms_)
      c *= s;
    return *this;
  }

  friend PauliSum operator+(PauliSum a, const PauliSum &b) { return a += b; }
  friend PauliSum operator-(PauliSum a, const PauliSum &b) { return a -= b; }
  friend PauliSum operator*(PauliSum a, cplx s) { return a *= s; }
  friend PauliSum operator*(cplx s, PauliSum a) { return a *= s; }

  friend PauliSum operator*(const PauliSum &a, const PauliSum &b) {
    if (a.n_ != b.n_)
      fail(ErrorKind::InvalidInput, "PauliSum: qubit count mismatch");
    PauliSum out(a.n_);
    for (const auto &[pa, ca] : a.terms_)
      for (const auto &[pb, cb] : b.terms_) {
        const auto [ph, r] = pauli_mul(pa, pb);
        out.terms_[r] += ph * ca * cb;
      }
    return out;
  }

  /// Hermitian conjugate.
  PauliSum adjoint() const {
    PauliSum out(n_);
    for (const auto &[p, c] : terms_)
      out.terms_[p] = std::conj(c);
    return out;
  }

  /// Drops terms with |c| <= threshold.
  PauliSum &simplify(double threshold = 1e-12) {
    std::erase_if(terms_, [&](const auto &kv) { return std::abs(kv.second) <= threshold; });
    return *this;
  }

  double max_abs_coefficient() const {
    double m = 0.0;
    for (const auto &[p, c] : terms_)
      m = std::max(m, std::abs(c));
    return m;
  }

  double max_abs_real() const {
    double m = 0.0;
    for (const auto &[p, c] : terms_)
      m = std::max(m, std::abs(c.real()));
    return m;
  }

  double max_abs_imag() const {
    double m = 0.0;
    for (const auto &[p, c] : terms_)
      m = std::max(m, std::abs(c.imag()));
    return m;
  }

private:
  int n_;
  std::map<PauliString, cplx> terms_;
};

inline PauliSum commutator(const PauliSum &a, const PauliSum &b) {
  return (a * b - b * a).simplify(0.0);
}

} // namespace h4qpe
