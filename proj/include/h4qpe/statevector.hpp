#pragma once

// Dense statevector over n qubits, little-endian: qubit k is bit k of the
// amplitude index. Printed bitstrings put qubit n-1 leftmost.

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "h4qpe/errors.hpp"
#include "h4qpe/pauli.hpp"
#include "h4qpe/qham.hpp"

namespace h4qpe {

class Statevector {
public:
  Statevector() = default;
  explicit Statevector(int n_qubits)
      : n_(n_qubits), amp_(std::size_t{1} << n_qubits, cplx{}) {
    require(n_qubits >= 1 && n_qubits <= 24, "qubit count must be in [1, 24]");
    amp_[0] = 1.0;
  }

  int n_qubits() const noexcept { return n_; }
  std::size_t dim() const noexcept { return amp_.size(); }

  cplx &operator[](std::size_t i) { return amp_[i]; }
  const cplx &operator[](std::size_t i) const { return amp_[i]; }

  std::span<cplx> amplitudes() noexcept { return amp_; }
  std::span<const cplx> amplitudes() const noexcept { return amp_; }

  double norm() const {
    double s = 0.0;
    for (const cplx &a : amp_)
      s += std::norm(a);
    return std::sqrt(s);
  }

  void normalize() {
    const double n = norm();
    require(n > 0.0, "cannot normalize a zero vector");
    for (cplx &a : amp_)
      a /= n;
  }

  bool operator==(const Statevector &) const = default;

private:
  int n_ = 0;
  std::vector<cplx> amp_;
};

/// Index of a printed occupation string (qubit n-1 leftmost).
inline std::uint64_t parse_bitstring(const std::string &bits) {
  require(!bits.empty() && bits.size() <= 63, "bitstring length must be in [1, 63]");
  std::uint64_t idx = 0;
  for (char c : bits) {
    if (c != '0' && c != '1')
      fail(ErrorKind::InvalidInput, "bitstring may contain only 0 and 1: " + bits);
    idx = (idx << 1) | static_cast<std::uint64_t>(c - '0');
  }
  return idx;
}

inline std::string format_bitstring(std::uint64_t index, int n_qubits) {
  std::string s(static_cast<std::size_t>(n_qubits), '0');
  for (int k = 0; k < n_qubits; ++k)
    if ((index >> k) & 1u)
      s[static_cast<std::size_t>(n_qubits - 1 - k)] = '1';
  return s;
}

inline Statevector basis_state(int n_qubits, const std::string &bits) {
  if (static_cast<int>(bits.size()) != n_qubits)
    fail(ErrorKind::InvalidInput, "bitstring length " + std::to_string(bits.size()) +
                                      " != qubit count " + std::to_string(n_qubits));
  Statevector s(n_qubits);
  s[0] = 0.0;
  s[parse_bitstring(bits)] = 1.0;
  return s;
}

/// P|b> = i^{|x&z|} (-1)^{|b&z|} |b ^ x>.
inline cplx pauli_phase(const PauliString &p, std::uint64_t b) {
  const int k = p.y_count() + 2 * (std::popcount(b & p.z) & 1);
  return i_pow(k);
}

/// amp <- exp(-i angle/2 P) amp, over a raw amplitude span of 2^n entries.
inline void apply_exp_pauli(std::span<cplx> amp, const PauliString &p, double angle) {
  const double c = std::cos(0.5 * angle);
  const cplx mis{0.0, -std::sin(0.5 * angle)};
  const std::uint64_t dim = amp.size();
  if (p.x == 0) {
    for (std::uint64_t b = 0; b < dim; ++b)
      amp[b] *= c + mis * pauli_phase(p, b);
    return;
  }
  for (std::uint64_t b = 0; b < dim; ++b) {
    const std::uint64_t f = b ^ p.x;
    if (f < b)
      continue;
    const cplx ab = amp[b], af = amp[f];
    // (P a)[f] = phase(b) a[b], (P a)[b] = phase(f) a[f]
    amp[b] = c * ab + mis * pauli_phase(p, f) * af;
    amp[f] = c * af + mis * pauli_phase(p, b) * ab;
  }
}

inline void apply_exp_pauli(Statevector &state, const PauliString &p, double angle) {
  if (p.n_qubits != state.n_qubits())
    fail(ErrorKind::InvalidInput, "Pauli string and state qubit counts differ");
  apply_exp_pauli(state.amplitudes(), p, angle);
}

/// (P psi) as a new vector.
inline std::vector<cplx> apply_pauli(std::span<const cplx> amp, const PauliString &p) {
  std::vector<cplx> out(amp.size());
  for (std::uint64_t b = 0; b < amp.size(); ++b)
    out[b ^ p.x] = pauli_phase(p, b) * amp[b];
  return out;
}

inline cplx expectation(std::span<const cplx> amp, const PauliString &p) {
  cplx s{};
  for (std::uint64_t b = 0; b < amp.size(); ++b)
    s += std::conj(amp[b ^ p.x]) * pauli_phase(p, b) * amp[b];
  return s;
}

inline void check_norm(const Statevector &state) {
  const double drift = std::abs(state.norm() - 1.0);
  if (drift > 1e-8)
    fail(ErrorKind::StateCorrupt, "state norm drifted by " + std::to_string(drift));
}

/// <psi|O|psi> for a general Pauli sum (complex result).
inline cplx expectation(const Statevector &state, const PauliSum &op) {
  if (op.n_qubits() != state.n_qubits())
    fail(ErrorKind::InvalidInput, "operator and state qubit counts differ");
  check_norm(state);
  cplx s{};
  for (const auto &[p, c] : op.terms())
    s += c * expectation(state.amplitudes(), p);
  return s;
}

/// Real energy <psi|H|psi>.
inline double expectation(const Statevector &state, const QubitHamiltonian &h) {
  if (h.n_qubits != state.n_qubits())
    fail(ErrorKind::InvalidInput, "Hamiltonian and state qubit counts differ");
  check_norm(state);
  cplx s{};
  for (const auto &[p, c] : h.terms)
    s += c * expectation(state.amplitudes(), p);
  if (std::abs(s.imag()) > 1e-10)
    fail(ErrorKind::StateCorrupt, "energy has imaginary part " + std::to_string(s.imag()));
  return s.real();
}

inline void apply_hadamard(Statevector &state, int qubit) {
  require(qubit >= 0 && qubit < state.n_qubits(), "qubit index out of range");
  const std::uint64_t bit = std::uint64_t{1} << qubit;
  const double r = 1.0 / std::sqrt(2.0);
  auto amp = state.amplitudes();
  for (std::uint64_t b = 0; b < amp.size(); ++b) {
    if (b & bit)
      continue;
    const cplx a0 = amp[b], a1 = amp[b | bit];
    amp[b] = r * (a0 + a1);
    amp[b | bit] = r * (a0 - a1);
  }
}

/// diag(1, e^{i phi}) on one qubit.
inline void apply_phase(Statevector &state, int qubit, double phi) {
  require(qubit >= 0 && qubit < state.n_qubits(), "qubit index out of range");
  const std::uint64_t bit = std::uint64_t{1} << qubit;
  const cplx ph = std::polar(1.0, phi);
  auto amp = state.amplitudes();
  for (std::uint64_t b = 0; b < amp.size(); ++b)
    if (b & bit)
      amp[b] *= ph;
}

inline cplx inner_product(const Statevector &a, const Statevector &b) {
  require(a.dim() == b.dim(), "inner_product: dimension mismatch");
  cplx s{};
  for (std::size_t i = 0; i < a.dim(); ++i)
    s += std::conj(a[i]) * b[i];
  return s;
}

/// |0> (x) system with the ancilla as the most significant qubit.
inline Statevector with_ancilla(const Statevector &system) {
  Statevector joint(system.n_qubits() + 1);
  joint[0] = 0.0;
  for (std::size_t i = 0; i < system.dim(); ++i)
    joint[i] = system[i];
  return joint;
}

} // namespace h4qpe
