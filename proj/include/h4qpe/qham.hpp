#pragma once

// Second-quantized Hamiltonian over spin orbitals mapped to qubits with the
// Jordan-Wigner transformation: spin orbital p <-> qubit p.

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "h4qpe/errors.hpp"
#include "h4qpe/excitation.hpp"
#include "h4qpe/pauli.hpp"
#include "h4qpe/scf.hpp"

namespace h4qpe {

inline constexpr double kTermDropThreshold = 1e-12;

/// a_p^dag -> (X_p - i Y_p)/2 Z_{p-1} ... Z_0.
inline PauliSum jw_creation(int n, int p) {
  require(p >= 0 && p < n, "spin orbital index out of range");
  PauliString base{n, 0, (std::uint64_t{1} << p) - 1};
  PauliString xs = base, ys = base;
  xs.x |= std::uint64_t{1} << p;
  ys.x |= std::uint64_t{1} << p;
  ys.z |= std::uint64_t{1} << p;
  PauliSum s(n);
  s.add(xs, {0.5, 0.0});
  s.add(ys, {0.0, -0.5});
  return s;
}

inline PauliSum jw_annihilation(int n, int p) { return jw_creation(n, p).adjoint(); }

/// Caches the 2n ladder-operator images for one qubit count.
class JordanWigner {
public:
  explicit JordanWigner(int n) : n_(n) {
    for (int p = 0; p < n; ++p) {
      create_.push_back(jw_creation(n, p));
      annihilate_.push_back(jw_annihilation(n, p));
    }
  }
  int n_qubits() const noexcept { return n_; }
  const PauliSum &create(int p) const { return create_.at(static_cast<std::size_t>(p)); }
  const PauliSum &annihilate(int p) const { return annihilate_.at(static_cast<std::size_t>(p)); }

  /// a_p^dag a_q
  PauliSum one_body(int p, int q) const { return create(p) * annihilate(q); }
  /// a_p^dag a_q^dag a_s a_r
  PauliSum two_body(int p, int q, int r, int s) const {
    return create(p) * create(q) * annihilate(s) * annihilate(r);
  }

private:
  int n_;
  std::vector<PauliSum> create_, annihilate_;
};

/// Real-weighted Pauli decomposition H = sum_a h_a P_a. The identity term
/// carries the nuclear repulsion.
struct QubitHamiltonian {
  int n_qubits = 0;
  std::vector<std::pair<PauliString, double>> terms; // canonical (x, z) order

  double identity_coefficient() const {
    for (const auto &[p, c] : terms)
      if (p.is_identity())
        return c;
    return 0.0;
  }

  /// sum |h_a| over non-identity terms.
  double one_norm(bool include_identity = false) const {
    double s = 0.0;
    for (const auto &[p, c] : terms)
      if (include_identity || !p.is_identity())
        s += std::abs(c);
    return s;
  }

  PauliSum to_sum() const {
    PauliSum s(n_qubits);
    for (const auto &[p, c] : terms)
      s.add(p, c);
    return s;
  }

  /// Collects like terms, drops |h| <= threshold, and rejects any
  /// imaginary residual above 1e-10.
  static QubitHamiltonian from_sum(PauliSum sum, double threshold = kTermDropThreshold) {
    sum.simplify(threshold);
    QubitHamiltonian h;
    h.n_qubits = sum.n_qubits();
    for (const auto &[p, c] : sum.terms()) {
      if (std::abs(c.imag()) > 1e-10)
        fail(ErrorKind::InvalidInput,
             "non-Hermitian term " + p.to_string() + " imag " + std::to_string(c.imag()));
      if (std::abs(c.real()) > threshold)
        h.terms.emplace_back(p, c.real());
    }
    return h;
  }
};

/// H = sum h_pq a_p^dag a_q + 1/4 sum <pq||rs> a_p^dag a_q^dag a_s a_r + E_nuc.
inline QubitHamiltonian jordan_wigner(const SpinOrbitalIntegrals &so) {
  const int n = so.n_spin_orbitals();
  require(n >= 1 && n <= 20, "jordan_wigner supports 1..20 spin orbitals");
  const JordanWigner jw(n);
  PauliSum h(n);
  h.add(PauliString::identity(n), so.e_nuc);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      if (std::abs(so.h1(p, q)) > 0.0)
        h += jw.one_body(p, q) * so.h1(p, q);
  // Pair products a_p^dag a_q^dag and a_s a_r are reused across the sum.
  std::vector<PauliSum> cre(static_cast<std::size_t>(n * n), PauliSum(n));
  std::vector<PauliSum> ann(static_cast<std::size_t>(n * n), PauliSum(n));
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      if (p == q)
        continue;
      cre[static_cast<std::size_t>(p * n + q)] = jw.create(p) * jw.create(q);
      ann[static_cast<std::size_t>(p * n + q)] = jw.annihilate(q) * jw.annihilate(p);
    }
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      if (p == q)
        continue;
      PauliSum acc(n);
      bool any = false;
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
          if (r == s)
            continue;
          const double v = so.g(p, q, r, s);
          if (std::abs(v) <= 1e-14)
            continue;
          // a_s a_r == ann[r*n + s]
          acc += ann[static_cast<std::size_t>(r * n + s)] * (0.25 * v);
          any = true;
        }
      if (any)
        h += cre[static_cast<std::size_t>(p * n + q)] * acc;
    }
  return QubitHamiltonian::from_sum(std::move(h));
}

/// JW image of a_a^dag a_b^dag a_j a_i - h.c.; anti-Hermitian, so every
/// coefficient is purely imaginary.
inline PauliSum map_excitation(const Excitation &x, int n_qubits) {
  for (int v : {x.i, x.j, x.a, x.b})
    require(v >= 0 && v < n_qubits, "excitation index out of range");
  if (x.i == x.j || x.a == x.b || x.i == x.a || x.i == x.b || x.j == x.a || x.j == x.b)
    fail(ErrorKind::InvalidInput, "excitation indices must be distinct");
  const JordanWigner jw(n_qubits);
  PauliSum t = jw.two_body(x.a, x.b, x.i, x.j);
  PauliSum g = t - t.adjoint();
  g.simplify(kTermDropThreshold);
  return g;
}

/// Total number operator sum_p a_p^dag a_p.
inline PauliSum number_operator(int n) {
  const JordanWigner jw(n);
  PauliSum s(n);
  for (int p = 0; p < n; ++p)
    s += jw.one_body(p, p);
  return s.simplify(kTermDropThreshold);
}

/// S_z = (N_alpha - N_beta)/2 in block-spin order.
inline PauliSum sz_operator(int n) {
  require(n % 2 == 0, "S_z needs an even spin-orbital count");
  const JordanWigner jw(n);
  PauliSum s(n);
  for (int p = 0; p < n; ++p)
    s += jw.one_body(p, p) * (p < n / 2 ? 0.5 : -0.5);
  return s.simplify(kTermDropThreshold);
}

/// One line per term: "<coefficient> <word>", word grouped in blocks of 4
/// with the highest qubit leftmost.
inline void write_hamiltonian(std::ostream &os, const QubitHamiltonian &h) {
  char buf[64];
  for (const auto &[p, c] : h.terms) {
    std::snprintf(buf, sizeof buf, "%+.15e", c);
    os << buf << ' ' << p.to_string(4) << '\n';
  }
}

inline QubitHamiltonian read_hamiltonian(std::istream &is) {
  QubitHamiltonian h;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#')
      continue;
    std::istringstream ls(line);
    double c;
    ls >> c;
    std::string rest, word;
    while (ls >> word)
      rest += word;
    const PauliString p = PauliString::parse(rest);
    if (h.n_qubits == 0)
      h.n_qubits = p.n_qubits;
    require(p.n_qubits == h.n_qubits, "inconsistent word lengths in Hamiltonian dump");
    h.terms.emplace_back(p, c);
  }
  return h;
}

} // namespace h4qpe
