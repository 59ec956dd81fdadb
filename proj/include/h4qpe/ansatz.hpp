#pragma once

// UCCD excitation pools (full doubles and the minimal active-space pool) and
// Trotterized state preparation prod_k exp(theta_k G_k) |HF>.

#include <algorithm>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "h4qpe/errors.hpp"
#include "h4qpe/excitation.hpp"
#include "h4qpe/pauli.hpp"
#include "h4qpe/qham.hpp"
#include "h4qpe/statevector.hpp"

namespace h4qpe {

namespace detail {

inline int spin_of(int p, int n_spatial) { return p / n_spatial; }

// All S_z-conserving doubles from pairs of `occ` to pairs of `vir`, in
// ascending (i, j, a, b) order.
inline std::vector<Excitation> sz_conserving_doubles(std::vector<int> occ, std::vector<int> vir,
                                                     int n_spatial) {
  std::sort(occ.begin(), occ.end());
  std::sort(vir.begin(), vir.end());
  std::vector<Excitation> out;
  for (std::size_t x = 0; x < occ.size(); ++x)
    for (std::size_t y = x + 1; y < occ.size(); ++y)
      for (std::size_t u = 0; u < vir.size(); ++u)
        for (std::size_t v = u + 1; v < vir.size(); ++v) {
          const Excitation e{occ[x], occ[y], vir[u], vir[v]};
          if (spin_of(e.i, n_spatial) + spin_of(e.j, n_spatial) ==
              spin_of(e.a, n_spatial) + spin_of(e.b, n_spatial))
            out.push_back(e);
        }
  return out;
}

} // namespace detail

/// Lowest n_electrons/2 spatial orbitals doubly occupied.
inline Statevector hf_state(int n_spatial, int n_electrons) {
  require(n_electrons % 2 == 0 && n_electrons / 2 <= n_spatial, "bad HF occupation");
  Statevector s(2 * n_spatial);
  s[0] = 0.0;
  std::uint64_t idx = 0;
  for (int p = 0; p < n_electrons / 2; ++p)
    idx |= (std::uint64_t{1} << p) | (std::uint64_t{1} << (p + n_spatial));
  s[idx] = 1.0;
  return s;
}

inline ExcitationPool build_uccd_pool(int n_spatial = 4, int n_electrons = 4) {
  require(n_electrons % 2 == 0 && n_electrons / 2 <= n_spatial && n_spatial >= 1,
          "HF occupation undefined");
  std::vector<int> occ, vir;
  for (int p = 0; p < 2 * n_spatial; ++p)
    ((p % n_spatial) < n_electrons / 2 ? occ : vir).push_back(p);
  ExcitationPool pool;
  pool.flavor = PoolFlavor::FullUccd;
  pool.n_spatial = n_spatial;
  pool.n_electrons = n_electrons;
  pool.ops = detail::sz_conserving_doubles(occ, vir, n_spatial);
  return pool;
}

/// Doubles among chemically active spin orbitals only. The defaults give the
/// single HOMO(alpha,beta) -> LUMO(alpha,beta) operator a_2^dag a_6^dag a_5 a_1.
inline ExcitationPool build_minimal_pool(std::vector<int> active_occupied = {1, 5},
                                         std::vector<int> active_virtual = {2, 6},
                                         int n_spatial = 4, int n_electrons = 4) {
  auto spins = [&](const std::vector<int> &v) {
    std::multiset<int> s;
    for (int p : v) {
      require(p >= 0 && p < 2 * n_spatial, "active orbital index out of range");
      s.insert(detail::spin_of(p, n_spatial));
    }
    return s;
  };
  for (int p : active_occupied)
    require((p % n_spatial) < n_electrons / 2,
            "active occupied orbital " + std::to_string(p) + " is virtual in HF");
  for (int p : active_virtual)
    require((p % n_spatial) >= n_electrons / 2,
            "active virtual orbital " + std::to_string(p) + " is occupied in HF");
  if (spins(active_occupied) != spins(active_virtual))
    fail(ErrorKind::InvalidInput, "active occupied/virtual sets differ in spin content");
  ExcitationPool pool;
  pool.flavor = PoolFlavor::Minimal;
  pool.n_spatial = n_spatial;
  pool.n_electrons = n_electrons;
  pool.ops = detail::sz_conserving_doubles(active_occupied, active_virtual, n_spatial);
  if (pool.ops.empty())
    fail(ErrorKind::InvalidInput, "active space admits no S_z-conserving double");
  return pool;
}

/// G = i * sum_k w_k P_k (anti-Hermitian), plus the parameter slot it uses.
struct Generator {
  Excitation label;
  std::vector<std::pair<PauliString, double>> terms; // real w_k
  int slot = 0;
  bool commuting = true; // all terms mutually commute, so the product is exact
};

struct PreparedCircuit {
  int n_qubits = 0;
  std::vector<Generator> generators;
  int trotter_steps = 1;
};

inline PreparedCircuit build_circuit(const ExcitationPool &pool, int trotter_steps = 1) {
  require(trotter_steps >= 1, "trotter_steps must be >= 1");
  PreparedCircuit c;
  c.n_qubits = pool.n_spin_orbitals();
  c.trotter_steps = trotter_steps;
  for (std::size_t k = 0; k < pool.size(); ++k) {
    const PauliSum g = map_excitation(pool.ops[k], c.n_qubits);
    if (g.max_abs_real() > 1e-12)
      fail(ErrorKind::InvalidInput, "excitation generator is not anti-Hermitian");
    Generator gen;
    gen.label = pool.ops[k];
    gen.slot = static_cast<int>(k);
    for (const auto &[p, w] : g.terms())
      gen.terms.emplace_back(p, w.imag());
    for (std::size_t a = 0; a < gen.terms.size() && gen.commuting; ++a)
      for (std::size_t b = a + 1; b < gen.terms.size(); ++b)
        if (!gen.terms[a].first.commutes_with(gen.terms[b].first)) {
          gen.commuting = false;
          break;
        }
    c.generators.push_back(std::move(gen));
  }
  return c;
}

/// In place: state <- [prod_k exp(theta_k/steps G_k)]^steps state.
inline void apply_circuit(Statevector &state, const PreparedCircuit &circuit,
                          std::span<const double> theta) {
  if (theta.size() != circuit.generators.size())
    fail(ErrorKind::InvalidInput, "parameter count " + std::to_string(theta.size()) +
                                      " != pool size " +
                                      std::to_string(circuit.generators.size()));
  if (state.n_qubits() != circuit.n_qubits)
    fail(ErrorKind::InvalidInput, "state and circuit qubit counts differ");
  const double scale = 1.0 / circuit.trotter_steps;
  for (int s = 0; s < circuit.trotter_steps; ++s)
    for (const Generator &g : circuit.generators) {
      const double t = theta[static_cast<std::size_t>(g.slot)] * scale;
      if (t == 0.0)
        continue;
      // exp(i t w P) = exp(-i angle/2 P) with angle = -2 t w
      for (const auto &[p, w] : g.terms)
        apply_exp_pauli(state, p, -2.0 * t * w);
    }
}

inline Statevector prepare_state(const PreparedCircuit &circuit, std::span<const double> theta,
                                 const Statevector &hf) {
  Statevector s = hf;
  apply_circuit(s, circuit, theta);
  return s;
}

inline Statevector prepare_state(const ExcitationPool &pool, const AmplitudeVector &theta,
                                 const Statevector &hf, int trotter_steps = 1) {
  if (theta.size() != pool.size())
    fail(ErrorKind::InvalidInput, "amplitude count does not match the pool");
  return prepare_state(build_circuit(pool, trotter_steps), theta.values, hf);
}

/// One line per operator: slot, indices, spin tags.
inline void write_pool(std::ostream &os, const ExcitationPool &pool) {
  auto tag = [&](int p) { return p < pool.n_spatial ? 'a' : 'b'; };
  os << "# flavor=" << to_string(pool.flavor) << " size=" << pool.size() << '\n';
  os << "# slot i j -> a b spins\n";
  for (std::size_t k = 0; k < pool.size(); ++k) {
    const Excitation &x = pool.ops[k];
    os << k << ' ' << x.i << ' ' << x.j << " -> " << x.a << ' ' << x.b << ' ' << tag(x.i)
       << tag(x.j) << "->" << tag(x.a) << tag(x.b) << '\n';
  }
}

} // namespace h4qpe
