#pragma once

// Exact controlled time evolution inside a fixed (N, S_z) sector, plus the
// ancilla readout primitives used by phase estimation.

#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "h4qpe/errors.hpp"
#include "h4qpe/qham.hpp"
#include "h4qpe/rng.hpp"
#include "h4qpe/statevector.hpp"

namespace h4qpe {

/// Basis indices with `n_electrons` set bits and n_alpha - n_beta = 2 s_z,
/// alpha being the low half of the qubits.
inline std::vector<std::uint64_t> sector_basis(int n_qubits, int n_electrons, double s_z) {
  require(n_qubits % 2 == 0, "sector_basis needs an even qubit count");
  const int half = n_qubits / 2;
  const std::uint64_t alpha_mask = (std::uint64_t{1} << half) - 1;
  const int twice_sz = static_cast<int>(std::lround(2.0 * s_z));
  std::vector<std::uint64_t> out;
  for (std::uint64_t b = 0; b < (std::uint64_t{1} << n_qubits); ++b) {
    const int na = std::popcount(b & alpha_mask);
    const int nb = std::popcount(b >> half);
    if (na + nb == n_electrons && na - nb == twice_sz)
      out.push_back(b);
  }
  return out;
}

/// <s_i|H|s_j> over the listed basis states. H must be real in the
/// computational basis (true for real-integral molecular Hamiltonians).
inline Eigen::MatrixXd sector_matrix(const QubitHamiltonian &h,
                                     const std::vector<std::uint64_t> &basis) {
  const std::size_t d = basis.size();
  std::vector<int> pos(std::size_t{1} << h.n_qubits, -1);
  for (std::size_t i = 0; i < d; ++i)
    pos[basis[i]] = static_cast<int>(i);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d),
                                              static_cast<Eigen::Index>(d));
  for (const auto &[p, c] : h.terms)
    for (std::size_t j = 0; j < d; ++j) {
      const std::uint64_t target = basis[j] ^ p.x;
      const int i = pos[target];
      if (i < 0)
        continue;
      m(i, static_cast<Eigen::Index>(j)) += c * pauli_phase(p, basis[j]);
    }
  if (m.imag().cwiseAbs().maxCoeff() > 1e-12)
    fail(ErrorKind::InvalidInput, "sector Hamiltonian is not real");
  return m.real();
}

struct EvolutionCache {
  int n_qubits = 0;
  int n_electrons = 0;
  double s_z = 0.0;
  std::vector<std::uint64_t> basis;
  std::vector<int> position; // full index -> sector row, or -1
  Eigen::VectorXd eigenvalues;  // ascending, hartree
  Eigen::MatrixXd eigenvectors; // columns, sector basis

  std::size_t dim() const noexcept { return basis.size(); }
  double span() const { return eigenvalues(eigenvalues.size() - 1) - eigenvalues(0); }
};

inline EvolutionCache build_evolution_cache(const QubitHamiltonian &h, int n_electrons,
                                            double s_z = 0.0) {
  EvolutionCache c;
  c.n_qubits = h.n_qubits;
  c.n_electrons = n_electrons;
  c.s_z = s_z;
  c.basis = sector_basis(h.n_qubits, n_electrons, s_z);
  if (c.basis.empty())
    fail(ErrorKind::InvalidInput, "empty (N, S_z) sector");
  c.position.assign(std::size_t{1} << h.n_qubits, -1);
  for (std::size_t i = 0; i < c.basis.size(); ++i)
    c.position[c.basis[i]] = static_cast<int>(i);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sector_matrix(h, c.basis));
  c.eigenvalues = eig.eigenvalues();
  c.eigenvectors = eig.eigenvectors();
  return c;
}

/// Sector amplitudes of a system state; throws SectorLeak when weight
/// outside the sector exceeds 1e-10 (in amplitude norm).
inline Eigen::VectorXcd project_to_sector(std::span<const cplx> amp,
                                          const EvolutionCache &cache) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(cache.dim()));
  double leak = 0.0;
  for (std::size_t b = 0; b < amp.size(); ++b) {
    const int i = cache.position[b];
    if (i >= 0)
      v(i) = amp[b];
    else
      leak += std::norm(amp[b]);
  }
  if (std::sqrt(leak) > 1e-10)
    fail(ErrorKind::SectorLeak,
         "state weight outside the sector: " + std::to_string(std::sqrt(leak)));
  return v;
}

/// Ancilla (most significant qubit) = 1 branch gets exp(+i (H - e_ref) time);
/// the ancilla = 0 branch is left untouched.
inline void controlled_evolve(Statevector &joint, const EvolutionCache &cache, double e_ref,
                              double time) {
  const int n = cache.n_qubits;
  if (joint.n_qubits() != n + 1)
    fail(ErrorKind::InvalidInput, "joint state must hold one ancilla plus the system");
  const std::size_t half = std::size_t{1} << n;
  auto amp = joint.amplitudes();
  project_to_sector(amp.subspan(0, half), cache); // leakage check only
  auto upper = amp.subspan(half, half);
  const Eigen::VectorXcd v = project_to_sector(upper, cache);
  if (time == 0.0)
    return;
  Eigen::VectorXcd w = cache.eigenvectors.transpose().cast<cplx>() * v;
  for (Eigen::Index k = 0; k < w.size(); ++k)
    w(k) *= std::polar(1.0, (cache.eigenvalues(k) - e_ref) * time);
  const Eigen::VectorXcd out = cache.eigenvectors.cast<cplx>() * w;
  for (std::size_t i = 0; i < cache.dim(); ++i)
    upper[cache.basis[i]] = out(static_cast<Eigen::Index>(i));
}

/// First-order Trotterized counterpart of controlled_evolve: the ancilla = 1
/// branch gets prod_k prod_a exp(+i h_a P_a time/steps) and the e_ref shift.
inline void controlled_evolve_trotter(Statevector &joint, const QubitHamiltonian &h,
                                      double e_ref, double time, int steps) {
  require(steps >= 1, "Trotter step count must be >= 1");
  if (joint.n_qubits() != h.n_qubits + 1)
    fail(ErrorKind::InvalidInput, "joint state must hold one ancilla plus the system");
  const std::size_t half = std::size_t{1} << h.n_qubits;
  auto upper = joint.amplitudes().subspan(half, half);
  const double dt = time / steps;
  for (int s = 0; s < steps; ++s)
    for (const auto &[p, c] : h.terms) {
      if (p.is_identity())
        continue;
      // exp(+i c dt P) = exp(-i angle/2 P) with angle = -2 c dt
      apply_exp_pauli(upper, p, -2.0 * c * dt);
    }
  const cplx ph = std::polar(1.0, (h.identity_coefficient() - e_ref) * time);
  for (cplx &a : upper)
    a *= ph;
}

/// Born probability that the most significant (ancilla) qubit reads 1.
inline double ancilla_probability(const Statevector &joint) {
  const std::size_t half = joint.dim() / 2;
  double p1 = 0.0;
  for (std::size_t i = half; i < joint.dim(); ++i)
    p1 += std::norm(joint[i]);
  return std::min(1.0, std::max(0.0, p1));
}

struct BitCounts {
  long long zeros = 0;
  long long ones = 0;
};

/// `shots` Bernoulli(p1) draws.
inline BitCounts sample_bits(double p1, long long shots, CounterRng &rng) {
  require(p1 >= 0.0 && p1 <= 1.0, "p1 must lie in [0, 1]");
  require(shots >= 1, "shots must be >= 1");
  BitCounts c;
  for (long long s = 0; s < shots; ++s) {
    if (rng.uniform() < p1)
      ++c.ones;
    else
      ++c.zeros;
  }
  return c;
}

} // namespace h4qpe
