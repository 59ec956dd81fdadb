#pragma once

// Reference implementations used only by the tests. None of them go through
// the library's Pauli algebra or evolution code: dense Kronecker matrices,
// determinant-basis second quantization, quadrature, and the Eigen matrix
// exponential.

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "h4qpe/h4qpe.hpp"

namespace oracle {

using cplx = std::complex<double>;

inline double adaptive_simpson(const std::function<double(double)> &f, double a, double b,
                               double tol, int depth = 40) {
  const auto simpson = [&](double lo, double hi) {
    return (hi - lo) / 6.0 * (f(lo) + 4.0 * f(0.5 * (lo + hi)) + f(hi));
  };
  const std::function<double(double, double, double, double, int)> rec =
      [&](double lo, double hi, double whole, double eps, int d) {
        const double mid = 0.5 * (lo + hi);
        const double left = simpson(lo, mid), right = simpson(mid, hi);
        if (d <= 0 || std::abs(left + right - whole) <= 15.0 * eps)
          return left + right + (left + right - whole) / 15.0;
        return rec(lo, mid, left, 0.5 * eps, d - 1) + rec(mid, hi, right, 0.5 * eps, d - 1);
      };
  return rec(a, b, simpson(a, b), tol, depth);
}

/// F0(x) = int_0^1 exp(-x t^2) dt.
inline double boys_quadrature(double x) {
  return adaptive_simpson([x](double t) { return std::exp(-x * t * t); }, 0.0, 1.0, 1e-14);
}

inline Eigen::Matrix2cd single_qubit(char letter) {
  Eigen::Matrix2cd m;
  switch (letter) {
  case 'X': m << 0, 1, 1, 0; break;
  case 'Y': m << 0, cplx(0, -1), cplx(0, 1), 0; break;
  case 'Z': m << 1, 0, 0, -1; break;
  default: m.setIdentity();
  }
  return m;
}

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd &a, const Eigen::MatrixXcd &b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Dense matrix of a Pauli word; qubit n-1 is the leftmost Kronecker factor,
/// so qubit q is bit q of the basis index.
inline Eigen::MatrixXcd dense(const h4qpe::PauliString &p) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
  for (int q = p.n_qubits - 1; q >= 0; --q)
    m = kron(m, single_qubit(p.letter(q)));
  return m;
}

inline Eigen::MatrixXcd dense(const h4qpe::PauliSum &s) {
  const Eigen::Index d = Eigen::Index{1} << s.n_qubits();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  for (const auto &[p, c] : s.terms())
    m += c * dense(p);
  return m;
}

inline Eigen::MatrixXcd dense(const h4qpe::QubitHamiltonian &h) { return dense(h.to_sum()); }

inline Eigen::VectorXcd to_eigen(const h4qpe::Statevector &s) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(s.dim()));
  for (std::size_t i = 0; i < s.dim(); ++i)
    v(static_cast<Eigen::Index>(i)) = s[i];
  return v;
}

/// a_p |det>: returns false when orbital p is empty; sign from the occupied
/// orbitals below p.
inline bool annihilate(std::uint64_t &det, int p, double &sign) {
  const std::uint64_t bit = std::uint64_t{1} << p;
  if (!(det & bit))
    return false;
  if (std::popcount(det & (bit - 1)) & 1)
    sign = -sign;
  det ^= bit;
  return true;
}

inline bool create(std::uint64_t &det, int p, double &sign) {
  const std::uint64_t bit = std::uint64_t{1} << p;
  if (det & bit)
    return false;
  if (std::popcount(det & (bit - 1)) & 1)
    sign = -sign;
  det ^= bit;
  return true;
}

/// Fixed-N, fixed-Sz determinants of 2*n_spatial spin orbitals, block-spin.
inline std::vector<std::uint64_t> determinants(int n_spatial, int n_alpha, int n_beta) {
  std::vector<std::uint64_t> out;
  const int n = 2 * n_spatial;
  const std::uint64_t amask = (std::uint64_t{1} << n_spatial) - 1;
  for (std::uint64_t d = 0; d < (std::uint64_t{1} << n); ++d)
    if (std::popcount(d & amask) == n_alpha && std::popcount(d >> n_spatial) == n_beta)
      out.push_back(d);
  return out;
}

/// H = E_nuc + sum h_pq a_p^dag a_q + 1/4 sum <pq||rs> a_p^dag a_q^dag a_s a_r
/// applied determinant by determinant.
inline Eigen::MatrixXd determinant_hamiltonian(const h4qpe::SpinOrbitalIntegrals &so,
                                               const std::vector<std::uint64_t> &dets) {
  const int n = so.n_spin_orbitals();
  const Eigen::Index dim = static_cast<Eigen::Index>(dets.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  auto row_of = [&](std::uint64_t d) -> Eigen::Index {
    for (std::size_t i = 0; i < dets.size(); ++i)
      if (dets[i] == d)
        return static_cast<Eigen::Index>(i);
    return -1;
  };
  for (Eigen::Index col = 0; col < dim; ++col) {
    const std::uint64_t ket = dets[static_cast<std::size_t>(col)];
    m(col, col) += so.e_nuc;
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) {
        if (so.h1(p, q) == 0.0)
          continue;
        std::uint64_t d = ket;
        double sign = 1.0;
        if (!annihilate(d, q, sign) || !create(d, p, sign))
          continue;
        const Eigen::Index row = row_of(d);
        if (row >= 0)
          m(row, col) += sign * so.h1(p, q);
      }
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q)
        for (int r = 0; r < n; ++r)
          for (int s = 0; s < n; ++s) {
            const double g = so.g(p, q, r, s);
            if (g == 0.0)
              continue;
            std::uint64_t d = ket;
            double sign = 1.0;
            if (!annihilate(d, r, sign) || !annihilate(d, s, sign) || !create(d, q, sign) ||
                !create(d, p, sign))
              continue;
            const Eigen::Index row = row_of(d);
            if (row >= 0)
              m(row, col) += 0.25 * sign * g;
          }
  }
  return m;
}

/// Ancilla p1 from the closed form (1 - Re(e^{-2 pi i omega} <psi|U|psi>))/2
/// with U the dense matrix exponential over the full 2^n space.
inline double bit_probability(const Eigen::MatrixXcd &h_dense, const Eigen::VectorXcd &psi,
                              double e_ref, double time, double omega) {
  const Eigen::Index d = h_dense.rows();
  const Eigen::MatrixXcd shifted = h_dense - e_ref * Eigen::MatrixXcd::Identity(d, d);
  const Eigen::MatrixXcd u = (cplx(0.0, time) * shifted).exp();
  const cplx overlap = psi.dot(u * psi);
  return 0.5 * (1.0 - (std::polar(1.0, -2.0 * std::numbers::pi * omega) * overlap).real());
}

/// Same probability from an explicit (2^{n+1})-dimensional circuit:
/// H_anc, block-diag(I, U), phase on ancilla, H_anc, then the ancilla-1 weight.
inline double bit_probability_circuit(const Eigen::MatrixXcd &h_dense,
                                      const Eigen::VectorXcd &psi, double e_ref, double time,
                                      double omega) {
  const Eigen::Index d = h_dense.rows();
  const Eigen::MatrixXcd u =
      (cplx(0.0, time) * (h_dense - e_ref * Eigen::MatrixXcd::Identity(d, d))).exp();
  Eigen::MatrixXcd had(2, 2);
  had << 1, 1, 1, -1;
  had /= std::sqrt(2.0);
  const Eigen::MatrixXcd h_anc = kron(had, Eigen::MatrixXcd::Identity(d, d));
  Eigen::MatrixXcd cu = Eigen::MatrixXcd::Identity(2 * d, 2 * d);
  cu.bottomRightCorner(d, d) = u;
  Eigen::MatrixXcd ph = Eigen::MatrixXcd::Identity(2 * d, 2 * d);
  ph.bottomRightCorner(d, d) *= std::polar(1.0, -2.0 * std::numbers::pi * omega);
  Eigen::VectorXcd joint = Eigen::VectorXcd::Zero(2 * d);
  joint.head(d) = psi;
  const Eigen::VectorXcd out = h_anc * ph * cu * h_anc * joint;
  return out.tail(d).squaredNorm();
}

/// Exact leaf probabilities of the m-bit measurement tree (no cross-bit
/// collapse). leaf index = integer value of the bit string phi_1..phi_m.
inline std::vector<double> measurement_tree(const Eigen::MatrixXcd &h_dense,
                                            const Eigen::VectorXcd &psi,
                                            const h4qpe::PhaseWindow &w, int m) {
  const Eigen::Index d = h_dense.rows();
  const Eigen::MatrixXcd shifted = h_dense - w.e_ref * Eigen::MatrixXcd::Identity(d, d);
  std::vector<cplx> overlap(static_cast<std::size_t>(m) + 1);
  for (int k = 1; k <= m; ++k) {
    const Eigen::MatrixXcd u = (cplx(0.0, w.t * std::ldexp(1.0, k - 1)) * shifted).exp();
    overlap[static_cast<std::size_t>(k)] = psi.dot(u * psi);
  }
  std::vector<double> leaf(std::size_t{1} << m, 0.0);
  std::vector<int> bits(static_cast<std::size_t>(m), 0);
  const std::function<void(int, double)> rec = [&](int k, double p) {
    if (k == 0) {
      std::size_t idx = 0;
      for (int b : bits)
        idx = (idx << 1) | static_cast<std::size_t>(b);
      leaf[idx] += p;
      return;
    }
    double omega = 0.0;
    for (int j = k + 1; j <= m; ++j)
      omega += bits[static_cast<std::size_t>(j - 1)] * std::ldexp(1.0, k - j - 1);
    const double p1 =
        0.5 * (1.0 - (std::polar(1.0, -2.0 * std::numbers::pi * omega) *
                      overlap[static_cast<std::size_t>(k)])
                         .real());
    bits[static_cast<std::size_t>(k - 1)] = 0;
    rec(k - 1, p * (1.0 - p1));
    bits[static_cast<std::size_t>(k - 1)] = 1;
    rec(k - 1, p * p1);
    bits[static_cast<std::size_t>(k - 1)] = 0;
  };
  rec(m, 1.0);
  return leaf;
}

} // namespace oracle
