#pragma once

// Restricted Hartree-Fock (Roothaan with DIIS), MO/spin-orbital integral
// transformation in block-spin order, and MP2 doubles amplitudes.

#include <cmath>
#include <deque>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "h4qpe/errors.hpp"
#include "h4qpe/excitation.hpp"
#include "h4qpe/molsys.hpp"
#include "h4qpe/tensor.hpp"

namespace h4qpe {

struct ScfOptions {
  int max_iter = 200;
  double conv_tol = 1e-10; // RMS density change
  int diis_depth = 8;
};

struct ScfResult {
  Eigen::MatrixXd mo_coefficients; // columns are MOs
  Eigen::VectorXd orbital_energies; // ascending
  Eigen::MatrixXd density;          // sum over occupied C C^T (one spin)
  Eigen::MatrixXd fock;
  double e_electronic = 0.0;
  double e_hf = 0.0; // total, including nuclear repulsion
  int n_occupied = 0;
  bool converged = false;
  int n_iterations = 0;
  bool homo_lumo_degenerate = false;
};

class ScfNotConverged : public Error {
public:
  explicit ScfNotConverged(ScfResult last)
      : Error(ErrorKind::ScfNotConverged,
              "no convergence after " + std::to_string(last.n_iterations) +
                  " iterations"),
        last_(std::move(last)) {}

  const ScfResult &last_iterate() const noexcept { return last_; }

private:
  ScfResult last_;
};

namespace detail {

// Coulomb minus half exchange for a closed-shell density (one spin).
inline Eigen::MatrixXd two_electron_fock(const Tensor4 &eri, const Eigen::MatrixXd &d) {
  const int n = static_cast<int>(d.rows());
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      double v = 0.0;
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s)
          v += d(r, s) * (2.0 * eri(p, q, r, s) - eri(p, r, q, s));
      g(p, q) = v;
    }
  return g;
}

// First component with |c| > 1e-8 is made positive.
inline void fix_column_signs(Eigen::MatrixXd &c) {
  for (int k = 0; k < c.cols(); ++k)
    for (int i = 0; i < c.rows(); ++i)
      if (std::abs(c(i, k)) > 1e-8) {
        if (c(i, k) < 0.0)
          c.col(k) *= -1.0;
        break;
      }
}

} // namespace detail

inline ScfResult run_rhf(const MolecularIntegrals &ints, const ScfOptions &opt = {}) {
  const int n = ints.n_basis();
  require(ints.n_electrons % 2 == 0, "RHF needs an even electron count");
  require(opt.max_iter >= 1, "max_iter must be >= 1");
  const int nocc = ints.n_electrons / 2;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> s_eig(ints.S);
  if (s_eig.eigenvalues().minCoeff() <= 0.0)
    fail(ErrorKind::InvalidInput, "overlap matrix is not positive definite");
  const Eigen::MatrixXd X = s_eig.eigenvectors() *
                            s_eig.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() *
                            s_eig.eigenvectors().transpose();
  const Eigen::MatrixXd h = ints.core_hamiltonian();

  ScfResult res;
  res.n_occupied = nocc;

  auto diagonalize = [&](const Eigen::MatrixXd &f) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(X.transpose() * f * X);
    Eigen::MatrixXd c = X * eig.eigenvectors();
    detail::fix_column_signs(c);
    res.mo_coefficients = c;
    res.orbital_energies = eig.eigenvalues();
    return Eigen::MatrixXd(c.leftCols(nocc) * c.leftCols(nocc).transpose());
  };

  // Core-Hamiltonian guess.
  Eigen::MatrixXd d = diagonalize(h);
  std::deque<Eigen::MatrixXd> focks, errors;

  for (int it = 1; it <= opt.max_iter; ++it) {
    const Eigen::MatrixXd f = h + detail::two_electron_fock(ints.eri, d);
    const Eigen::MatrixXd err = X.transpose() * (f * d * ints.S - ints.S * d * f) * X;
    focks.push_back(f);
    errors.push_back(err);
    if (static_cast<int>(focks.size()) > opt.diis_depth) {
      focks.pop_front();
      errors.pop_front();
    }

    Eigen::MatrixXd f_use = f;
    bool mixed = false;
    if (focks.size() >= 2) {
      const int m = static_cast<int>(focks.size());
      Eigen::MatrixXd b = Eigen::MatrixXd::Zero(m + 1, m + 1);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          b(i, j) = (errors[i].array() * errors[j].array()).sum();
      b.row(m).head(m).setConstant(-1.0);
      b.col(m).head(m).setConstant(-1.0);
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + 1);
      rhs(m) = -1.0;
      const Eigen::VectorXd w = b.fullPivLu().solve(rhs);
      if (w.allFinite() && w.head(m).cwiseAbs().maxCoeff() < 1e3) {
        f_use.setZero();
        for (int i = 0; i < m; ++i)
          f_use += w(i) * focks[i];
      } else {
        mixed = true;
      }
    }

    Eigen::MatrixXd d_new = diagonalize(f_use);
    if (mixed)
      d_new = 0.5 * (d_new + d);
    const double rms = std::sqrt((d_new - d).squaredNorm() / static_cast<double>(n * n));
    d = d_new;
    res.n_iterations = it;
    if (rms < opt.conv_tol && it > 1) {
      res.converged = true;
      break;
    }
  }

  res.density = d;
  res.fock = h + detail::two_electron_fock(ints.eri, d);
  // Final orbitals from the undamped, unextrapolated Fock matrix.
  diagonalize(res.fock);
  res.e_electronic = (d.array() * (h + res.fock).array()).sum();
  res.e_hf = res.e_electronic + ints.e_nuc;
  if (nocc < n)
    res.homo_lumo_degenerate =
        std::abs(res.orbital_energies(nocc) - res.orbital_energies(nocc - 1)) < 1e-8;
  if (!res.converged)
    throw ScfNotConverged(res);
  return res;
}

/// E_elec = sum_i (h_ii + eps_i) over occupied spatial MOs.
inline double hf_energy_from_orbitals(const MolecularIntegrals &ints, const ScfResult &scf) {
  const Eigen::MatrixXd h_mo =
      scf.mo_coefficients.transpose() * ints.core_hamiltonian() * scf.mo_coefficients;
  double e = ints.e_nuc;
  for (int i = 0; i < scf.n_occupied; ++i)
    e += h_mo(i, i) + scf.orbital_energies(i);
  return e;
}

/// Spatial MO-basis integrals (chemists' notation).
struct MoIntegrals {
  Eigen::MatrixXd h;
  Tensor4 eri;
  double e_nuc = 0.0;
  int n_electrons = 0;

  int n_orbitals() const { return static_cast<int>(h.rows()); }
};

inline MoIntegrals mo_integrals(const MolecularIntegrals &ints, const ScfResult &scf) {
  const int n = ints.n_basis();
  const Eigen::MatrixXd &c = scf.mo_coefficients;
  MoIntegrals mo;
  mo.h = c.transpose() * ints.core_hamiltonian() * c;
  mo.e_nuc = ints.e_nuc;
  mo.n_electrons = ints.n_electrons;

  // Quarter transformations, one index at a time.
  Tensor4 a(n), b(n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
          double v = 0.0;
          for (int mu = 0; mu < n; ++mu)
            v += c(mu, p) * ints.eri(mu, q, r, s);
          a(p, q, r, s) = v;
        }
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
          double v = 0.0;
          for (int nu = 0; nu < n; ++nu)
            v += c(nu, q) * a(p, nu, r, s);
          b(p, q, r, s) = v;
        }
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
          double v = 0.0;
          for (int la = 0; la < n; ++la)
            v += c(la, r) * b(p, q, la, s);
          a(p, q, r, s) = v;
        }
  mo.eri = Tensor4(n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
          double v = 0.0;
          for (int si = 0; si < n; ++si)
            v += c(si, s) * a(p, q, r, si);
          mo.eri(p, q, r, s) = v;
        }
  return mo;
}

/// Block-spin spin-orbital integrals: p < n_spatial is alpha (spatial p),
/// p >= n_spatial is beta (spatial p - n_spatial).
struct SpinOrbitalIntegrals {
  int n_spatial = 0;
  int n_electrons = 0;
  Eigen::MatrixXd h1;
  Tensor4 g; // <pq||rs>
  double e_nuc = 0.0;

  int n_spin_orbitals() const { return 2 * n_spatial; }
  int spatial(int p) const { return p % n_spatial; }
  int spin(int p) const { return p / n_spatial; } // 0 alpha, 1 beta
  bool occupied(int p) const { return spatial(p) < n_electrons / 2; }
};

inline SpinOrbitalIntegrals to_spin_orbitals(const MoIntegrals &mo) {
  const int n = mo.n_orbitals();
  const int ns = 2 * n;
  SpinOrbitalIntegrals so;
  so.n_spatial = n;
  so.n_electrons = mo.n_electrons;
  so.e_nuc = mo.e_nuc;
  so.h1 = Eigen::MatrixXd::Zero(ns, ns);
  so.g = Tensor4(ns);
  for (int p = 0; p < ns; ++p)
    for (int q = 0; q < ns; ++q)
      if (p / n == q / n)
        so.h1(p, q) = mo.h(p % n, q % n);
  // <pq|rs> = (pr|qs) when spin(p)=spin(r) and spin(q)=spin(s).
  auto phys = [&](int p, int q, int r, int s) {
    if (p / n != r / n || q / n != s / n)
      return 0.0;
    return mo.eri(p % n, r % n, q % n, s % n);
  };
  for (int p = 0; p < ns; ++p)
    for (int q = 0; q < ns; ++q)
      for (int r = 0; r < ns; ++r)
        for (int s = 0; s < ns; ++s)
          so.g(p, q, r, s) = phys(p, q, r, s) - phys(p, q, s, r);
  return so;
}

inline SpinOrbitalIntegrals to_spin_orbitals(const MolecularIntegrals &ints,
                                             const ScfResult &scf) {
  require(scf.converged, "to_spin_orbitals needs a converged SCF result");
  return to_spin_orbitals(mo_integrals(ints, scf));
}

/// <HF|H|HF> from spin-orbital integrals.
inline double reference_energy(const SpinOrbitalIntegrals &so) {
  double e = so.e_nuc;
  const int ns = so.n_spin_orbitals();
  for (int i = 0; i < ns; ++i) {
    if (!so.occupied(i))
      continue;
    e += so.h1(i, i);
    for (int j = 0; j < ns; ++j)
      if (so.occupied(j))
        e += 0.5 * so.g(i, j, i, j);
  }
  return e;
}

struct Mp2Result {
  AmplitudeVector amplitudes;
  double correlation_energy = 0.0; // full spin-orbital MP2, independent of the pool
};

inline double mp2_denominator(const Eigen::VectorXd &eps, int n_spatial, const Excitation &x) {
  auto e = [&](int p) { return eps(p % n_spatial); };
  return e(x.i) + e(x.j) - e(x.a) - e(x.b);
}

inline std::string describe(const Excitation &x) {
  return std::to_string(x.i) + "," + std::to_string(x.j) + "->" + std::to_string(x.a) +
         "," + std::to_string(x.b);
}

/// theta_ij^ab = <ij||ab> / (e_i + e_j - e_a - e_b) for each pool entry.
inline Mp2Result mp2_amplitudes(const SpinOrbitalIntegrals &so, const Eigen::VectorXd &eps,
                                const ExcitationPool &pool) {
  require(eps.size() == so.n_spatial, "orbital energy count mismatch");
  Mp2Result out;
  for (const Excitation &x : pool.ops) {
    const double den = mp2_denominator(eps, so.n_spatial, x);
    if (std::abs(den) <= 1e-8)
      fail(ErrorKind::DegenerateDenominator, "excitation " + describe(x));
    out.amplitudes.labels.push_back(x);
    out.amplitudes.values.push_back(so.g(x.i, x.j, x.a, x.b) / den);
  }
  const int ns = so.n_spin_orbitals();
  double e2 = 0.0;
  for (int i = 0; i < ns; ++i)
    for (int j = 0; j < ns; ++j)
      for (int a = 0; a < ns; ++a)
        for (int b = 0; b < ns; ++b) {
          if (!so.occupied(i) || !so.occupied(j) || so.occupied(a) || so.occupied(b))
            continue;
          const double v = so.g(i, j, a, b);
          if (v == 0.0)
            continue;
          const double den = mp2_denominator(eps, so.n_spatial, {i, j, a, b});
          if (std::abs(den) <= 1e-8)
            fail(ErrorKind::DegenerateDenominator, "excitation " + describe({i, j, a, b}));
          e2 += 0.25 * v * v / den;
        }
  out.correlation_energy = e2;
  return out;
}

inline AmplitudeVector zero_amplitudes(const ExcitationPool &pool) {
  AmplitudeVector v;
  v.labels = pool.ops;
  v.values.assign(pool.size(), 0.0);
  return v;
}

} // namespace h4qpe
