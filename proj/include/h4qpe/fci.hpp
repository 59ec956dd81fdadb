#pragma once

// Exact diagonalization in a fixed (N, S_z) determinant sector, with
// eigenstate labeling by HF-overlap screening and overlap reports.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "h4qpe/errors.hpp"
#include "h4qpe/evolution.hpp"
#include "h4qpe/qham.hpp"
#include "h4qpe/statevector.hpp"

namespace h4qpe {

struct SymmetricEigen {
  Eigen::VectorXd values;  // ascending
  Eigen::MatrixXd vectors; // columns
  int sweeps = 0;
};

/// Cyclic Jacobi rotations until the off-diagonal norm falls below
/// tol * ||A||_F.
inline SymmetricEigen jacobi_eigensolver(Eigen::MatrixXd a, double tol = 1e-15,
                                         int max_sweeps = 100) {
  require(a.rows() == a.cols(), "jacobi_eigensolver needs a square matrix");
  require((a - a.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, a.norm()),
          "jacobi_eigensolver needs a symmetric matrix");
  const Eigen::Index n = a.rows();
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  const double scale = std::max(a.norm(), 1e-300);
  SymmetricEigen out;
  for (out.sweeps = 0; out.sweeps < max_sweeps; ++out.sweeps) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q)
        off += a(p, q) * a(p, q);
    if (std::sqrt(2.0 * off) <= tol * scale)
      break;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0)
          continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
  }
  if (out.sweeps == max_sweeps)
    fail(ErrorKind::InvalidInput, "Jacobi eigensolver did not converge");

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a(i, i) < a(j, j); });
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = a(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(k)]);
    out.vectors.col(k) = v.col(order[static_cast<std::size_t>(k)]);
  }
  return out;
}

struct StateLabel {
  std::string name; // GS, ES1, ES2, ES3
  int index = 0;    // eigenstate index, ascending energy
};

struct FciSolution {
  int n_qubits = 0;
  int n_electrons = 0;
  double s_z = 0.0;
  std::vector<std::uint64_t> determinants; // ascending basis index
  Eigen::VectorXd energies;                // hartree, ascending
  Eigen::MatrixXd vectors;                 // column k = eigenstate k
  std::vector<StateLabel> labels;

  std::size_t dim() const noexcept { return determinants.size(); }

  int index_of(const std::string &name) const {
    for (const StateLabel &l : labels)
      if (l.name == name)
        return l.index;
    fail(ErrorKind::MissingLabel, "no state labeled " + name);
  }

  double energy(const std::string &name) const { return energies(index_of(name)); }

  /// Coefficient of determinant `det` (basis index) in eigenstate k.
  double coefficient(int k, std::uint64_t det) const {
    const auto it = std::lower_bound(determinants.begin(), determinants.end(), det);
    if (it == determinants.end() || *it != det)
      return 0.0;
    return vectors(it - determinants.begin(), k);
  }

  double coefficient(int k, const std::string &bits) const {
    return coefficient(k, parse_bitstring(bits));
  }

  Statevector state(int k) const {
    require(k >= 0 && k < static_cast<int>(dim()), "eigenstate index out of range");
    Statevector s(n_qubits);
    s[0] = 0.0;
    for (std::size_t i = 0; i < dim(); ++i)
      s[determinants[i]] = vectors(static_cast<Eigen::Index>(i), k);
    return s;
  }
};

namespace detail {

/// Largest |c| made positive; ties within 1e-12 go to the lowest index.
inline void fix_eigenvector_gauge(Eigen::MatrixXd &v) {
  for (Eigen::Index k = 0; k < v.cols(); ++k) {
    const double big = v.col(k).cwiseAbs().maxCoeff();
    Eigen::Index pick = 0;
    while (std::abs(v(pick, k)) < big - 1e-12)
      ++pick;
    if (v(pick, k) < 0.0)
      v.col(k) *= -1.0;
  }
}

} // namespace detail

/// Dense diagonalization of the (n_electrons, s_z) block. Throws
/// InvalidInput when H couples the sector to its complement.
inline FciSolution fci_solve(const QubitHamiltonian &h, int n_electrons = 4, double s_z = 0.0) {
  FciSolution sol;
  sol.n_qubits = h.n_qubits;
  sol.n_electrons = n_electrons;
  sol.s_z = s_z;
  sol.determinants = sector_basis(h.n_qubits, n_electrons, s_z);
  if (sol.determinants.empty())
    fail(ErrorKind::InvalidInput, "empty (N, S_z) sector");

  std::vector<bool> inside(std::size_t{1} << h.n_qubits, false);
  for (std::uint64_t d : sol.determinants)
    inside[d] = true;
  std::vector<cplx> column(std::size_t{1} << h.n_qubits);
  for (std::uint64_t d : sol.determinants) {
    std::fill(column.begin(), column.end(), cplx{});
    for (const auto &[p, c] : h.terms)
      column[d ^ p.x] += c * pauli_phase(p, d);
    for (std::size_t b = 0; b < column.size(); ++b)
      if (!inside[b] && std::abs(column[b]) > 1e-10)
        fail(ErrorKind::InvalidInput, "Hamiltonian does not conserve N and S_z");
  }

  SymmetricEigen eig = jacobi_eigensolver(sector_matrix(h, sol.determinants));
  sol.energies = std::move(eig.values);
  sol.vectors = std::move(eig.vectors);
  detail::fix_eigenvector_gauge(sol.vectors);
  sol.labels = {{"GS", 0}};
  return sol;
}

/// GS = index 0; ES1..ES3 = the three lowest excited states with
/// |<HF|psi>|^2 > threshold.
inline std::vector<StateLabel> identify_states(const FciSolution &sol, const Statevector &hf,
                                               double threshold = 0.0025) {
  require(hf.n_qubits() == sol.n_qubits, "HF state and FCI solution qubit counts differ");
  std::vector<StateLabel> labels{{"GS", 0}};
  std::string found;
  for (int k = 1; k < static_cast<int>(sol.dim()) && labels.size() < 4; ++k) {
    double c = 0.0;
    for (std::size_t i = 0; i < sol.dim(); ++i)
      c += std::real(std::conj(hf[sol.determinants[i]])) *
           sol.vectors(static_cast<Eigen::Index>(i), k);
    if (c * c > threshold) {
      labels.push_back({"ES" + std::to_string(labels.size()), k});
      found += " " + std::to_string(k);
    }
  }
  if (labels.size() < 4)
    fail(ErrorKind::MissingLabel,
         "only " + std::to_string(labels.size() - 1) +
             " excited states pass the HF-overlap screen (indices:" +
             (found.empty() ? std::string(" none") : found) + ")");
  return labels;
}

struct OverlapEntry {
  std::string name;
  int index = 0;
  cplx amplitude; // <state|psi_n>
  double probability = 0.0;
};

struct OverlapReport {
  std::vector<OverlapEntry> entries;
  double sector_weight = 0.0; // sum over every sector eigenstate of |c_n|^2
  double residual = 0.0;      // 1 - labeled weight

  double probability(const std::string &name) const {
    for (const OverlapEntry &e : entries)
      if (e.name == name)
        return e.probability;
    fail(ErrorKind::MissingLabel, "no overlap entry for " + name);
  }
};

inline OverlapReport overlaps(const Statevector &state, const FciSolution &sol) {
  require(state.n_qubits() == sol.n_qubits, "state and FCI solution qubit counts differ");
  check_norm(state);
  Eigen::VectorXcd v(static_cast<Eigen::Index>(sol.dim()));
  for (std::size_t i = 0; i < sol.dim(); ++i)
    v(static_cast<Eigen::Index>(i)) = state[sol.determinants[i]];
  const Eigen::VectorXcd c = sol.vectors.transpose().cast<cplx>() * v.conjugate();
  OverlapReport r;
  r.sector_weight = c.squaredNorm();
  double labeled = 0.0;
  for (const StateLabel &l : sol.labels) {
    const cplx a = std::conj(c(l.index));
    r.entries.push_back({l.name, l.index, a, std::norm(a)});
    labeled += std::norm(a);
  }
  r.residual = 1.0 - labeled;
  return r;
}

/// One row per (labeled state, determinant) with |c| above `min_abs`,
/// largest first.
inline void write_coefficients_csv(std::ostream &os, const FciSolution &sol,
                                   double min_abs = 0.05) {
  os << "state,index,energy_hartree,determinant,coefficient\n";
  const auto flags = os.flags();
  const auto prec = os.precision();
  for (const StateLabel &l : sol.labels) {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < sol.dim(); ++i)
      if (std::abs(sol.vectors(static_cast<Eigen::Index>(i), l.index)) > min_abs)
        rows.push_back(i);
    std::stable_sort(rows.begin(), rows.end(), [&](std::size_t a, std::size_t b) {
      return std::abs(sol.vectors(static_cast<Eigen::Index>(a), l.index)) >
             std::abs(sol.vectors(static_cast<Eigen::Index>(b), l.index));
    });
    for (std::size_t i : rows)
      os << l.name << ',' << l.index << ',' << std::setprecision(12)
         << sol.energies(l.index) << ',' << format_bitstring(sol.determinants[i], sol.n_qubits)
         << ',' << std::setprecision(6) << std::fixed
         << sol.vectors(static_cast<Eigen::Index>(i), l.index) << '\n'
         << std::defaultfloat;
  }
  os.flags(flags);
  os.precision(prec);
}

} // namespace h4qpe
