#pragma once

// H4-on-a-circle geometry, the STO-3G hydrogen basis and closed-form
// integrals over contracted s-type Gaussians.

#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "h4qpe/errors.hpp"
#include "h4qpe/tensor.hpp"

namespace h4qpe {

inline constexpr double kBohrPerAngstrom = 1.8897259886;
inline constexpr double kDefaultRadiusAngstrom = 1.738;

using Vec3 = std::array<double, 3>;

inline double distance(const Vec3 &a, const Vec3 &b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

inline double distance2(const Vec3 &a, const Vec3 &b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return dx * dx + dy * dy + dz * dz;
}

struct GeometrySpec {
  double beta_deg = 0.0;
  double radius_angstrom = 0.0;
  std::array<Vec3, 4> atoms{}; // bohr
};

/// Four protons on a circle at polar angles +b/2, -b/2, 180-b/2, 180+b/2.
/// Away from 90 degrees this is two H2-like pairs; at 90 degrees a square.
inline GeometrySpec build_h4_geometry(double beta_deg,
                                      double radius_angstrom = kDefaultRadiusAngstrom) {
  if (!(radius_angstrom > 0.0) || !std::isfinite(radius_angstrom))
    fail(ErrorKind::InvalidInput, "radius must be positive");
  if (!(beta_deg >= 70.0 && beta_deg <= 110.0))
    fail(ErrorKind::InvalidInput,
         "beta " + std::to_string(beta_deg) + " outside [70, 110] degrees");
  if (beta_deg == 90.0)
    fail(ErrorKind::DegenerateGeometry,
         "beta = 90 degrees is the degenerate square geometry");

  GeometrySpec g;
  g.beta_deg = beta_deg;
  g.radius_angstrom = radius_angstrom;
  const double r = radius_angstrom * kBohrPerAngstrom;
  const double half = 0.5 * beta_deg * std::numbers::pi / 180.0;
  const std::array<double, 4> angles{half, -half, std::numbers::pi - half,
                                     std::numbers::pi + half};
  for (std::size_t k = 0; k < 4; ++k)
    g.atoms[k] = {r * std::cos(angles[k]), r * std::sin(angles[k]), 0.0};
  return g;
}

/// One contracted s function: primitive exponents (1/bohr^2), contraction
/// coefficients, and the primitive normalization constants (2a/pi)^(3/4)
/// already rescaled so the contraction has unit self-overlap.
struct Contraction {
  std::vector<double> exponents;
  std::vector<double> coefficients;
  std::vector<double> norms;

  std::size_t size() const noexcept { return exponents.size(); }
  /// Normalized primitive weight d_i = c_i * N_i.
  double weight(std::size_t i) const { return coefficients[i] * norms[i]; }
};

struct BasisSet {
  std::string name;
  Contraction hydrogen_1s; // one per H atom
};

inline double contracted_self_overlap(const Contraction &c) {
  double s = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j) {
      const double p = c.exponents[i] + c.exponents[j];
      s += c.weight(i) * c.weight(j) * std::pow(std::numbers::pi / p, 1.5);
    }
  return s;
}

inline BasisSet load_sto3g_hydrogen() {
  BasisSet b;
  b.name = "STO-3G";
  Contraction &c = b.hydrogen_1s;
  c.exponents = {3.42525091, 0.62391373, 0.16885540};
  c.coefficients = {0.15432897, 0.53532814, 0.44463454};
  for (double a : c.exponents)
    c.norms.push_back(std::pow(2.0 * a / std::numbers::pi, 0.75));
  // The published coefficients are normalized to ~1e-8 only.
  const double scale = 1.0 / std::sqrt(contracted_self_overlap(c));
  for (double &n : c.norms)
    n *= scale;
  return b;
}

/// Zeroth-order Boys function F0(x) = (1/2) sqrt(pi/x) erf(sqrt(x)).
inline double boys_f0(double x) {
  if (!(x >= 0.0))
    fail(ErrorKind::InvalidInput, "boys_f0 requires x >= 0");
  if (x < 1e-10)
    return 1.0 - x / 3.0 + x * x / 10.0;
  const double rx = std::sqrt(x);
  return 0.5 * std::sqrt(std::numbers::pi) / rx * std::erf(rx);
}

struct MolecularIntegrals {
  Eigen::MatrixXd S; // overlap
  Eigen::MatrixXd T; // kinetic
  Eigen::MatrixXd V; // nuclear attraction
  Tensor4 eri;       // (pq|rs), chemists' notation
  double e_nuc = 0.0;
  int n_electrons = 0;

  int n_basis() const { return static_cast<int>(S.rows()); }
  Eigen::MatrixXd core_hamiltonian() const { return T + V; }
};

/// Integrals for one contracted 1s function on each of `centers` (bohr),
/// each center carrying a unit nuclear charge.
inline MolecularIntegrals compute_integrals(std::span<const Vec3> centers,
                                            const BasisSet &basis) {
  const int n = static_cast<int>(centers.size());
  require(n >= 1, "compute_integrals needs at least one center");
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (distance(centers[a], centers[b]) < 1e-8)
        fail(ErrorKind::SingularGeometry, "atoms " + std::to_string(a) + " and " +
                                              std::to_string(b) + " coincide");

  const Contraction &c = basis.hydrogen_1s;
  const std::size_t np = c.size();
  const double pi = std::numbers::pi;

  MolecularIntegrals out;
  out.S = Eigen::MatrixXd::Zero(n, n);
  out.T = Eigen::MatrixXd::Zero(n, n);
  out.V = Eigen::MatrixXd::Zero(n, n);
  out.eri = Tensor4(n);
  out.n_electrons = n;

  // Gaussian product data per (pair of centers, pair of primitives).
  struct Product {
    double p;    // combined exponent
    double k;    // d_i d_j exp(-mu R^2)
    Vec3 center; // P
  };
  std::vector<Product> prod(static_cast<std::size_t>(n * n) * np * np);
  auto prod_at = [&](int a, int b, std::size_t i, std::size_t j) -> Product & {
    return prod[((static_cast<std::size_t>(a) * n + b) * np + i) * np + j];
  };

  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const double r2 = distance2(centers[a], centers[b]);
      for (std::size_t i = 0; i < np; ++i)
        for (std::size_t j = 0; j < np; ++j) {
          const double ai = c.exponents[i], bj = c.exponents[j];
          const double p = ai + bj;
          const double mu = ai * bj / p;
          const double k = c.weight(i) * c.weight(j) * std::exp(-mu * r2);
          Vec3 pc;
          for (int x = 0; x < 3; ++x)
            pc[x] = (ai * centers[a][x] + bj * centers[b][x]) / p;
          prod_at(a, b, i, j) = {p, k, pc};

          const double s = k * std::pow(pi / p, 1.5);
          out.S(a, b) += s;
          out.T(a, b) += mu * (3.0 - 2.0 * mu * r2) * s;
          for (int C = 0; C < n; ++C)
            out.V(a, b) -= k * 2.0 * pi / p * boys_f0(p * distance2(pc, centers[C]));
        }
    }

  // Unique quartets only; the remaining seven orderings are copies.
  for (int p = 0; p < n; ++p)
    for (int q = 0; q <= p; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s <= r; ++s) {
          if (p * (p + 1) / 2 + q < r * (r + 1) / 2 + s)
            continue;
          double v = 0.0;
          for (std::size_t i = 0; i < np; ++i)
            for (std::size_t j = 0; j < np; ++j) {
              const Product &A = prod_at(p, q, i, j);
              for (std::size_t k = 0; k < np; ++k)
                for (std::size_t l = 0; l < np; ++l) {
                  const Product &B = prod_at(r, s, k, l);
                  const double sum = A.p + B.p;
                  v += A.k * B.k * 2.0 * std::pow(pi, 2.5) /
                       (A.p * B.p * std::sqrt(sum)) *
                       boys_f0(A.p * B.p / sum * distance2(A.center, B.center));
                }
            }
          for (auto [a, b, cc, d] : {std::array{p, q, r, s}, std::array{q, p, r, s},
                                     std::array{p, q, s, r}, std::array{q, p, s, r},
                                     std::array{r, s, p, q}, std::array{s, r, p, q},
                                     std::array{r, s, q, p}, std::array{s, r, q, p}})
            out.eri(a, b, cc, d) = v;
        }

  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      out.e_nuc += 1.0 / distance(centers[a], centers[b]);
  return out;
}

inline MolecularIntegrals compute_integrals(const GeometrySpec &geom,
                                            const BasisSet &basis) {
  return compute_integrals(std::span<const Vec3>(geom.atoms), basis);
}

} // namespace h4qpe
