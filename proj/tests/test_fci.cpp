#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace h4qpe;

TEST(Jacobi, MatchesEigenSolver) {
  std::mt19937_64 g(21);
  std::normal_distribution<double> d;
  Eigen::MatrixXd a(12, 12);
  for (Eigen::Index i = 0; i < 12; ++i)
    for (Eigen::Index j = 0; j <= i; ++j)
      a(i, j) = a(j, i) = d(g);
  const SymmetricEigen j = jacobi_eigensolver(a);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(a);
  EXPECT_LT((j.values - ref.eigenvalues()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((a * j.vectors - j.vectors * j.values.asDiagonal()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((j.vectors.transpose() * j.vectors - Eigen::MatrixXd::Identity(12, 12))
                .cwiseAbs()
                .maxCoeff(),
            1e-13);
  for (Eigen::Index k = 1; k < 12; ++k)
    EXPECT_LE(j.values(k - 1), j.values(k));
}

TEST(Fci, SectorSpectrumMatchesDeterminantOracle) {
  for (double beta : {80.0, 89.8, 95.0}) {
    const H4System sys = build_system(beta);
    ASSERT_EQ(sys.fci.dim(), 36u);
    const Eigen::MatrixXd ref = oracle::determinant_hamiltonian(sys.so, oracle::determinants(4, 2, 2));
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(ref).eigenvalues();
    EXPECT_LT((sys.fci.energies - ev).cwiseAbs().maxCoeff(), 1e-10) << "beta " << beta;
    EXPECT_LT((sys.cache.eigenvalues - ev).cwiseAbs().maxCoeff(), 1e-10) << "beta " << beta;
  }
}

TEST(Fci, SectorSpectrumInsideFullSpace) {
  const H4System sys = build_system(86.0);
  const Eigen::VectorXd full =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(oracle::dense(sys.h)).eigenvalues();
  EXPECT_NEAR(full(0), sys.e_fci(), 1e-10); // the 4-electron singlet sector holds the minimum
  for (Eigen::Index k = 0; k < sys.fci.energies.size(); ++k) {
    double gap = 1.0;
    for (Eigen::Index j = 0; j < full.size(); ++j)
      gap = std::min(gap, std::abs(full(j) - sys.fci.energies(k)));
    EXPECT_LT(gap, 1e-10);
  }
}

TEST(Fci, GroundStateCoefficientsAtEightyDegrees) {
  const H4System sys = build_system(80.0);
  EXPECT_NEAR(sys.e_fci(), -1.880165481, 1e-8);
  EXPECT_GT(sys.fci.coefficient(0, "00110011"), 0.0); // gauge: largest component positive
  EXPECT_NEAR(sys.fci.coefficient(0, "00110011"), 0.642, 0.005);
  EXPECT_EQ(sys.fci.coefficient(0, "00000000"), 0.0);
  const Statevector gs = sys.fci.state(0);
  EXPECT_NEAR(gs.norm(), 1.0, 1e-12);
  EXPECT_NEAR(expectation(gs, sys.h), sys.e_fci(), 1e-10);
}

TEST(Fci, GaugeTieBreaksToLowestIndex) {
  Eigen::MatrixXd v(3, 1);
  v << 0.6, -0.6, std::sqrt(0.28);
  detail::fix_eigenvector_gauge(v);
  EXPECT_GT(v(0, 0), 0.0);
  v << -0.6, 0.6, std::sqrt(0.28);
  detail::fix_eigenvector_gauge(v);
  EXPECT_GT(v(0, 0), 0.0);
  EXPECT_LT(v(1, 0), 0.0);
}

TEST(Fci, StateLabelsFollowHartreeFockScreen) {
  const H4System a = build_system(80.0);
  EXPECT_EQ(a.fci.index_of("GS"), 0);
  EXPECT_EQ(a.fci.index_of("ES1"), 3);
  const H4System b = build_system(89.8);
  EXPECT_EQ(b.fci.index_of("ES1"), 2);
  EXPECT_EQ(b.fci.index_of("ES2"), 12);
  EXPECT_EQ(b.fci.index_of("ES3"), 21);
  EXPECT_NEAR(std::abs(b.fci.coefficient(2, "00110011")), 0.297, 0.01);
  try {
    identify_states(b.fci, b.hf, 0.5);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::MissingLabel);
  }
  try {
    b.fci.index_of("ES9");
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::MissingLabel);
  }
}

TEST(Fci, OverlapReport) {
  const H4System sys = build_system(89.8);
  const OverlapReport r = overlaps(sys.hf, sys.fci);
  EXPECT_NEAR(r.sector_weight, 1.0, 1e-12);
  double sum = 0.0;
  for (const OverlapEntry &e : r.entries) {
    EXPECT_NEAR(e.probability, std::pow(sys.fci.coefficient(e.index, "00110011"), 2), 1e-12);
    sum += e.probability;
  }
  EXPECT_NEAR(r.residual, 1.0 - sum, 1e-12);
  const OverlapReport gs = overlaps(sys.fci.state(0), sys.fci);
  EXPECT_NEAR(gs.probability("GS"), 1.0, 1e-12);
  EXPECT_NEAR(gs.probability("ES1"), 0.0, 1e-12);
}

TEST(Fci, RejectsNonConservingHamiltonian) {
  QubitHamiltonian h;
  h.n_qubits = 8;
  h.terms.emplace_back(PauliString::parse("IIII IIIX"), 0.3);
  h.terms.emplace_back(PauliString::parse("IIII IIIZ"), 1.0);
  try {
    fci_solve(h, 4, 0.0);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidInput);
  }
}

TEST(Fci, CoefficientsCsv) {
  const H4System sys = build_system(80.0);
  std::ostringstream os;
  write_coefficients_csv(os, sys.fci);
  EXPECT_NE(os.str().find("00110011"), std::string::npos);
}
