#include <random>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace h4qpe;

namespace {

double number_expectation(const Statevector &s, const PauliSum &op) {
  return expectation(s, op).real();
}

double variance(const Statevector &s, const PauliSum &op) {
  const double m = number_expectation(s, op);
  return expectation(s, op * op).real() - m * m;
}

} // namespace

TEST(Pool, FullUccdHasEighteenSzConservingDoubles) {
  const ExcitationPool pool = build_uccd_pool();
  ASSERT_EQ(pool.size(), 18u);
  std::set<Excitation> seen;
  for (const Excitation &x : pool.ops) {
    EXPECT_LT(x.i, x.j);
    EXPECT_LT(x.a, x.b);
    for (int o : {x.i, x.j})
      EXPECT_LT(o % 4, 2);
    for (int v : {x.a, x.b})
      EXPECT_GE(v % 4, 2);
    EXPECT_EQ((x.i / 4) + (x.j / 4), (x.a / 4) + (x.b / 4)) << "spin changes";
    EXPECT_TRUE(seen.insert(x).second);
  }
  // 1 alpha-alpha + 1 beta-beta + 16 alpha-beta
  int same = 0;
  for (const Excitation &x : pool.ops)
    same += (x.i / 4 == x.j / 4);
  EXPECT_EQ(same, 2);
}

TEST(Pool, MinimalIsHomoLumoPair) {
  const ExcitationPool pool = build_minimal_pool();
  ASSERT_EQ(pool.size(), 1u);
  EXPECT_EQ(pool.ops[0], (Excitation{1, 5, 2, 6}));
  EXPECT_EQ(pool.flavor, PoolFlavor::Minimal);
  EXPECT_THROW(build_minimal_pool({2, 5}, {3, 6}), Error);
  EXPECT_THROW(build_minimal_pool({1, 5}, {2, 3}), Error);
}

TEST(Circuit, ConservesNumberAndSpin) {
  const ExcitationPool pool = build_uccd_pool();
  const PreparedCircuit circuit = build_circuit(pool);
  const PauliSum n = number_operator(8), sz = sz_operator(8);
  std::mt19937_64 g(17);
  std::normal_distribution<double> d(0.0, 0.4);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> theta(pool.size());
    for (double &t : theta)
      t = d(g);
    const Statevector s = prepare_state(circuit, theta, hf_state(4, 4));
    EXPECT_NEAR(s.norm(), 1.0, 1e-12);
    EXPECT_NEAR(number_expectation(s, n), 4.0, 1e-10);
    EXPECT_NEAR(number_expectation(s, sz), 0.0, 1e-10);
    EXPECT_LT(std::abs(variance(s, n)), 1e-10);
    EXPECT_LT(std::abs(variance(s, sz)), 1e-10);
  }
}

TEST(Circuit, MatchesDenseExponentialProduct) {
  const ExcitationPool pool = build_uccd_pool();
  const PreparedCircuit circuit = build_circuit(pool);
  std::vector<double> theta(pool.size());
  for (std::size_t k = 0; k < theta.size(); ++k)
    theta[k] = 0.05 * static_cast<double>(k) - 0.3;
  Eigen::VectorXcd v = oracle::to_eigen(hf_state(4, 4));
  for (std::size_t k = 0; k < pool.size(); ++k)
    v = (theta[k] * oracle::dense(map_excitation(pool.ops[k], 8))).exp() * v;
  const Statevector s = prepare_state(circuit, theta, hf_state(4, 4));
  EXPECT_LT((oracle::to_eigen(s) - v).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Circuit, MinimalPoolIsTwoLevelRotation) {
  const ExcitationPool pool = build_minimal_pool();
  const std::uint64_t hf = parse_bitstring("00110011");
  const std::uint64_t dbl = parse_bitstring("01010101");
  for (double theta : {-1.2, -0.78, 0.0, 0.4, 1.5}) {
    AmplitudeVector a = zero_amplitudes(pool);
    a.values[0] = theta;
    const Statevector s = prepare_state(pool, a, hf_state(4, 4));
    EXPECT_NEAR(s[hf].real(), std::cos(theta), 1e-13);
    EXPECT_NEAR(s[dbl].real(), std::sin(theta), 1e-13);
    EXPECT_NEAR(std::norm(s[hf]) + std::norm(s[dbl]), 1.0, 1e-13);
  }
}

TEST(Circuit, TrotterStepsSplitParameters) {
  const ExcitationPool pool = build_uccd_pool();
  std::vector<double> theta(pool.size(), 0.0);
  theta[3] = 0.7;
  // a single generator is exact for any step count
  const Statevector a = prepare_state(build_circuit(pool, 1), theta, hf_state(4, 4));
  const Statevector b = prepare_state(build_circuit(pool, 8), theta, hf_state(4, 4));
  EXPECT_NEAR(std::abs(inner_product(a, b)), 1.0, 1e-13);
  EXPECT_THROW(build_circuit(pool, 0), Error);
  EXPECT_THROW(prepare_state(build_circuit(pool), std::vector<double>(3, 0.0), hf_state(4, 4)),
               Error);
}

TEST(Circuit, GeneratorTermsCommute) {
  for (const Generator &g : build_circuit(build_uccd_pool()).generators) {
    EXPECT_TRUE(g.commuting);
    EXPECT_EQ(g.terms.size(), 8u);
  }
}

TEST(Pool, TextDump) {
  std::ostringstream os;
  write_pool(os, build_minimal_pool());
  EXPECT_NE(os.str().find('a'), std::string::npos);
  EXPECT_NE(os.str().find('b'), std::string::npos);
}
