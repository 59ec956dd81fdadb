#include <sstream>

#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace h4qpe;

namespace {

const H4System &system80() {
  static const H4System s = build_system(80.0);
  return s;
}

VqeTrace run(const H4System &sys, InitialGuess guess, int evals) {
  VqeConfig cfg;
  cfg.guess = guess;
  cfg.max_iterations = evals;
  return run_vqe(sys.h, build_uccd_pool(), cfg, sys.so, sys.scf.orbital_energies);
}

} // namespace

TEST(Vqe, DeterministicRecords) {
  const VqeTrace a = run(system80(), InitialGuess::Mp2, 150);
  const VqeTrace b = run(system80(), InitialGuess::Mp2, 150);
  ASSERT_EQ(a.size(), 150u);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a.records[k].energy, b.records[k].energy);
    EXPECT_EQ(a.records[k].theta, b.records[k].theta);
    EXPECT_EQ(a.records[k].eval_index, static_cast<int>(k));
  }
}

TEST(Vqe, StartsAtGuessAndRespectsVariationalBound) {
  const H4System &sys = system80();
  const VqeTrace zero = run(sys, InitialGuess::Zero, 300);
  EXPECT_NEAR(zero.records.front().energy, sys.scf.e_hf, 1e-10);
  for (double t : zero.records.front().theta)
    EXPECT_EQ(t, 0.0);
  const VqeTrace mp2 = run(sys, InitialGuess::Mp2, 300);
  const AmplitudeVector guess =
      mp2_amplitudes(sys.so, sys.scf.orbital_energies, build_uccd_pool()).amplitudes;
  EXPECT_EQ(mp2.records.front().theta, guess.values);
  for (const VqeTrace *t : {&zero, &mp2})
    for (const VqeRecord &r : t->records)
      EXPECT_GE(r.energy, sys.e_fci() - 1e-12);
}

TEST(Vqe, BestSoFarEnvelopeIsMonotone) {
  const H4System &sys = system80();
  const VqeTrace t = run(sys, InitialGuess::Zero, 400);
  double prev = expectation(state_at_iteration(t, 0), sys.h);
  for (std::size_t k = 1; k <= t.size(); k += 13) {
    const double e = expectation(state_at_iteration(t, k), sys.h);
    EXPECT_LE(e, prev + 1e-14) << "k = " << k;
    prev = e;
  }
  EXPECT_NEAR(expectation(state_at_iteration(t, t.size()), sys.h), t.energy, 1e-12);
  EXPECT_THROW(state_at_iteration(t, t.size() + 1), Error);
}

TEST(Vqe, ThetaAtIterationSemantics) {
  const VqeTrace t = run(system80(), InitialGuess::Mp2, 60);
  EXPECT_EQ(theta_at_iteration(t, 0), t.records[0].theta);
  EXPECT_EQ(theta_at_iteration(t, 1), t.records[0].theta);
  std::size_t best = 0;
  for (std::size_t i = 0; i < 30; ++i)
    if (t.records[i].energy < t.records[best].energy)
      best = i;
  EXPECT_EQ(theta_at_iteration(t, 30), t.records[best].theta);
  EXPECT_EQ(theta_at_iteration(t, t.size()), t.theta);
}

TEST(Vqe, ConvergedGradientVanishes) {
  const H4System &sys = system80();
  const VqeTrace t = run(sys, InitialGuess::Mp2, 20000);
  ASSERT_TRUE(t.converged);
  EXPECT_LT(t.energy - sys.e_fci(), 1e-4);
  const PreparedCircuit circuit = build_circuit(t.pool);
  const double h = 1e-4;
  for (std::size_t k = 0; k < t.theta.size(); ++k) {
    std::vector<double> plus = t.theta, minus = t.theta;
    plus[k] += h;
    minus[k] -= h;
    const double g = (expectation(prepare_state(circuit, plus, t.hf), sys.h) -
                      expectation(prepare_state(circuit, minus, t.hf), sys.h)) /
                     (2.0 * h);
    EXPECT_LT(std::abs(g), 1e-4) << "parameter " << k;
  }
}

TEST(Vqe, SampledObjectiveSeededAndUnbiased) {
  const H4System &sys = system80();
  const Statevector s = sys.hf;
  CounterRng a(3), b(3);
  EXPECT_EQ(detail::sampled_energy(s, sys.h, 100, a), detail::sampled_energy(s, sys.h, 100, b));
  CounterRng r(4);
  double mean = 0.0;
  const int reps = 400;
  for (int k = 0; k < reps; ++k)
    mean += detail::sampled_energy(s, sys.h, 1000, r);
  mean /= reps;
  EXPECT_NEAR(mean, sys.scf.e_hf, 5e-3);

  VqeConfig cfg;
  cfg.objective = ObjectiveMode::Sampled;
  cfg.max_iterations = 40;
  cfg.seed = 9;
  const VqeTrace x = run_vqe(sys.h, build_minimal_pool(), cfg, zero_amplitudes(build_minimal_pool()));
  const VqeTrace y = run_vqe(sys.h, build_minimal_pool(), cfg, zero_amplitudes(build_minimal_pool()));
  ASSERT_EQ(x.size(), y.size());
  for (std::size_t k = 0; k < x.size(); ++k)
    EXPECT_EQ(x.records[k].energy, y.records[k].energy);
}

TEST(Vqe, MinimalPoolConvergesQuickly) {
  const H4System sys = build_system(89.8);
  VqeConfig cfg;
  cfg.guess = InitialGuess::Mp2;
  cfg.max_iterations = 1000;
  const VqeTrace t = run_vqe(sys.h, build_minimal_pool(), cfg, sys.so, sys.scf.orbital_energies);
  EXPECT_TRUE(t.converged);
  EXPECT_LT(t.size(), 60u);
  // one-parameter problem: the exact minimum of a + b cos 2t + c sin 2t
  const PreparedCircuit c = build_circuit(t.pool);
  auto e = [&](double th) { return expectation(prepare_state(c, std::vector<double>{th}, t.hf), sys.h); };
  const double e0 = e(0.0), ep = e(std::numbers::pi / 4), em = e(-std::numbers::pi / 4);
  const double a = 0.5 * (ep + em), cc = e0 - a, s = 0.5 * (ep - em);
  EXPECT_NEAR(t.energy, a - std::hypot(cc, s), 1e-9);
}

TEST(Vqe, ConfigValidation) {
  const H4System &sys = system80();
  VqeConfig cfg;
  cfg.max_iterations = 0;
  EXPECT_THROW(run_vqe(sys.h, build_minimal_pool(), cfg, zero_amplitudes(build_minimal_pool())),
               Error);
  cfg = {};
  EXPECT_THROW(run_vqe(sys.h, build_uccd_pool(), cfg, zero_amplitudes(build_minimal_pool())),
               Error);
}

TEST(Vqe, TraceCsv) {
  const VqeTrace t = run(system80(), InitialGuess::Zero, 5);
  std::ostringstream os;
  write_trace_csv(os, t);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line.rfind("eval_index,energy_hartree,theta_0,", 0), 0u);
  int rows = 0;
  while (std::getline(is, line))
    ++rows;
  EXPECT_EQ(rows, 5);
}
