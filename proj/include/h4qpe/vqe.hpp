#pragma once

// UCCD-VQE driver: COBYLA over the ansatz energy with a record of every
// objective evaluation. "Iterations" here means objective evaluations.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "h4qpe/ansatz.hpp"
#include "h4qpe/cobyla.hpp"
#include "h4qpe/errors.hpp"
#include "h4qpe/excitation.hpp"
#include "h4qpe/qham.hpp"
#include "h4qpe/rng.hpp"
#include "h4qpe/scf.hpp"
#include "h4qpe/statevector.hpp"

namespace h4qpe {

enum class InitialGuess { Zero, Mp2 };
enum class ObjectiveMode { Exact, Sampled };

inline std::string to_string(InitialGuess g) { return g == InitialGuess::Zero ? "zero" : "mp2"; }
inline std::string to_string(ObjectiveMode m) {
  return m == ObjectiveMode::Exact ? "exact" : "sampled";
}

struct VqeConfig {
  InitialGuess guess = InitialGuess::Mp2;
  int max_iterations = 1000; // objective evaluations
  PoolFlavor pool = PoolFlavor::FullUccd;
  ObjectiveMode objective = ObjectiveMode::Exact;
  long long shots = 1000; // per Pauli term, sampled mode only
  double rhobeg = 0.1;
  double rhoend = 1e-6;
  std::uint64_t seed = 0;
  int trotter_steps = 1;

  void validate() const {
    require(max_iterations >= 1, "max_iterations must be >= 1");
    require(rhobeg > 0.0 && rhoend > 0.0 && rhoend < rhobeg, "need 0 < rhoend < rhobeg");
    require(trotter_steps >= 1, "trotter_steps must be >= 1");
    require(objective == ObjectiveMode::Exact || shots >= 1, "shots must be >= 1");
  }
};

struct VqeRecord {
  int eval_index = 0;
  std::vector<double> theta;
  double energy = 0.0;
};

struct VqeTrace {
  ExcitationPool pool;
  int trotter_steps = 1;
  Statevector hf;
  std::vector<VqeRecord> records;
  std::vector<double> theta; // best evaluated parameters
  double energy = 0.0;       // best evaluated energy
  bool converged = false;

  std::size_t size() const noexcept { return records.size(); }
};

/// Zero vector, or MP2 amplitudes (DegenerateDenominator propagates).
inline AmplitudeVector initial_amplitudes(InitialGuess guess, const SpinOrbitalIntegrals &so,
                                          const Eigen::VectorXd &eps,
                                          const ExcitationPool &pool) {
  if (guess == InitialGuess::Zero)
    return zero_amplitudes(pool);
  return mp2_amplitudes(so, eps, pool).amplitudes;
}

namespace detail {

/// Each non-identity term estimated from `shots` +-1 outcomes.
inline double sampled_energy(const Statevector &state, const QubitHamiltonian &h,
                             long long shots, CounterRng &rng) {
  double e = 0.0;
  for (const auto &[p, c] : h.terms) {
    if (p.is_identity()) {
      e += c;
      continue;
    }
    const double mean = expectation(state.amplitudes(), p).real();
    const double plus = std::clamp(0.5 * (1.0 + mean), 0.0, 1.0);
    std::binomial_distribution<long long> draw(shots, plus);
    const long long n_plus = draw(rng);
    e += c * (2.0 * static_cast<double>(n_plus) - static_cast<double>(shots)) /
         static_cast<double>(shots);
  }
  return e;
}

} // namespace detail

inline VqeTrace run_vqe(const QubitHamiltonian &h, const ExcitationPool &pool,
                        const VqeConfig &config, const AmplitudeVector &theta0) {
  config.validate();
  require(pool.n_spin_orbitals() == h.n_qubits, "pool and Hamiltonian qubit counts differ");
  require(theta0.size() == pool.size(), "initial amplitude count does not match the pool");

  VqeTrace trace;
  trace.pool = pool;
  trace.trotter_steps = config.trotter_steps;
  trace.hf = hf_state(pool.n_spatial, pool.n_electrons);
  const PreparedCircuit circuit = build_circuit(pool, config.trotter_steps);
  CounterRng rng(config.seed);

  auto objective = [&](std::span<const double> theta) {
    const Statevector s = prepare_state(circuit, theta, trace.hf);
    const double e = config.objective == ObjectiveMode::Exact
                         ? expectation(s, h)
                         : detail::sampled_energy(s, h, config.shots, rng);
    if (!std::isfinite(e))
      fail(ErrorKind::StateCorrupt, "non-finite VQE energy");
    return e;
  };
  auto record = [&](int k, std::span<const double> theta, double e) {
    trace.records.push_back({k, {theta.begin(), theta.end()}, e});
  };

  CobylaOptions opt;
  opt.rhobeg = config.rhobeg;
  opt.rhoend = config.rhoend;
  opt.maxfun = config.max_iterations;
  const CobylaResult res = cobyla_minimize(objective, theta0.values, opt, record);
  trace.theta = res.x;
  trace.energy = res.f;
  trace.converged = res.converged;
  return trace;
}

inline VqeTrace run_vqe(const QubitHamiltonian &h, const ExcitationPool &pool,
                        const VqeConfig &config, const SpinOrbitalIntegrals &so,
                        const Eigen::VectorXd &eps) {
  return run_vqe(h, pool, config, initial_amplitudes(config.guess, so, eps, pool));
}

/// Parameters held by the optimizer after k evaluations: theta_0 for k = 0,
/// else the lowest-energy point among evaluations 0..k-1.
inline const std::vector<double> &theta_at_iteration(const VqeTrace &trace, std::size_t k) {
  if (trace.records.empty() || k > trace.records.size())
    fail(ErrorKind::InvalidInput, "iteration " + std::to_string(k) + " outside trace of " +
                                      std::to_string(trace.records.size()));
  if (k == 0)
    return trace.records.front().theta;
  std::size_t best = 0;
  for (std::size_t i = 1; i < k; ++i)
    if (trace.records[i].energy < trace.records[best].energy)
      best = i;
  return trace.records[best].theta;
}

inline Statevector state_at_iteration(const VqeTrace &trace, std::size_t k) {
  const PreparedCircuit circuit = build_circuit(trace.pool, trace.trotter_steps);
  return prepare_state(circuit, theta_at_iteration(trace, k), trace.hf);
}

inline void write_trace_csv(std::ostream &os, const VqeTrace &trace) {
  os << "eval_index,energy_hartree";
  for (std::size_t k = 0; k < trace.pool.size(); ++k)
    os << ",theta_" << k;
  os << '\n';
  const auto prec = os.precision(17);
  for (const VqeRecord &r : trace.records) {
    os << r.eval_index << ',' << r.energy;
    for (double t : r.theta)
      os << ',' << t;
    os << '\n';
  }
  os.precision(prec);
}

} // namespace h4qpe
