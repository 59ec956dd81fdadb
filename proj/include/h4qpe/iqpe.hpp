#pragma once

// Single-ancilla iterative phase estimation. Bits are read from the least
// significant (k = m) to the most significant (k = 1); each bit's circuit is
// rebuilt from the initial state, and already-known lower bits are removed
// from the kicked-back phase by a feedback rotation on the ancilla.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "h4qpe/errors.hpp"
#include "h4qpe/evolution.hpp"
#include "h4qpe/parallel.hpp"
#include "h4qpe/rng.hpp"
#include "h4qpe/statevector.hpp"

namespace h4qpe {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Affine map E -> phi = (E - e_ref) t / 2pi placing the spectrum in [0, 1).
struct PhaseWindow {
  double e_ref = 0.0;
  double t = 1.0;
  double e_min = 0.0; // sector extremes the window was built from
  double e_max = 0.0;

  double phase_of(double energy) const { return (energy - e_ref) * t / kTwoPi; }
  double energy_of(double phi) const { return e_ref + kTwoPi * phi / t; }
};

/// WindowViolation unless every eigenvalue maps into [0, 2pi).
inline void check_window(const PhaseWindow &w, const Eigen::VectorXd &eigenvalues) {
  require(w.t > 0.0, "evolution time must be positive");
  for (Eigen::Index k = 0; k < eigenvalues.size(); ++k) {
    const double a = (eigenvalues(k) - w.e_ref) * w.t;
    if (!(a >= 0.0 && a < kTwoPi))
      fail(ErrorKind::WindowViolation,
           "eigenvalue " + std::to_string(eigenvalues(k)) + " maps to angle " +
               std::to_string(a) + " outside [0, 2pi)");
  }
}

/// t = 1 when the sector span fits in 2pi, else (2pi - guard)/span; the
/// spectrum is then centered on the phase circle.
inline PhaseWindow build_phase_window(const EvolutionCache &cache, double guard = 0.1) {
  const double span = cache.span();
  if (!(span > 0.0))
    fail(ErrorKind::InvalidInput, "sector spectrum has zero span");
  PhaseWindow w;
  w.e_min = cache.eigenvalues(0);
  w.e_max = cache.eigenvalues(cache.eigenvalues.size() - 1);
  w.t = span < kTwoPi ? 1.0 : (kTwoPi - guard) / span;
  const double margin = 0.5 * (kTwoPi / w.t - span);
  w.e_ref = w.e_min - margin;
  check_window(w, cache.eigenvalues);
  return w;
}

enum class IqpeMode { Deterministic, Sampled };

inline std::string to_string(IqpeMode m) {
  return m == IqpeMode::Deterministic ? "deterministic" : "sampled";
}

struct IqpeSettings {
  int m_bits = 14;
  IqpeMode mode = IqpeMode::Deterministic;
  long long shots = 1;     // per bit, sampled mode
  bool ties_to_one = true; // even shot counts split evenly
};

struct PhaseRecord {
  std::vector<int> bits; // bits[j - 1] = phi_j, most significant first
  std::vector<double> p1;
  std::vector<BitCounts> counts; // sampled mode only
  double phase = 0.0;
  double energy = 0.0;
  IqpeMode mode = IqpeMode::Deterministic;
  long long shots = 0;
  std::uint64_t seed = 0;

  std::string bit_string() const {
    std::string s;
    for (int b : bits)
      s += static_cast<char>('0' + b);
    return s;
  }
};

inline double phase_from_bits(const std::vector<int> &bits) {
  double phi = 0.0, w = 0.5;
  for (int b : bits) {
    phi += b * w;
    w *= 0.5;
  }
  return phi;
}

inline double phase_to_energy(double phi, const PhaseWindow &w) {
  require(phi >= 0.0 && phi < 1.0, "phase must lie in [0, 1)");
  return w.energy_of(phi);
}

inline double phase_to_energy(const PhaseRecord &r, const PhaseWindow &w) {
  return phase_to_energy(r.phase, w);
}

/// Ancilla p1 for bit k given the already-extracted bits k+1..m.
inline double iqpe_bit_probability(const Statevector &init, const EvolutionCache &cache,
                                   const PhaseWindow &window, int k,
                                   const std::vector<int> &bits) {
  const int anc = cache.n_qubits;
  Statevector joint = with_ancilla(init);
  apply_hadamard(joint, anc);
  controlled_evolve(joint, cache, window.e_ref, window.t * std::ldexp(1.0, k - 1));
  double omega = 0.0;
  for (int j = k + 1; j <= static_cast<int>(bits.size()); ++j)
    omega += bits[static_cast<std::size_t>(j - 1)] * std::ldexp(1.0, k - j - 1);
  apply_phase(joint, anc, -kTwoPi * omega);
  apply_hadamard(joint, anc);
  return ancilla_probability(joint);
}

inline PhaseRecord run_iqpe(const Statevector &init, const EvolutionCache &cache,
                            const PhaseWindow &window, const IqpeSettings &settings,
                            CounterRng &rng) {
  require(settings.m_bits >= 1 && settings.m_bits <= 52, "m_bits must be in [1, 52]");
  if (settings.mode == IqpeMode::Sampled && settings.shots < 1)
    fail(ErrorKind::InvalidInput, "sampled IQPE needs shots >= 1");
  require(init.n_qubits() == cache.n_qubits, "initial state and cache qubit counts differ");
  check_norm(init);

  const int m = settings.m_bits;
  PhaseRecord r;
  r.mode = settings.mode;
  r.shots = settings.mode == IqpeMode::Sampled ? settings.shots : 0;
  r.seed = rng.seed();
  r.bits.assign(static_cast<std::size_t>(m), 0);
  r.p1.assign(static_cast<std::size_t>(m), 0.0);
  if (settings.mode == IqpeMode::Sampled)
    r.counts.assign(static_cast<std::size_t>(m), BitCounts{});

  for (int k = m; k >= 1; --k) {
    const std::size_t slot = static_cast<std::size_t>(k - 1);
    const double p1 = iqpe_bit_probability(init, cache, window, k, r.bits);
    r.p1[slot] = p1;
    if (settings.mode == IqpeMode::Deterministic) {
      r.bits[slot] = p1 >= 0.5 ? 1 : 0;
    } else {
      const BitCounts c = sample_bits(p1, settings.shots, rng);
      r.counts[slot] = c;
      r.bits[slot] = c.ones > c.zeros || (c.ones == c.zeros && settings.ties_to_one) ? 1 : 0;
    }
  }
  r.phase = phase_from_bits(r.bits);
  r.energy = phase_to_energy(r.phase, window);
  return r;
}

inline PhaseRecord run_iqpe(const Statevector &init, const EvolutionCache &cache,
                            const PhaseWindow &window, int m_bits) {
  CounterRng unused(0);
  return run_iqpe(init, cache, window, {m_bits, IqpeMode::Deterministic, 1, true}, unused);
}

struct ShotStatistics {
  int repetitions = 0;
  int m_bits = 0;
  long long shots = 0;
  std::uint64_t master_seed = 0;
  std::vector<std::uint64_t> seeds;
  std::vector<double> energies;
  double modal_energy = 0.0;
  int modal_frequency = 0;
  double spread = 0.0;              // max - min, hartree
  std::map<double, int> histogram;  // energy -> count
};

/// Reduces per-repetition energies; modal ties go to the lower energy.
inline void summarize(ShotStatistics &s) {
  s.histogram.clear();
  for (double e : s.energies)
    ++s.histogram[e];
  s.modal_frequency = 0;
  for (const auto &[e, n] : s.histogram)
    if (n > s.modal_frequency) {
      s.modal_frequency = n;
      s.modal_energy = e;
    }
  const auto [lo, hi] = std::minmax_element(s.energies.begin(), s.energies.end());
  s.spread = s.energies.empty() ? 0.0 : *hi - *lo;
}

/// R sampled-mode runs on the same initial state, seeds derived from
/// master_seed, so the result does not depend on `threads`.
inline ShotStatistics repeat_experiment(const Statevector &init, const EvolutionCache &cache,
                                        const PhaseWindow &window, int m_bits, long long shots,
                                        int repetitions, std::uint64_t master_seed,
                                        unsigned threads = 1) {
  require(repetitions >= 1, "repetitions must be >= 1");
  ShotStatistics s;
  s.repetitions = repetitions;
  s.m_bits = m_bits;
  s.shots = shots;
  s.master_seed = master_seed;
  s.seeds.resize(static_cast<std::size_t>(repetitions));
  s.energies.resize(static_cast<std::size_t>(repetitions));
  for (std::size_t r = 0; r < s.seeds.size(); ++r)
    s.seeds[r] = CounterRng::derive(master_seed, r);
  const IqpeSettings settings{m_bits, IqpeMode::Sampled, shots, true};
  parallel_for(s.seeds.size(), threads, [&](std::size_t r) {
    CounterRng rng(s.seeds[r]);
    s.energies[r] = run_iqpe(init, cache, window, settings, rng).energy;
  });
  summarize(s);
  return s;
}

inline nlohmann::json to_json(const PhaseWindow &w) {
  return {{"e_ref_hartree", w.e_ref}, {"t", w.t}, {"e_min", w.e_min}, {"e_max", w.e_max}};
}

inline nlohmann::json to_json(const PhaseRecord &r) {
  nlohmann::json j{{"bits", r.bit_string()}, {"phase", r.phase},     {"energy_hartree", r.energy},
                   {"mode", to_string(r.mode)}, {"shots", r.shots}, {"seed", r.seed},
                   {"p1", r.p1}};
  return j;
}

inline nlohmann::json to_json(const ShotStatistics &s) {
  nlohmann::json hist = nlohmann::json::array();
  for (const auto &[e, n] : s.histogram)
    hist.push_back({{"energy_hartree", e}, {"count", n}});
  return {{"repetitions", s.repetitions},
          {"m_bits", s.m_bits},
          {"shots", s.shots},
          {"master_seed", s.master_seed},
          {"seeds", s.seeds},
          {"energies_hartree", s.energies},
          {"modal_energy_hartree", s.modal_energy},
          {"modal_frequency", s.modal_frequency},
          {"spread_hartree", s.spread},
          {"histogram", hist}};
}

inline void write_histogram_csv(std::ostream &os, const ShotStatistics &s,
                                const std::string &tag = "") {
  const auto prec = os.precision(15);
  for (const auto &[e, n] : s.histogram)
    os << tag << (tag.empty() ? "" : ",") << s.shots << ',' << e << ',' << n << '\n';
  os.precision(prec);
}

} // namespace h4qpe
