#pragma once

// End-to-end drivers: geometry -> integrals -> RHF -> qubit Hamiltonian ->
// FCI oracle, reference-state preparation, and the PES / IQPE convergence /
// overlap scan / shot statistics experiments with their artifacts.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "h4qpe/ansatz.hpp"
#include "h4qpe/config.hpp"
#include "h4qpe/errors.hpp"
#include "h4qpe/evolution.hpp"
#include "h4qpe/fci.hpp"
#include "h4qpe/fcidump.hpp"
#include "h4qpe/iqpe.hpp"
#include "h4qpe/molsys.hpp"
#include "h4qpe/parallel.hpp"
#include "h4qpe/qham.hpp"
#include "h4qpe/scf.hpp"
#include "h4qpe/vqe.hpp"

namespace h4qpe {

struct H4System {
  double beta = 0.0;
  double radius = kDefaultRadiusAngstrom;
  MolecularIntegrals ints;
  ScfResult scf;
  SpinOrbitalIntegrals so;
  QubitHamiltonian h;
  FciSolution fci;
  EvolutionCache cache;
  PhaseWindow window;
  Statevector hf;

  double e_fci() const { return fci.energies(0); }
};

/// Full pipeline at one geometry. With `label_states` the FCI solution gets
/// GS/ES1..ES3 labels (MissingLabel propagates).
inline H4System build_system(double beta, double radius = kDefaultRadiusAngstrom,
                             bool label_states = true) {
  H4System s;
  s.beta = beta;
  s.radius = radius;
  s.ints = compute_integrals(build_h4_geometry(beta, radius), load_sto3g_hydrogen());
  s.scf = run_rhf(s.ints);
  s.so = to_spin_orbitals(s.ints, s.scf);
  s.h = jordan_wigner(s.so);
  s.hf = hf_state(s.so.n_spatial, s.so.n_electrons);
  s.fci = fci_solve(s.h, s.so.n_electrons, 0.0);
  if (label_states)
    s.fci.labels = identify_states(s.fci, s.hf);
  s.cache = build_evolution_cache(s.h, s.so.n_electrons, 0.0);
  s.window = build_phase_window(s.cache);
  return s;
}

enum class PrepKind { Hf, UccdFull, UccdMin };

struct PrepSpec {
  PrepKind kind = PrepKind::Hf;
  int evals = 0; // VQE objective evaluations; unused for Hf

  std::string text() const {
    switch (kind) {
    case PrepKind::Hf:
      return "hf";
    case PrepKind::UccdFull:
      return "uccd-full:" + std::to_string(evals);
    case PrepKind::UccdMin:
      return "uccd-min:" + std::to_string(evals);
    }
    return "?";
  }

  /// "hf", "uccd-full[:evals]", "uccd-min[:evals]".
  static PrepSpec parse(const std::string &s, int default_full = 200, int default_min = 24) {
    const auto colon = s.find(':');
    const std::string head = s.substr(0, colon);
    PrepSpec p;
    if (head == "hf") {
      if (colon != std::string::npos)
        fail(ErrorKind::InvalidInput, "prep 'hf' takes no evaluation budget");
      return p;
    }
    if (head == "uccd-full") {
      p.kind = PrepKind::UccdFull;
      p.evals = default_full;
    } else if (head == "uccd-min") {
      p.kind = PrepKind::UccdMin;
      p.evals = default_min;
    } else {
      fail(ErrorKind::InvalidInput, "unknown prep '" + s + "'");
    }
    if (colon != std::string::npos)
      p.evals = detail::parse_number<int>("preps", s.substr(colon + 1));
    require(p.evals >= 1, "prep evaluation budget must be >= 1");
    return p;
  }
};

inline InitialGuess parse_guess(const std::string &s) {
  if (s == "zero")
    return InitialGuess::Zero;
  if (s == "mp2")
    return InitialGuess::Mp2;
  fail(ErrorKind::InvalidInput, "guess must be zero or mp2, got '" + s + "'");
}

struct VqeSettings {
  InitialGuess guess = InitialGuess::Mp2;
  double rhobeg = 0.1;
  double rhoend = 1e-6;
  int trotter_steps = 1;
};

struct PreparedReference {
  Statevector state;
  std::optional<VqeTrace> trace;
  InitialGuess guess_used = InitialGuess::Zero;
  bool fell_back = false; // MP2 unavailable, zero guess used instead
};

/// VQE run on `sys` with the given pool and budget. An MP2 guess that hits
/// a degenerate denominator falls back to the zero guess.
inline PreparedReference run_reference_vqe(const H4System &sys, const ExcitationPool &pool,
                                           int evals, const VqeSettings &vs) {
  VqeConfig cfg;
  cfg.guess = vs.guess;
  cfg.max_iterations = evals;
  cfg.pool = pool.flavor;
  cfg.rhobeg = vs.rhobeg;
  cfg.rhoend = vs.rhoend;
  cfg.trotter_steps = vs.trotter_steps;
  PreparedReference r;
  AmplitudeVector theta0;
  try {
    theta0 = initial_amplitudes(vs.guess, sys.so, sys.scf.orbital_energies, pool);
    r.guess_used = vs.guess;
  } catch (const Error &e) {
    if (e.kind() != ErrorKind::DegenerateDenominator)
      throw;
    std::clog << "warning: beta=" << sys.beta << ": " << e.what()
              << "; falling back to the zero guess\n";
    theta0 = zero_amplitudes(pool);
    r.guess_used = InitialGuess::Zero;
    r.fell_back = true;
  }
  r.trace = run_vqe(sys.h, pool, cfg, theta0);
  r.state = state_at_iteration(*r.trace, r.trace->size());
  return r;
}

inline PreparedReference prepare_reference(const H4System &sys, const PrepSpec &spec,
                                           const VqeSettings &vs = {}) {
  switch (spec.kind) {
  case PrepKind::Hf: {
    PreparedReference r;
    r.state = sys.hf;
    return r;
  }
  case PrepKind::UccdFull:
    return run_reference_vqe(sys, build_uccd_pool(sys.so.n_spatial, sys.so.n_electrons),
                             spec.evals, vs);
  case PrepKind::UccdMin:
    return run_reference_vqe(sys, build_minimal_pool(), spec.evals, vs);
  }
  fail(ErrorKind::InvalidInput, "unknown prep kind");
}

/// max(deviation) - min(deviation).
inline double non_parallelity_error(const std::vector<double> &method,
                                    const std::vector<double> &reference) {
  require(method.size() == reference.size() && !method.empty(), "NPE needs matching curves");
  double lo = method[0] - reference[0], hi = lo;
  for (std::size_t i = 1; i < method.size(); ++i) {
    lo = std::min(lo, method[i] - reference[i]);
    hi = std::max(hi, method[i] - reference[i]);
  }
  return hi - lo;
}

// ---------------------------------------------------------------------------
// Commands

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct CommandResult {
  std::vector<std::string> artifacts;
  std::vector<Check> checks;
  nlohmann::json summary;

  bool all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check &c) { return c.passed; });
  }
};

inline std::vector<double> default_pes_grid() {
  std::vector<double> g;
  for (int b = 80; b <= 100; ++b)
    if (b == 90) {
      g.push_back(89.8);
      g.push_back(90.2);
    } else {
      g.push_back(b);
    }
  return g;
}

/// Per-command defaults, before config file and flag overrides.
inline ExperimentConfig default_config(const std::string &command) {
  ExperimentConfig c;
  if (command == "pes") {
    c.betas = default_pes_grid();
    c.bits = 16;
  } else if (command == "iqpe-conv") {
    c.betas = {80.0, 85.0, 89.8};
  } else if (command == "overlap-scan") {
    c.betas = {89.8};
  } else if (command == "shot-stats") {
    c.betas = {89.8};
    c.bits = 14;
  } else {
    c.betas = {80.0};
  }
  return c;
}

inline void validate_config(const std::string &command, const ExperimentConfig &c) {
  auto bad = [](const std::string &m) { fail(ErrorKind::InvalidInput, m); };
  if (c.betas.empty())
    bad("betas must not be empty");
  for (double b : c.betas) {
    if (!(b >= 70.0 && b <= 110.0))
      bad("beta " + detail::format_double(b) + " outside [70, 110] degrees");
    if (b == 90.0)
      bad("beta = 90 is the degenerate square geometry; use 89.8 or 90.2 instead");
    if (command == "pes" && !(b >= 80.0 && b <= 100.0))
      bad("pes grid must lie within [80, 100] degrees");
  }
  if (!(c.radius > 0.0 && c.radius < 100.0))
    bad("radius must be in (0, 100) angstrom");
  for (const std::string &m : c.methods)
    if (m != "hf" && m != "vqe" && m != "iqpe-over-vqe" && m != "fci")
      bad("unknown method '" + m + "'");
  for (const std::string &p : c.preps)
    PrepSpec::parse(p);
  for (const std::string &g : c.guesses)
    parse_guess(g);
  parse_guess(c.guess);
  if (c.vqe_evals < 1 || c.vqe_evals > 1000000)
    bad("vqe_evals must be in [1, 1e6]");
  if (c.bits < 1 || c.bits > 30)
    bad("bits must be in [1, 30]");
  if (c.bits_min < 1 || c.bits_max > 30 || c.bits_min > c.bits_max)
    bad("need 1 <= bits_min <= bits_max <= 30");
  if (c.shots.empty())
    bad("shots must not be empty");
  for (long long s : c.shots)
    if (s < 1 || s > 100000000)
      bad("shots must be in [1, 1e8]");
  if (c.repetitions < 1 || c.repetitions > 100000)
    bad("repetitions must be in [1, 1e5]");
  for (int k : c.checkpoints)
    if (k < 0 || k > 1000000)
      bad("checkpoints must be in [0, 1e6]");
  if (c.threads > 1024)
    bad("threads must be <= 1024");
  if (!(c.rhobeg > 0.0 && c.rhoend > 0.0 && c.rhoend < c.rhobeg))
    bad("need 0 < rhoend < rhobeg");
  if (c.trotter_steps < 1 || c.trotter_steps > 1000)
    bad("trotter_steps must be in [1, 1000]");
  if (c.out.empty())
    bad("out must not be empty");
}

inline VqeSettings vqe_settings(const ExperimentConfig &c, InitialGuess g) {
  return {g, c.rhobeg, c.rhoend, c.trotter_steps};
}

namespace detail {

inline void write_header(std::ostream &os, const std::string &command,
                         const std::string &schema, const ExperimentConfig &c) {
  os << "# h4qpe " << command << '\n' << "# schema = " << schema << '\n';
  std::istringstream cfg(to_text(c));
  for (std::string line; std::getline(cfg, line);)
    os << "# " << line << '\n';
}

inline std::filesystem::path open_artifact(std::ofstream &f, const ExperimentConfig &c,
                                           const std::string &name) {
  std::filesystem::create_directories(c.out);
  const std::filesystem::path p = std::filesystem::path(c.out) / name;
  f.open(p);
  if (!f)
    fail(ErrorKind::InvalidInput, "cannot write " + p.string());
  f << std::setprecision(15);
  return p;
}

} // namespace detail

inline CommandResult cmd_pes(const ExperimentConfig &c) {
  validate_config("pes", c);
  const std::size_t n = c.betas.size();
  const auto has = [&](const char *m) {
    return std::find(c.methods.begin(), c.methods.end(), m) != c.methods.end();
  };
  const bool need_vqe = has("vqe") || has("iqpe-over-vqe");
  std::vector<double> e_hf(n), e_fci(n), e_vqe(n), e_iqpe(n);
  parallel_for(n, c.threads, [&](std::size_t i) {
    const H4System sys = build_system(c.betas[i], c.radius, false);
    e_hf[i] = sys.scf.e_hf;
    e_fci[i] = sys.e_fci();
    if (need_vqe) {
      const PreparedReference ref =
          prepare_reference(sys, {PrepKind::UccdFull, c.vqe_evals},
                            vqe_settings(c, parse_guess(c.guess)));
      e_vqe[i] = ref.trace->energy;
      if (has("iqpe-over-vqe"))
        e_iqpe[i] = run_iqpe(ref.state, sys.cache, sys.window, c.bits).energy;
    }
  });

  CommandResult res;
  std::ofstream f;
  res.artifacts.push_back(detail::open_artifact(f, c, "pes.csv").string());
  detail::write_header(f, "pes", "pes/1", c);
  f << "beta_deg,method,energy_hartree,deviation_hartree\n";
  std::vector<std::pair<std::string, const std::vector<double> *>> curves;
  for (const std::string &m : c.methods)
    curves.emplace_back(m, m == "hf"    ? &e_hf
                           : m == "fci" ? &e_fci
                           : m == "vqe" ? &e_vqe
                                        : &e_iqpe);
  for (std::size_t i = 0; i < n; ++i)
    for (const auto &[m, e] : curves)
      f << c.betas[i] << ',' << m << ',' << (*e)[i] << ',' << (*e)[i] - e_fci[i] << '\n';

  std::ofstream g;
  res.artifacts.push_back(detail::open_artifact(g, c, "pes_npe.csv").string());
  detail::write_header(g, "pes", "pes-npe/1", c);
  g << "method,npe_hartree\n";
  for (const auto &[m, e] : curves) {
    const double npe = non_parallelity_error(*e, e_fci);
    g << m << ',' << npe << '\n';
    res.summary["npe_hartree"][m] = npe;
  }
  if (has("vqe"))
    res.checks.push_back({"vqe NPE > 1 mEh", non_parallelity_error(e_vqe, e_fci) > 1e-3, ""});
  if (has("iqpe-over-vqe"))
    res.checks.push_back(
        {"iqpe-over-vqe NPE <= 0.3 mEh", non_parallelity_error(e_iqpe, e_fci) <= 3e-4, ""});
  return res;
}

inline CommandResult cmd_iqpe_convergence(const ExperimentConfig &c) {
  validate_config("iqpe-conv", c);
  struct Row {
    int m;
    double energy, error;
  };
  std::vector<std::vector<Row>> rows(c.betas.size());
  parallel_for(c.betas.size(), c.threads, [&](std::size_t i) {
    const H4System sys = build_system(c.betas[i], c.radius, false);
    const PreparedReference ref = prepare_reference(
        sys, {PrepKind::UccdFull, c.vqe_evals}, vqe_settings(c, parse_guess(c.guess)));
    for (int m = c.bits_min; m <= c.bits_max; ++m) {
      const double e = run_iqpe(ref.state, sys.cache, sys.window, m).energy;
      rows[i].push_back({m, e, std::abs(e - sys.e_fci())});
    }
  });
  CommandResult res;
  std::ofstream f;
  res.artifacts.push_back(detail::open_artifact(f, c, "iqpe_convergence.csv").string());
  detail::write_header(f, "iqpe-conv", "iqpe-conv/1", c);
  f << "beta_deg,m_bits,energy_hartree,abs_error_hartree,bound_hartree\n";
  bool sub_meh_by_13 = true;
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (const Row &r : rows[i]) {
      f << c.betas[i] << ',' << r.m << ',' << r.energy << ',' << r.error << ','
        << kTwoPi * std::ldexp(1.0, -r.m) << '\n';
      if (r.m == 13 && r.error >= 1e-3)
        sub_meh_by_13 = false;
    }
  if (c.bits_min <= 13 && c.bits_max >= 13)
    res.checks.push_back({"sub-mEh at m = 13", sub_meh_by_13, ""});
  return res;
}

inline CommandResult cmd_overlap_scan(const ExperimentConfig &c) {
  validate_config("overlap-scan", c);
  require(!c.checkpoints.empty(), "checkpoints must not be empty");
  const int budget = std::max(1, *std::max_element(c.checkpoints.begin(), c.checkpoints.end()));
  CommandResult res;
  std::ofstream f;
  res.artifacts.push_back(detail::open_artifact(f, c, "overlap_scan.csv").string());
  detail::write_header(f, "overlap-scan", "overlap/1", c);
  f << "beta_deg,guess,eval_index,energy_hartree,GS,ES1,ES2,ES3\n";
  struct Job {
    double beta;
    std::string guess;
  };
  std::vector<Job> jobs;
  for (double b : c.betas)
    for (const std::string &g : c.guesses)
      jobs.push_back({b, g});
  std::vector<std::string> blocks(jobs.size());
  parallel_for(jobs.size(), c.threads, [&](std::size_t j) {
    const H4System sys = build_system(jobs[j].beta, c.radius, true);
    const PreparedReference ref =
        run_reference_vqe(sys, build_uccd_pool(), budget,
                          vqe_settings(c, parse_guess(jobs[j].guess)));
    std::ostringstream os;
    os << std::setprecision(15);
    const std::string used = to_string(ref.guess_used) + (ref.fell_back ? "(fallback)" : "");
    for (int k : c.checkpoints) {
      const std::size_t kk = std::min<std::size_t>(static_cast<std::size_t>(k), ref.trace->size());
      const Statevector s = state_at_iteration(*ref.trace, kk);
      const OverlapReport ov = overlaps(s, sys.fci);
      os << jobs[j].beta << ',' << used << ',' << kk << ',' << expectation(s, sys.h);
      for (const OverlapEntry &e : ov.entries)
        os << ',' << e.probability;
      os << '\n';
    }
    blocks[j] = os.str();
  });
  for (const std::string &b : blocks)
    f << b;
  return res;
}

struct ShotBlock {
  std::string prep;
  double deterministic_energy = 0.0;
  ShotStatistics stats;
};

inline CommandResult cmd_shot_stats(const ExperimentConfig &c) {
  validate_config("shot-stats", c);
  CommandResult res;
  nlohmann::json doc;
  doc["command"] = "shot-stats";
  doc["config"] = to_text(c);
  std::vector<ShotBlock> blocks;
  for (double beta : c.betas) {
    const H4System sys = build_system(beta, c.radius, true);
    for (std::size_t p = 0; p < c.preps.size(); ++p) {
      const PrepSpec spec = PrepSpec::parse(c.preps[p]);
      const PreparedReference ref =
          prepare_reference(sys, spec, vqe_settings(c, parse_guess(c.guess)));
      const double det = run_iqpe(ref.state, sys.cache, sys.window, c.bits).energy;
      for (std::size_t s = 0; s < c.shots.size(); ++s) {
        const std::uint64_t master = CounterRng::derive(c.seed, blocks.size());
        ShotBlock b{spec.text(), det,
                    repeat_experiment(ref.state, sys.cache, sys.window, c.bits, c.shots[s],
                                      c.repetitions, master, c.threads)};
        nlohmann::json j = to_json(b.stats);
        j["beta_deg"] = beta;
        j["prep"] = b.prep;
        j["deterministic_energy_hartree"] = det;
        j["e_fci_hartree"] = sys.e_fci();
        j["window"] = to_json(sys.window);
        j["labeled_energies_hartree"] = nlohmann::json::object();
        for (const StateLabel &l : sys.fci.labels)
          j["labeled_energies_hartree"][l.name] = sys.fci.energies(l.index);
        doc["blocks"].push_back(j);
        blocks.push_back(std::move(b));
      }
    }
  }
  std::ofstream f;
  res.artifacts.push_back(detail::open_artifact(f, c, "shot_stats.json").string());
  f << doc.dump(2) << '\n';

  std::ofstream g;
  res.artifacts.push_back(detail::open_artifact(g, c, "shot_stats.csv").string());
  detail::write_header(g, "shot-stats", "shots/1", c);
  g << "prep,shots,energy_hartree,count\n";
  for (const ShotBlock &b : blocks)
    write_histogram_csv(g, b.stats, b.prep);
  res.summary = doc;
  return res;
}

inline CommandResult cmd_fcidump_export(const ExperimentConfig &c) {
  validate_config("fcidump-export", c);
  CommandResult res;
  for (double beta : c.betas) {
    const auto ints = compute_integrals(build_h4_geometry(beta, c.radius), load_sto3g_hydrogen());
    const auto scf = run_rhf(ints);
    std::ofstream f;
    std::ostringstream name;
    name << "FCIDUMP_beta" << beta;
    res.artifacts.push_back(detail::open_artifact(f, c, name.str()).string());
    write_fcidump(f, mo_integrals(ints, scf));
  }
  return res;
}

inline CommandResult cmd_hamiltonian_dump(const ExperimentConfig &c) {
  validate_config("hamiltonian-dump", c);
  CommandResult res;
  for (double beta : c.betas) {
    const H4System sys = build_system(beta, c.radius, false);
    std::ostringstream name;
    name << "hamiltonian_beta" << beta << ".txt";
    std::ofstream f;
    res.artifacts.push_back(detail::open_artifact(f, c, name.str()).string());
    write_hamiltonian(f, sys.h);
  }
  std::ofstream g;
  res.artifacts.push_back(detail::open_artifact(g, c, "pool_full.txt").string());
  write_pool(g, build_uccd_pool());
  std::ofstream m;
  res.artifacts.push_back(detail::open_artifact(m, c, "pool_minimal.txt").string());
  write_pool(m, build_minimal_pool());
  return res;
}

} // namespace h4qpe
