// h4qpe: experiment front-end.
//
//   h4qpe pes | iqpe-conv | overlap-scan | shot-stats | fcidump-export |
//         hamiltonian-dump [--config FILE] [--seed N] [--out DIR]
//         [--threads N] [--set key=value]... [--plot] [--strict]
//   h4qpe plot CSV [-o SVG]
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure,
// 4 a --strict check did not hold.

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "h4qpe/h4qpe.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitCheck = 4;

int exit_code_for(h4qpe::ErrorKind k) {
  using h4qpe::ErrorKind;
  switch (k) {
  case ErrorKind::InvalidInput:
  case ErrorKind::DegenerateGeometry:
  case ErrorKind::UnsupportedPlot:
    return kExitConfig;
  default:
    return kExitNumerical;
  }
}

struct GlobalOptions {
  std::string config_file;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<unsigned> threads;
  std::vector<std::string> assignments;
  bool plot = false;
  bool strict = false;
};

h4qpe::ExperimentConfig resolve_config(const std::string &command, const GlobalOptions &g) {
  h4qpe::ExperimentConfig c = h4qpe::default_config(command);
  if (!g.config_file.empty()) {
    std::ifstream in(g.config_file);
    if (!in)
      h4qpe::fail(h4qpe::ErrorKind::InvalidInput, "cannot read config " + g.config_file);
    c = h4qpe::parse_config(in, c);
  }
  for (const std::string &a : g.assignments) {
    const auto eq = a.find('=');
    if (eq == std::string::npos)
      h4qpe::fail(h4qpe::ErrorKind::InvalidInput, "--set expects key=value, got '" + a + "'");
    h4qpe::set_config_value(c, h4qpe::detail::trim(a.substr(0, eq)),
                            h4qpe::detail::trim(a.substr(eq + 1)));
  }
  if (g.seed)
    c.seed = *g.seed;
  if (g.out)
    c.out = *g.out;
  if (g.threads)
    c.threads = *g.threads;
  h4qpe::validate_config(command, c);
  return c;
}

int report(const h4qpe::CommandResult &r, const GlobalOptions &g) {
  for (const std::string &a : r.artifacts) {
    std::cout << "wrote " << a << '\n';
    if (g.plot && std::filesystem::path(a).extension() == ".csv") {
      try {
        const std::string svg = std::filesystem::path(a).replace_extension(".svg").string();
        h4qpe::emit_plot(a, svg);
        std::cout << "wrote " << svg << '\n';
      } catch (const h4qpe::Error &e) {
        if (e.kind() != h4qpe::ErrorKind::UnsupportedPlot)
          throw;
      }
    }
  }
  if (r.summary.contains("npe_hartree"))
    for (const auto &[m, v] : r.summary["npe_hartree"].items())
      std::cout << "NPE " << m << " = " << v.get<double>() * 1e3 << " mEh\n";
  bool ok = true;
  for (const h4qpe::Check &c : r.checks) {
    std::cout << (c.passed ? "check ok   " : "check FAIL ") << c.name
              << (c.detail.empty() ? "" : " (" + c.detail + ")") << '\n';
    ok = ok && c.passed;
  }
  return (!ok && g.strict) ? kExitCheck : 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"H4-on-a-circle VQE / iterative phase estimation experiments"};
  app.require_subcommand(1);
  GlobalOptions g;

  using Runner = std::function<h4qpe::CommandResult(const h4qpe::ExperimentConfig &)>;
  const std::vector<std::tuple<std::string, std::string, Runner>> commands{
      {"pes", "potential energy surface and NPE per method", h4qpe::cmd_pes},
      {"iqpe-conv", "IQPE error vs number of bits", h4qpe::cmd_iqpe_convergence},
      {"overlap-scan", "eigenstate overlaps along the VQE trace", h4qpe::cmd_overlap_scan},
      {"shot-stats", "IQPE repetition statistics vs shots", h4qpe::cmd_shot_stats},
      {"fcidump-export", "write MO integrals in FCIDUMP format", h4qpe::cmd_fcidump_export},
      {"hamiltonian-dump", "write the qubit Hamiltonian and pools",
       h4qpe::cmd_hamiltonian_dump}};

  std::map<CLI::App *, Runner> runners;
  for (const auto &[name, help, run] : commands) {
    CLI::App *sub = app.add_subcommand(name, help);
    sub->add_option("--config", g.config_file, "key = value config file (or an artifact)");
    sub->add_option("--seed", g.seed, "master seed");
    sub->add_option("--out", g.out, "output directory");
    sub->add_option("--threads", g.threads, "worker threads (0 = all cores)");
    sub->add_option("--set", g.assignments, "override one config key: key=value");
    sub->add_flag("--plot", g.plot, "also emit an SVG per CSV artifact");
    sub->add_flag("--strict", g.strict, "exit 4 when a paper-level check fails");
    runners[sub] = run;
  }

  std::string plot_csv, plot_svg;
  CLI::App *plot = app.add_subcommand("plot", "render an experiment CSV as SVG");
  plot->add_option("csv", plot_csv, "CSV artifact")->required();
  plot->add_option("-o,--output", plot_svg, "SVG path (default: CSV path with .svg)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (plot->parsed()) {
      if (plot_svg.empty())
        plot_svg = std::filesystem::path(plot_csv).replace_extension(".svg").string();
      const std::size_t n = h4qpe::emit_plot(plot_csv, plot_svg);
      std::cout << "wrote " << plot_svg << " (" << n << " series)\n";
      return 0;
    }
    for (const auto &[sub, run] : runners)
      if (sub->parsed()) {
        const h4qpe::ExperimentConfig cfg = resolve_config(sub->get_name(), g);
        return report(run(cfg), g);
      }
  } catch (const h4qpe::Error &e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}
