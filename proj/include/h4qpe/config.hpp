#pragma once

// Flat "key = value" experiment configuration. Lists are comma separated.
// Lines starting with '#' are comments, except that a "# key = value" line
// is read as an assignment, so an artifact header can be fed back as a
// config file. Reading an artifact stops at its first data line.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include "h4qpe/errors.hpp"

namespace h4qpe {

struct ExperimentConfig {
  std::vector<double> betas;
  double radius = 1.738;
  std::vector<std::string> methods{"hf", "vqe", "iqpe-over-vqe", "fci"};
  std::vector<std::string> preps{"hf", "uccd-full:200", "uccd-min:24"};
  std::vector<std::string> guesses{"zero", "mp2"};
  std::string guess = "mp2";
  int vqe_evals = 1000;
  int bits = 16;
  int bits_min = 4;
  int bits_max = 16;
  std::vector<long long> shots{25, 50, 100, 10000};
  int repetitions = 40;
  std::vector<int> checkpoints{0, 24, 100, 200, 500, 1000, 2000, 3000};
  std::uint64_t seed = 2021;
  std::string out = "out";
  unsigned threads = 1;
  double rhobeg = 0.1;
  double rhoend = 1e-6;
  int trotter_steps = 1;

  bool operator==(const ExperimentConfig &) const = default;
};

namespace detail {

inline std::string trim(std::string s) {
  const auto ws = [](unsigned char c) { return std::isspace(c) != 0; };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), ws));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), ws).base(), s.end());
  return s;
}

inline std::vector<std::string> split_list(const std::string &v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  for (std::string item; std::getline(ss, item, ',');) {
    item = trim(item);
    if (!item.empty())
      out.push_back(item);
  }
  return out;
}

template <class T> T parse_number(const std::string &key, const std::string &text) {
  T v{};
  const char *first = text.data();
  const char *last = first + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last)
    fail(ErrorKind::InvalidInput, "config key '" + key + "': cannot parse '" + text + "'");
  return v;
}

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class T> std::string join(const std::vector<T> &v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i)
      s += ',';
    if constexpr (std::is_same_v<T, double>)
      s += format_double(v[i]);
    else if constexpr (std::is_same_v<T, std::string>)
      s += v[i];
    else
      s += std::to_string(v[i]);
  }
  return s;
}

template <class T>
std::vector<T> parse_list(const std::string &key, const std::string &value) {
  std::vector<T> out;
  for (const std::string &item : split_list(value))
    out.push_back(parse_number<T>(key, item));
  return out;
}

} // namespace detail

inline void set_config_value(ExperimentConfig &c, const std::string &key,
                             const std::string &value) {
  using namespace detail;
  if (key == "betas")
    c.betas = parse_list<double>(key, value);
  else if (key == "radius")
    c.radius = parse_number<double>(key, value);
  else if (key == "methods")
    c.methods = split_list(value);
  else if (key == "preps")
    c.preps = split_list(value);
  else if (key == "guesses")
    c.guesses = split_list(value);
  else if (key == "guess")
    c.guess = value;
  else if (key == "vqe_evals")
    c.vqe_evals = parse_number<int>(key, value);
  else if (key == "bits")
    c.bits = parse_number<int>(key, value);
  else if (key == "bits_min")
    c.bits_min = parse_number<int>(key, value);
  else if (key == "bits_max")
    c.bits_max = parse_number<int>(key, value);
  else if (key == "shots")
    c.shots = parse_list<long long>(key, value);
  else if (key == "repetitions")
    c.repetitions = parse_number<int>(key, value);
  else if (key == "checkpoints")
    c.checkpoints = parse_list<int>(key, value);
  else if (key == "seed")
    c.seed = parse_number<std::uint64_t>(key, value);
  else if (key == "out")
    c.out = value;
  else if (key == "threads")
    c.threads = parse_number<unsigned>(key, value);
  else if (key == "rhobeg")
    c.rhobeg = parse_number<double>(key, value);
  else if (key == "rhoend")
    c.rhoend = parse_number<double>(key, value);
  else if (key == "trotter_steps")
    c.trotter_steps = parse_number<int>(key, value);
  else
    fail(ErrorKind::InvalidInput, "unknown config key '" + key + "'");
}

inline std::string to_text(const ExperimentConfig &c) {
  using namespace detail;
  std::ostringstream os;
  os << "betas = " << join(c.betas) << '\n'
     << "radius = " << format_double(c.radius) << '\n'
     << "methods = " << join(c.methods) << '\n'
     << "preps = " << join(c.preps) << '\n'
     << "guesses = " << join(c.guesses) << '\n'
     << "guess = " << c.guess << '\n'
     << "vqe_evals = " << c.vqe_evals << '\n'
     << "bits = " << c.bits << '\n'
     << "bits_min = " << c.bits_min << '\n'
     << "bits_max = " << c.bits_max << '\n'
     << "shots = " << join(c.shots) << '\n'
     << "repetitions = " << c.repetitions << '\n'
     << "checkpoints = " << join(c.checkpoints) << '\n'
     << "seed = " << c.seed << '\n'
     << "out = " << c.out << '\n'
     << "threads = " << c.threads << '\n'
     << "rhobeg = " << format_double(c.rhobeg) << '\n'
     << "rhoend = " << format_double(c.rhoend) << '\n'
     << "trotter_steps = " << c.trotter_steps << '\n';
  return os.str();
}

/// Applies every assignment in `is` on top of `base`. Keys listed in
/// `ignored` (artifact metadata such as "schema") are skipped.
inline ExperimentConfig parse_config(std::istream &is, ExperimentConfig base = {},
                                     const std::vector<std::string> &ignored = {"schema",
                                                                                "command"}) {
  int lineno = 0;
  bool artifact = false;
  for (std::string line; std::getline(is, line);) {
    ++lineno;
    std::string s = detail::trim(line);
    const bool comment = !s.empty() && s[0] == '#';
    if (comment)
      s = detail::trim(s.substr(1));
    if (s.empty())
      continue;
    if (comment && s.rfind("h4qpe ", 0) == 0)
      artifact = true;
    if (artifact && !comment)
      break; // end of an artifact header
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      if (comment)
        continue;
      fail(ErrorKind::InvalidInput,
           "config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = detail::trim(s.substr(0, eq));
    const std::string value = detail::trim(s.substr(eq + 1));
    if (std::find(ignored.begin(), ignored.end(), key) != ignored.end())
      continue;
    set_config_value(base, key, value);
  }
  return base;
}

inline ExperimentConfig parse_config(const std::string &text, ExperimentConfig base = {}) {
  std::istringstream is(text);
  return parse_config(is, std::move(base));
}

} // namespace h4qpe
