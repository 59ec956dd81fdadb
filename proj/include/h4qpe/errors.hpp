#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace h4qpe {

enum class ErrorKind {
  InvalidInput,
  DegenerateGeometry,
  SingularGeometry,
  ScfNotConverged,
  DegenerateDenominator,
  StateCorrupt,
  SectorLeak,
  MissingLabel,
  WindowViolation,
  UnsupportedPlot,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
  case ErrorKind::InvalidInput: return "InvalidInput";
  case ErrorKind::DegenerateGeometry: return "DegenerateGeometry";
  case ErrorKind::SingularGeometry: return "SingularGeometry";
  case ErrorKind::ScfNotConverged: return "ScfNotConverged";
  case ErrorKind::DegenerateDenominator: return "DegenerateDenominator";
  case ErrorKind::StateCorrupt: return "StateCorrupt";
  case ErrorKind::SectorLeak: return "SectorLeak";
  case ErrorKind::MissingLabel: return "MissingLabel";
  case ErrorKind::WindowViolation: return "WindowViolation";
  case ErrorKind::UnsupportedPlot: return "UnsupportedPlot";
  }
  return "Unknown";
}

/// Single exception type for the library; `kind()` tells callers what failed.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string &what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string &what) {
  throw Error(kind, what);
}

inline void require(bool cond, const std::string &what) {
  if (!cond)
    fail(ErrorKind::InvalidInput, what);
}

} // namespace h4qpe
