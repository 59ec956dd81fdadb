#pragma once

#include <compare>
#include <string>
#include <vector>

namespace h4qpe {

/// Double excitation i,j -> a,b over spin orbitals (block-spin indexing:
/// p < n_spatial is alpha). Stored with i < j and a < b; the operator is
/// a_a^dag a_b^dag a_j a_i.
struct Excitation {
  int i = 0, j = 0, a = 0, b = 0;

  auto operator<=>(const Excitation &) const = default;
};

enum class PoolFlavor { FullUccd, Minimal };

inline std::string to_string(PoolFlavor f) {
  return f == PoolFlavor::FullUccd ? "full-uccd" : "minimal";
}

struct ExcitationPool {
  PoolFlavor flavor = PoolFlavor::FullUccd;
  int n_spatial = 0;
  int n_electrons = 0;
  std::vector<Excitation> ops;

  std::size_t size() const noexcept { return ops.size(); }
  int n_spin_orbitals() const noexcept { return 2 * n_spatial; }
};

/// Variational amplitudes aligned with an ExcitationPool.
struct AmplitudeVector {
  std::vector<Excitation> labels;
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
};

} // namespace h4qpe
