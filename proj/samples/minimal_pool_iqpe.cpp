// One-parameter active-space ansatz at 89.8 deg, then 40 sampled 14-bit
// IQPE runs per shot count.

#include <cstdio>

#include "h4qpe/h4qpe.hpp"

int main() {
  using namespace h4qpe;
  const H4System sys = build_system(89.8);
  const PreparedReference ref = prepare_reference(sys, {PrepKind::UccdMin, 24});
  std::printf("theta = %.6f, E = %.8f, |<GS|psi>|^2 = %.4f\n", ref.trace->theta[0],
              ref.trace->energy, overlaps(ref.state, sys.fci).probability("GS"));
  for (long long shots : {25LL, 50LL, 100LL, 10000LL}) {
    const ShotStatistics s = repeat_experiment(ref.state, sys.cache, sys.window, 14, shots, 40, 7);
    std::printf("shots %6lld: modal %.6f x%2d/40, spread %.4f Eh\n", shots, s.modal_energy,
                s.modal_frequency, s.spread);
  }
  std::printf("GS energy      %.6f\n", sys.e_fci());
  return 0;
}
