// Geometry -> RHF -> Jordan-Wigner -> UCCD-VQE -> 16-bit IQPE at one angle.
//
//   sample_h4_pipeline [beta_deg]

#include <cstdio>
#include <cstdlib>

#include "h4qpe/h4qpe.hpp"

int main(int argc, char **argv) {
  using namespace h4qpe;
  const double beta = argc > 1 ? std::atof(argv[1]) : 80.0;

  const H4System sys = build_system(beta);
  std::printf("beta = %.2f deg, R = %.3f A\n", beta, sys.radius);
  std::printf("E_nuc  = %.10f\n", sys.ints.e_nuc);
  std::printf("E_hf   = %.10f  (%d SCF iterations)\n", sys.scf.e_hf, sys.scf.n_iterations);
  std::printf("E_fci  = %.10f  (%zu determinants, %zu Pauli terms)\n", sys.e_fci(),
              sys.fci.dim(), sys.h.terms.size());

  const PreparedReference ref = prepare_reference(sys, {PrepKind::UccdFull, 1000});
  const OverlapReport ov = overlaps(ref.state, sys.fci);
  std::printf("E_vqe  = %.10f  (%+.4f mEh, %zu evaluations)\n", ref.trace->energy,
              (ref.trace->energy - sys.e_fci()) * 1e3, ref.trace->size());
  for (const OverlapEntry &e : ov.entries)
    std::printf("  |<%s|vqe>|^2 = %.4f\n", e.name.c_str(), e.probability);

  const PhaseRecord r = run_iqpe(ref.state, sys.cache, sys.window, 16);
  std::printf("E_iqpe = %.10f  (%+.4f mEh, bits %s)\n", r.energy,
              (r.energy - sys.e_fci()) * 1e3, r.bit_string().c_str());
  return 0;
}
