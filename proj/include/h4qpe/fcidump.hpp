#pragma once

// FCIDUMP export of MO-basis integrals (and a reader used by the tests and
// the CLI to check what was written).

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <regex>
#include <sstream>
#include <string>

#include "h4qpe/errors.hpp"
#include "h4qpe/scf.hpp"

namespace h4qpe {

inline void write_fcidump(std::ostream &os, const MoIntegrals &mo, int ms2 = 0,
                          double threshold = 1e-14) {
  const int n = mo.n_orbitals();
  os << " &FCI NORB=" << n << ",NELEC=" << mo.n_electrons << ",MS2=" << ms2 << ",\n";
  os << "  ORBSYM=";
  for (int i = 0; i < n; ++i)
    os << "1,";
  os << "\n  ISYM=1,\n &END\n";
  char line[128];
  auto emit = [&](double v, int i, int j, int k, int l) {
    std::snprintf(line, sizeof line, "%23.16E %4d %4d %4d %4d\n", v, i, j, k, l);
    os << line;
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l <= k; ++l) {
          if (i * (i + 1) / 2 + j < k * (k + 1) / 2 + l)
            continue;
          const double v = mo.eri(i, j, k, l);
          if (std::abs(v) > threshold)
            emit(v, i + 1, j + 1, k + 1, l + 1);
        }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j)
      if (std::abs(mo.h(i, j)) > threshold)
        emit(mo.h(i, j), i + 1, j + 1, 0, 0);
  emit(mo.e_nuc, 0, 0, 0, 0);
}

inline MoIntegrals read_fcidump(std::istream &is) {
  std::string header, line;
  while (std::getline(is, line)) {
    header += line + " ";
    if (line.find("&END") != std::string::npos || line.find('/') != std::string::npos)
      break;
  }
  auto key = [&](const char *name) {
    const std::regex re(std::string(name) + R"(\s*=\s*(-?\d+))", std::regex::icase);
    std::smatch m;
    if (!std::regex_search(header, m, re))
      fail(ErrorKind::InvalidInput, std::string("FCIDUMP header lacks ") + name);
    return std::stoi(m[1]);
  };
  MoIntegrals mo;
  const int n = key("NORB");
  mo.n_electrons = key("NELEC");
  require(n > 0, "FCIDUMP NORB must be positive");
  mo.h = Eigen::MatrixXd::Zero(n, n);
  mo.eri = Tensor4(n);
  double v;
  int i, j, k, l;
  while (is >> v >> i >> j >> k >> l) {
    if (i == 0 && j == 0 && k == 0 && l == 0) {
      mo.e_nuc = v;
    } else if (k == 0 && l == 0) {
      mo.h(i - 1, j - 1) = mo.h(j - 1, i - 1) = v;
    } else {
      const int p = i - 1, q = j - 1, r = k - 1, s = l - 1;
      for (auto [a, b, c, d] : {std::array{p, q, r, s}, std::array{q, p, r, s},
                                std::array{p, q, s, r}, std::array{q, p, s, r},
                                std::array{r, s, p, q}, std::array{s, r, p, q},
                                std::array{r, s, q, p}, std::array{s, r, q, p}})
        mo.eri(a, b, c, d) = v;
    }
  }
  return mo;
}

} // namespace h4qpe
