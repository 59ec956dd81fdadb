#pragma once

// Powell's COBYLA (constrained optimization by linear approximation),
// unconstrained case. A simplex of n+1 points defines a linear model of the
// objective; each step minimizes the model inside a trust region of radius
// rho, and rho shrinks from rhobeg to rhoend as progress stalls.

#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "h4qpe/errors.hpp"

namespace h4qpe {

struct CobylaOptions {
  double rhobeg = 0.1;
  double rhoend = 1e-6;
  int maxfun = 1000;
};

struct CobylaResult {
  std::vector<double> x;
  double f = 0.0;
  int n_evals = 0;
  bool converged = false; // false when maxfun ran out first
  std::vector<double> history; // f at every evaluation
};

using Objective = std::function<double(std::span<const double>)>;
using EvalCallback = std::function<void(int, std::span<const double>, double)>;

namespace detail {

struct CobylaBudgetExhausted {};

} // namespace detail

inline CobylaResult cobyla_minimize(const Objective &objective, std::vector<double> x0,
                                    const CobylaOptions &opt = {},
                                    const EvalCallback &callback = {}) {
  const int n = static_cast<int>(x0.size());
  require(n >= 1, "cobyla needs at least one variable");
  require(opt.rhobeg > 0.0 && opt.rhoend > 0.0 && opt.rhoend <= opt.rhobeg,
          "need 0 < rhoend <= rhobeg");
  require(opt.maxfun >= 1, "maxfun must be >= 1");

  constexpr double kAlpha = 0.25, kBeta = 2.1, kGamma = 0.5, kDelta = 1.1;

  CobylaResult res;
  res.f = std::numeric_limits<double>::infinity();

  Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(x0.data(), n);
  auto eval = [&]() {
    if (res.n_evals >= opt.maxfun)
      throw detail::CobylaBudgetExhausted{};
    std::span<const double> xs(x.data(), static_cast<std::size_t>(n));
    const double f = objective(xs);
    if (callback)
      callback(res.n_evals, xs, f);
    ++res.n_evals;
    res.history.push_back(f);
    if (f < res.f || res.x.empty()) {
      res.f = f;
      res.x.assign(x.data(), x.data() + n);
    }
    return f;
  };

  // Column j of sim is vertex j minus the pole; simi is its inverse, kept up
  // to date by rank-one updates. The loop order of every reduction follows
  // the reference Fortran so that trajectories agree bit for bit.
  Eigen::MatrixXd sim = Eigen::MatrixXd::Zero(n, n), simi = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd pole = x, fv(n), vsig(n), veta(n), g(n), dx(n), sigbar(n);
  double fpole = 0.0;
  double rho = opt.rhobeg;
  for (int i = 0; i < n; ++i) {
    sim(i, i) = rho;
    simi(i, i) = 1.0 / rho;
  }

  // Replace vertex jdrop by pole + dx.
  auto replace_vertex = [&](int jdrop) {
    double temp = 0.0;
    for (int i = 0; i < n; ++i) {
      sim(i, jdrop) = dx(i);
      temp += simi(jdrop, i) * dx(i);
    }
    for (int i = 0; i < n; ++i)
      simi(jdrop, i) /= temp;
    for (int j = 0; j < n; ++j) {
      if (j == jdrop)
        continue;
      double t = 0.0;
      for (int i = 0; i < n; ++i)
        t += simi(j, i) * dx(i);
      for (int i = 0; i < n; ++i)
        simi(j, i) -= t * simi(jdrop, i);
    }
  };

  // Minimizer of the linear model g.d over |d| <= rho, as the active-set
  // solver produces it with no constraints: one Givens sweep, then a step to
  // the boundary.
  auto trust_step = [&]() {
    Eigen::MatrixXd z = Eigen::MatrixXd::Identity(n, n);
    const Eigen::VectorXd a = -g;
    double tot = 0.0;
    for (int k = n - 1; k >= 0; --k) {
      double sp = 0.0, spabs = 0.0;
      for (int i = 0; i < n; ++i) {
        const double t = z(i, k) * a(i);
        sp += t;
        spabs += std::abs(t);
      }
      const double acca = spabs + 0.1 * std::abs(sp), accb = spabs + 0.2 * std::abs(sp);
      if (spabs >= acca || acca >= accb)
        sp = 0.0;
      if (tot == 0.0) {
        tot = sp;
      } else {
        const double t = std::sqrt(sp * sp + tot * tot);
        const double al = sp / t, be = tot / t;
        tot = t;
        for (int i = 0; i < n; ++i) {
          const double zk = al * z(i, k) + be * z(i, k + 1);
          z(i, k + 1) = al * z(i, k + 1) - be * z(i, k);
          z(i, k) = zk;
        }
      }
    }
    if (tot == 0.0) {
      dx.setZero();
      return false;
    }
    Eigen::VectorXd sdirn(n);
    const double inv = 1.0 / tot;
    double ss = 0.0;
    for (int i = 0; i < n; ++i) {
      sdirn(i) = inv * z(i, 0);
      ss += sdirn(i) * sdirn(i);
    }
    const double dd = rho * rho;
    const double step = dd / std::sqrt(ss * dd);
    for (int i = 0; i < n; ++i)
      dx(i) = 0.0 + step * sdirn(i);
    return true;
  };

  try {
    // Initial simplex: pole plus rho along each axis, re-poled on the fly.
    fpole = eval();
    for (int j = 0; j < n; ++j) {
      x(j) += rho;
      const double f = eval();
      fv(j) = f;
      if (fpole <= f) {
        x(j) = pole(j);
      } else {
        pole(j) = x(j);
        fv(j) = fpole;
        fpole = f;
        for (int k = 0; k <= j; ++k) {
          sim(j, k) = -rho;
          double temp = 0.0;
          for (int i = k; i <= j; ++i)
            temp -= simi(i, k);
          simi(j, k) = temp;
        }
      }
    }

    bool ibrnch = true;
    for (;;) {
      // Move the best vertex into the pole.
      int nbest = -1;
      double phimin = fpole;
      for (int j = 0; j < n; ++j)
        if (fv(j) < phimin) {
          nbest = j;
          phimin = fv(j);
        }
      if (nbest >= 0) {
        std::swap(fpole, fv(nbest));
        for (int i = 0; i < n; ++i) {
          const double temp = sim(i, nbest);
          sim(i, nbest) = 0.0;
          pole(i) += temp;
          double tempa = 0.0;
          for (int k = 0; k < n; ++k) {
            sim(i, k) -= temp;
            tempa -= simi(k, i);
          }
          simi(nbest, i) = tempa;
        }
      }

      double err = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double t = i == j ? -1.0 : 0.0;
          for (int k = 0; k < n; ++k)
            t += simi(i, k) * sim(k, j);
          err = std::max(err, std::abs(t));
        }
      if (err > 0.1)
        break; // simplex inverse lost to rounding

      for (int i = 0; i < n; ++i) {
        double t = 0.0;
        for (int j = 0; j < n; ++j)
          t += (fv(j) + -fpole) * simi(j, i);
        g(i) = t; // model gradient
      }

      const double parsig = kAlpha * rho, pareta = kBeta * rho;
      bool acceptable = true;
      for (int j = 0; j < n; ++j) {
        double ws = 0.0, we = 0.0;
        for (int i = 0; i < n; ++i) {
          ws += simi(j, i) * simi(j, i);
          we += sim(i, j) * sim(i, j);
        }
        vsig(j) = 1.0 / std::sqrt(ws);
        veta(j) = std::sqrt(we);
        if (vsig(j) < parsig || veta(j) > pareta)
          acceptable = false;
      }

      if (!ibrnch && !acceptable) {
        // Replace the vertex that most spoils the simplex geometry.
        int jdrop = -1;
        double temp = pareta;
        for (int j = 0; j < n; ++j)
          if (veta(j) > temp) {
            jdrop = j;
            temp = veta(j);
          }
        if (jdrop < 0)
          for (int j = 0; j < n; ++j)
            if (vsig(j) < temp) {
              jdrop = j;
              temp = vsig(j);
            }
        temp = kGamma * rho * vsig(jdrop);
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
          dx(i) = temp * simi(jdrop, i);
          sum += -g(i) * dx(i);
        }
        if (0.0 > sum + sum)
          dx = -dx;
        replace_vertex(jdrop);
        for (int i = 0; i < n; ++i)
          x(i) = pole(i) + dx(i);
        fv(jdrop) = eval();
        ibrnch = true;
        continue;
      }

      bool reduce = true;
      if (trust_step()) {
        double sum = 0.0;
        for (int i = 0; i < n; ++i)
          sum -= -g(i) * dx(i);
        const double prerem = -sum;
        for (int i = 0; i < n; ++i)
          x(i) = pole(i) + dx(i);
        const double f = eval();
        ibrnch = true;
        double trured = fpole - f;
        if (f == fpole)
          trured = 0.0;

        double ratio = trured <= 0.0 ? 1.0 : 0.0;
        int jdrop = -1;
        for (int j = 0; j < n; ++j) {
          double t = 0.0;
          for (int i = 0; i < n; ++i)
            t += simi(j, i) * dx(i);
          t = std::abs(t);
          if (t > ratio) {
            jdrop = j;
            ratio = t;
          }
          sigbar(j) = t * vsig(j);
        }
        double edgmax = kDelta * rho;
        int ell = -1;
        for (int j = 0; j < n; ++j) {
          if (sigbar(j) >= parsig || sigbar(j) >= vsig(j)) {
            double t = veta(j);
            if (trured > 0.0) {
              t = 0.0;
              for (int i = 0; i < n; ++i)
                t += (dx(i) - sim(i, j)) * (dx(i) - sim(i, j));
              t = std::sqrt(t);
            }
            if (t > edgmax) {
              ell = j;
              edgmax = t;
            }
          }
        }
        if (ell >= 0)
          jdrop = ell;
        if (jdrop >= 0) {
          replace_vertex(jdrop);
          fv(jdrop) = f;
          if (trured > 0.0 && trured >= 0.1 * prerem)
            reduce = false;
        }
      }
      if (!reduce)
        continue;
      if (!acceptable) {
        ibrnch = false;
        continue;
      }
      if (rho > opt.rhoend) {
        rho *= 0.5;
        if (rho <= 1.5 * opt.rhoend)
          rho = opt.rhoend;
        continue;
      }
      res.converged = true;
      break;
    }
  } catch (const detail::CobylaBudgetExhausted &) {
    res.converged = false;
  }
  return res;
}

} // namespace h4qpe
