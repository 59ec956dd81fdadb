#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "h4qpe/cobyla.hpp"

using namespace h4qpe;

namespace {

double smooth3(std::span<const double> x) {
  return (x[0] - 1) * (x[0] - 1) + 10 * ((x[1] + 0.5) * (x[1] + 0.5)) + x[0] * x[1] +
         0.3 * std::sin(x[2]) + (x[2] - 0.2) * (x[2] - 0.2);
}

double rosenbrock(std::span<const double> x) {
  return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
}

} // namespace

TEST(Cobyla, ConvexQuadratic) {
  const std::vector<double> x0{3.0, -2.0, 0.5};
  const CobylaResult r = cobyla_minimize(
      [](std::span<const double> x) {
        return (x[0] - 1) * (x[0] - 1) + 2 * (x[1] + 1) * (x[1] + 1) + 0.5 * x[2] * x[2];
      },
      x0, {0.5, 1e-8, 5000});
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.x[0], 1.0, 1e-6);
  EXPECT_NEAR(r.x[1], -1.0, 1e-6);
  EXPECT_NEAR(r.x[2], 0.0, 1e-6);
  EXPECT_LT(r.f, 1e-11);
}

// Trajectory of scipy.optimize.minimize(method="COBYLA", rhobeg=0.5,
// tol=1e-8) from (0, 0, 0) on the same objective (scipy 1.15.3).
TEST(Cobyla, ReproducesReferenceTrajectory) {
  std::vector<double> seen;
  const CobylaResult r = cobyla_minimize(
      smooth3, std::vector<double>{0.0, 0.0, 0.0}, {0.5, 1e-8, 2000},
      [&](int, std::span<const double>, double f) { seen.push_back(f); });
  const std::vector<double> head{3.54,
                                 2.79,
                                 10.54,
                                 2.9838276615812607,
                                 -0.027083009181467763,
                                 1.7776699577316664,
                                 0.30731585898734626,
                                 -0.14019208687912282,
                                 0.0957915624292883,
                                 0.36119269008956434,
                                 -0.24208124617190935,
                                 -0.32969501924839567};
  const std::vector<double> mid{-0.5550092352989325, -0.5610480863403581, -0.5471612447754246,
                                -0.5621154334086982, -0.5413960931294216, -0.5591828035677894};
  ASSERT_GE(seen.size(), 26u);
  for (std::size_t k = 0; k < head.size(); ++k)
    EXPECT_NEAR(seen[k], head[k], 1e-12) << "evaluation " << k;
  for (std::size_t k = 0; k < mid.size(); ++k)
    EXPECT_NEAR(seen[20 + k], mid[k], 1e-10) << "evaluation " << 20 + k;
  EXPECT_EQ(r.n_evals, 144);
  // best evaluated point; scipy reports its last trial point instead
  EXPECT_EQ(r.f, -0.5650703871902814);
  EXPECT_EQ(r.x[0], 1.282051271426808);
  EXPECT_EQ(r.x[1], -0.5641025590947778);
  EXPECT_EQ(r.x[2], 0.05018889946644945);
}

TEST(Cobyla, Rosenbrock) {
  const std::vector<double> x0{-1.2, 1.0};
  const CobylaResult longer = cobyla_minimize(rosenbrock, x0, {0.5, 1e-10, 20000});
  EXPECT_LT(longer.f, 1e-6);
  const CobylaResult shorter = cobyla_minimize(rosenbrock, x0, {0.5, 1e-10, 2000});
  EXPECT_LT(shorter.f, 0.1);
  EXPECT_EQ(shorter.n_evals, 2000);
  EXPECT_FALSE(shorter.converged);
}

TEST(Cobyla, ConstantObjectiveTerminates) {
  const CobylaResult r =
      cobyla_minimize([](std::span<const double>) { return 4.0; }, std::vector<double>{1, 2, 3},
                      {0.1, 1e-6, 1000});
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.f, 4.0);
  EXPECT_LT(r.n_evals, 1000);
}

TEST(Cobyla, BudgetAndHistory) {
  int calls = 0;
  const CobylaResult r = cobyla_minimize(
      [&](std::span<const double> x) {
        ++calls;
        return rosenbrock(x);
      },
      std::vector<double>{-1.2, 1.0}, {0.5, 1e-10, 37});
  EXPECT_EQ(calls, 37);
  EXPECT_EQ(r.n_evals, 37);
  ASSERT_EQ(r.history.size(), 37u);
  double best = r.history.front();
  for (double f : r.history)
    best = std::min(best, f);
  EXPECT_EQ(r.f, best);
}

TEST(Cobyla, RejectsBadOptions) {
  const std::vector<double> x0{0.0};
  auto f = [](std::span<const double> x) { return x[0] * x[0]; };
  EXPECT_THROW(cobyla_minimize(f, x0, {-0.1, 1e-6, 10}), Error);
  EXPECT_THROW(cobyla_minimize(f, x0, {0.1, 0.2, 10}), Error);
  EXPECT_THROW(cobyla_minimize(f, std::vector<double>{}, {0.1, 1e-6, 10}), Error);
}
