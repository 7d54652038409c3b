// Path simulation: counter-based RNG, ensemble generation, hitting
// estimates, and empirical characteristic functions.
//
// Anchors:
//   Philox-4x32-10 known-answer vector (all-zero counter and key):
//     6627e8d5 e169c58d bc57ac4c 9b00dbd8
//   1-D Brownian level crossing (reflection principle):
//     P(max_{[0,1]} B >= 0.5) = 2 (1 - Phi(0.5)) = 0.6170750774519738
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "levyh/exponent.hpp"
#include "levyh/pathsim.hpp"
#include "levyh/rng.hpp"

using namespace levyh;
using doctest::Approx;

namespace {

Eigen::VectorXd vec1(double x) {
  Eigen::VectorXd v(1);
  v << x;
  return v;
}

Eigen::VectorXd vec2(double x, double y) {
  Eigen::VectorXd v(2);
  v << x, y;
  return v;
}

LevyTriplet brownian(int n) {
  LevyTriplet t;
  t.a = Eigen::VectorXd::Zero(n);
  t.Q = Eigen::MatrixXd::Identity(n, n);
  t.mu.dim = n;
  return t;
}

// physical drift +1 (uniform motion to the right)
LevyTriplet uniformMotion1d() {
  LevyTriplet t;
  t.a = vec1(-1);
  t.Q = Eigen::MatrixXd::Zero(1, 1);
  t.mu.dim = 1;
  return t;
}

// the degenerate-Gaussian pair: path drift (1,-1), rank-one Q on the
// diagonal; the anti-diagonal component of the path is deterministic 2t
LevyTriplet degenerateGaussian2d() {
  LevyTriplet t;
  t.a = vec2(-1, 1);  // stored coefficient; physical drift is (1,-1)
  t.Q = Eigen::MatrixXd(2, 2);
  t.Q << 2, 2, 2, 2;
  t.mu.dim = 2;
  return t;
}

LevyTriplet cpAtomAtOne(double rate) {
  LevyTriplet t;
  t.a = vec1(0);
  t.Q = Eigen::MatrixXd::Zero(1, 1);
  t.mu.dim = 1;
  Atoms at;
  at.points.push_back({vec1(1), rate});
  t.mu.components.push_back(at);
  return t;
}

LevyTriplet cpSymmetric1d() {
  LevyTriplet t;
  t.a = vec1(0);
  t.Q = Eigen::MatrixXd::Zero(1, 1);
  t.mu.dim = 1;
  Atoms at;
  at.points.push_back({vec1(1), 1.0});
  at.points.push_back({vec1(-1), 1.0});
  t.mu.components.push_back(at);
  return t;
}

LevyTriplet stable1d(double alpha, double scale = 1.0) {
  LevyTriplet t;
  t.a = vec1(0);
  t.Q = Eigen::MatrixXd::Zero(1, 1);
  t.mu.dim = 1;
  t.mu.components.push_back(
      IsotropicStable{alpha, scale / cPrimeIsotropic(alpha, 1)});
  return t;
}

}  // namespace

TEST_CASE("counter rng reproduces the published block cipher vectors") {
  SUBCASE("all-zero counter and key") {
    CounterRng r(0, 0);
    CHECK(r.nextU32() == 0x6627e8d5u);
    CHECK(r.nextU32() == 0xe169c58du);
    CHECK(r.nextU32() == 0xbc57ac4cu);
    CHECK(r.nextU32() == 0x9b00dbd8u);
  }
  SUBCASE("seed and stream occupy the documented words") {
    CounterRng r(0x0123456789ABCDEFull, 7);
    const std::uint32_t expect[12] = {
        0x34b23a77u, 0x8ec43d26u, 0xfdbf9305u, 0xa6c02cf2u,
        0xf9a36445u, 0x1ee17293u, 0x3ec6e16du, 0xc5949040u,
        0x69dc405du, 0x6f5e7b6au, 0xa027a73fu, 0x362598d3u};
    for (std::uint32_t e : expect) CHECK(r.nextU32() == e);
  }
}

TEST_CASE("counter rng streams are reproducible and separated") {
  CounterRng a(99, 5), b(99, 5), c(99, 6);
  bool allEqual = true, anyDifferent = false;
  for (int i = 0; i < 64; ++i) {
    const double x = a.uniform();
    if (x != b.uniform()) allEqual = false;
    if (x != c.uniform()) anyDifferent = true;
    CHECK(x > 0.0);
    CHECK(x < 1.0);
  }
  CHECK(allEqual);
  CHECK(anyDifferent);
}

TEST_CASE("gaussian moments from the counter rng") {
  CounterRng r(2024, 0);
  const int N = 100000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < N; ++i) {
    const double g = r.gaussian();
    s += g;
    s2 += g * g;
  }
  const double mean = s / N;
  const double var = s2 / N - mean * mean;
  CHECK(std::abs(mean) < 0.02);
  CHECK(std::abs(var - 1.0) < 0.02);
}

TEST_CASE("pure drift paths are straight lines, exactly") {
  LevyTriplet t;
  t.a = vec2(-1, 1);  // physical drift (1,-1)
  t.Q = Eigen::MatrixXd::Zero(2, 2);
  t.mu.dim = 2;
  SimPlan plan;
  plan.stepCount = 4;
  plan.paths = 3;
  const Ensemble ens = simulatePaths(t, plan);
  CHECK(ens.gaussFactor.cols() == 0);
  CHECK(ens.jumpIntensity == 0.0);
  for (const SimPath& p : ens.paths) {
    CHECK(p.jumps.empty());
    for (int k = 0; k <= plan.stepCount; ++k) {
      const double tk = ens.gridTime(k);
      const Eigen::VectorXd x = ens.positionAt(p, k);
      CHECK(x(0) == 1.0 * tk);   // bitwise: drift coordinates are exact
      CHECK(x(1) == -1.0 * tk);
    }
  }
}

TEST_CASE("degenerate-Gaussian anti-diagonal component is exactly 2t") {
  SimPlan plan;
  plan.stepCount = 16;
  plan.paths = 50;
  plan.seed = 11;
  const Ensemble ens = simulatePaths(degenerateGaussian2d(), plan);
  CHECK(ens.gaussFactor.cols() == 1);  // rank-one diffusion
  const Eigen::VectorXd v = vec2(1, -1);
  for (const SimPath& p : ens.paths)
    for (int k = 0; k <= plan.stepCount; ++k) {
      // no tolerance: the functional annihilates the Gaussian factor
      CHECK(pathComponent(ens, p, v, k) == 2.0 * ens.gridTime(k));
      // and the raw random part has bitwise-equal coordinates
      CHECK(p.random[k](0) == p.random[k](1));
    }
}

TEST_CASE("compound Poisson event counts match the rate") {
  SimPlan plan;
  plan.stepCount = 8;
  plan.paths = 20000;
  plan.seed = 42;
  const Ensemble ens = simulatePaths(cpAtomAtOne(2.0), plan);
  CHECK(ens.jumpIntensity == Approx(2.0));
  CHECK(ens.driftRate(0) == 0.0);
  double count = 0.0;
  for (const SimPath& p : ens.paths) {
    count += static_cast<double>(p.jumps.size());
    // the random part at the horizon is exactly the number of unit jumps
    CHECK(p.random.back()(0) == static_cast<double>(p.jumps.size()));
  }
  const double mean = count / plan.paths;
  const double se = std::sqrt(2.0 / plan.paths);  // Poisson variance = rate
  CHECK(std::abs(mean - 2.0) <= 3.0 * se);
}

TEST_CASE("ensembles are bit-identical and schedule independent") {
  SimPlan plan;
  plan.stepCount = 12;
  plan.paths = 300;  // crosses the parallel-generation threshold
  plan.seed = 1234;
  const LevyTriplet t = stable1d(1.5);
  const Ensemble e1 = simulatePaths(t, plan);
  const Ensemble e2 = simulatePaths(t, plan);
  SimPlan small = plan;
  small.paths = 40;  // serial generation of a prefix
  const Ensemble e3 = simulatePaths(t, small);
  for (int i = 0; i < small.paths; ++i) {
    for (int k = 0; k <= plan.stepCount; ++k) {
      CHECK(e1.paths[i].random[k] == e2.paths[i].random[k]);
      CHECK(e1.paths[i].random[k] == e3.paths[i].random[k]);
    }
    CHECK(e1.paths[i].jumps.size() == e3.paths[i].jumps.size());
  }
  SimPlan other = plan;
  other.seed = 1235;
  const Ensemble e4 = simulatePaths(t, other);
  bool anyDiff = false;
  for (int i = 0; i < plan.paths && !anyDiff; ++i)
    if (e1.paths[i].random.back() != e4.paths[i].random.back())
      anyDiff = true;
  CHECK(anyDiff);
}

TEST_CASE("plan validation") {
  const LevyTriplet bm = brownian(1);
  SimPlan plan;
  SUBCASE("step count") {
    plan.stepCount = 0;
    CHECK_THROWS_AS(simulatePaths(bm, plan), std::invalid_argument);
  }
  SUBCASE("paths") {
    plan.paths = 0;
    CHECK_THROWS_AS(simulatePaths(bm, plan), std::invalid_argument);
  }
  SUBCASE("horizon") {
    plan.horizon = 0.0;
    CHECK_THROWS_AS(simulatePaths(bm, plan), std::invalid_argument);
  }
  SUBCASE("cutoff range") {
    plan.smallJumpCutoff = 0.0;
    CHECK_THROWS_AS(simulatePaths(bm, plan), std::invalid_argument);
    plan.smallJumpCutoff = 1.5;
    CHECK_THROWS_AS(simulatePaths(bm, plan), std::invalid_argument);
  }
  SUBCASE("event intensity overflow advises a larger cutoff") {
    plan.smallJumpCutoff = 1e-14;
    plan.paths = 1;
    CHECK_THROWS_WITH_AS(simulatePaths(stable1d(0.5), plan),
                         doctest::Contains("smallJumpCutoff"),
                         std::invalid_argument);
  }
}

TEST_CASE("uniform motion hits the half-level plane with certainty") {
  SimPlan plan;
  plan.stepCount = 10;
  plan.paths = 100;
  const Ensemble ens = simulatePaths(uniformMotion1d(), plan);
  const Hyperplane target{vec1(1), 0.5};
  SUBCASE("full window") {
    const HittingEstimate est = hittingEstimate(ens, target, 0.0, 1.0);
    CHECK(est.probability == 1.0);
    CHECK(est.ci95 == 0.0);
    CHECK(est.hits == 100);
    CHECK(est.seed == plan.seed);
  }
  SUBCASE("window after the crossing") {
    const HittingEstimate est = hittingEstimate(ens, target, 0.8, 1.0);
    CHECK(est.probability == 0.0);
  }
  SUBCASE("window before the crossing") {
    const HittingEstimate est = hittingEstimate(ens, target, 0.0, 0.4);
    CHECK(est.probability == 0.0);
  }
}

TEST_CASE("Brownian level crossing matches the reflection principle") {
  SimPlan plan;
  plan.stepCount = 64;
  plan.paths = 20000;
  plan.seed = 7;
  const Ensemble ens = simulatePaths(brownian(1), plan);
  const HittingEstimate est =
      hittingEstimate(ens, Hyperplane{vec1(1), 0.5}, 0.0, 1.0);
  // 2 (1 - Phi(0.5)); the Brownian-bridge correction makes the coarse grid
  // unbiased for the continuous-time maximum
  CHECK(std::abs(est.probability - 0.6170750774519738) < 0.015);
  CHECK(est.hits == static_cast<long>(est.probability * plan.paths + 0.5));
  CHECK(est.ci95 == Approx(1.96 * std::sqrt(est.probability *
                                            (1 - est.probability) /
                                            plan.paths)));
}

TEST_CASE("point tubes: polar in the plane, charged on the line") {
  SimPlan plan;
  plan.stepCount = 256;
  plan.paths = 4000;
  plan.seed = 3;
  SUBCASE("2-D point tubes empty out as the radius shrinks") {
    const Ensemble ens = simulatePaths(brownian(2), plan);
    const HittingEstimate tiny =
        hittingEstimate(ens, PointTube{vec2(1, 0), 1e-3}, 0.0, 1.0);
    CHECK(tiny.probability <= 0.01);
    CHECK(tiny.discretizationCaveat);
    const HittingEstimate wide =
        hittingEstimate(ens, PointTube{vec2(1, 0), 0.3}, 0.0, 1.0);
    CHECK(wide.probability > 0.05);
    CHECK(wide.probability > tiny.probability);
  }
  SUBCASE("1-D point tubes stay charged") {
    const Ensemble ens = simulatePaths(brownian(1), plan);
    const HittingEstimate est =
        hittingEstimate(ens, PointTube{vec1(0.5), 0.05}, 0.0, 1.0);
    CHECK(est.probability > 0.3);
  }
}

TEST_CASE("subspace tube distances see the deterministic drift component") {
  SimPlan plan;
  plan.stepCount = 16;
  plan.paths = 40;
  const Ensemble ens = simulatePaths(degenerateGaussian2d(), plan);
  Eigen::MatrixXd basis(2, 1);
  basis << 1, 1;  // the diagonal, where the Gaussian part lives
  // distance to the diagonal is |<x,(1,-1)>|/sqrt(2) = sqrt(2) t
  SUBCASE("window away from zero never enters a thin tube") {
    const HittingEstimate est =
        hittingEstimate(ens, SubspaceTube{basis, 0.1}, 0.5, 1.0);
    CHECK(est.probability == 0.0);
  }
  SUBCASE("window containing zero starts inside") {
    const HittingEstimate est =
        hittingEstimate(ens, SubspaceTube{basis, 0.1}, 0.0, 1.0);
    CHECK(est.probability == 1.0);
  }
}

TEST_CASE("empirical characteristic function: deterministic cases") {
  SUBCASE("pure drift is exact with zero variance") {
    LevyTriplet t;
    t.a = vec1(-2);  // physical drift +2
    t.Q = Eigen::MatrixXd::Zero(1, 1);
    t.mu.dim = 1;
    SimPlan plan;
    plan.stepCount = 4;
    plan.paths = 50;
    const Ensemble ens = simulatePaths(t, plan);
    const auto cf = empiricalCF(ens, {vec1(0.7)});
    CHECK(cf[0].seRe < 1e-12);
    CHECK(cf[0].seIm < 1e-12);
    CHECK(cf[0].value.real() == Approx(std::cos(0.7 * 2.0)).epsilon(1e-14));
    CHECK(cf[0].value.imag() == Approx(std::sin(0.7 * 2.0)).epsilon(1e-14));
  }
  SUBCASE("degenerate example at the annihilating frequency") {
    SimPlan plan;
    plan.stepCount = 8;
    plan.paths = 200;
    const Ensemble ens = simulatePaths(degenerateGaussian2d(), plan);
    const auto cf = empiricalCF(ens, {vec2(1, -1)});
    // <X_1, (1,-1)> = 2 deterministically: modulus one, phase +2
    const std::complex<double> expect(std::cos(2.0), std::sin(2.0));
    CHECK(std::abs(cf[0].value - expect) < 1e-12);
    CHECK(cf[0].seRe < 1e-13);
  }
}

TEST_CASE("empirical characteristic function matches exp(-psi)") {
  SimPlan plan;
  plan.stepCount = 64;
  plan.paths = 20000;
  plan.seed = 91;

  int within = 0, total = 0;
  const auto tally = [&](const LevyTriplet& t,
                         const std::vector<Eigen::VectorXd>& zs) {
    const Ensemble ens = simulatePaths(t, plan);
    const auto cf = empiricalCF(ens, zs);
    for (const CfSample& s : cf) {
      const std::complex<double> psi = evalPsi(t, s.z);
      const std::complex<double> exact = std::exp(-psi);
      if (std::abs(s.value.real() - exact.real()) <=
          3.0 * s.seRe + 1e-12)
        ++within;
      if (std::abs(s.value.imag() - exact.imag()) <=
          3.0 * s.seIm + 1e-12)
        ++within;
      total += 2;
    }
  };

  std::vector<Eigen::VectorXd> z1;
  for (double z : {0.2, 0.5, 0.9, 1.4, 2.0}) z1.push_back(vec1(z));
  std::vector<Eigen::VectorXd> z2 = {vec2(0.3, 0.1), vec2(1, -1),
                                     vec2(0.5, 0.5), vec2(-0.7, 0.2),
                                     vec2(1.1, 0.6)};
  tally(brownian(1), z1);
  tally(cpSymmetric1d(), z1);
  tally(degenerateGaussian2d(), z2);
  tally(stable1d(1.5), z1);

  // 3-sigma componentwise bands should capture >= 95% over the corpus
  CHECK(total == 40);
  CHECK(within >= 38);
}

TEST_CASE("small-jump Gaussian substitution preserves the law") {
  // symmetric 1.5-stable: compare the empirical CF under an aggressive
  // cutoff (many events + substitution) with the exact exponent
  SimPlan plan;
  plan.stepCount = 32;
  plan.paths = 10000;
  plan.seed = 17;
  plan.smallJumpCutoff = 0.05;
  const LevyTriplet t = stable1d(1.5);
  const Ensemble ens = simulatePaths(t, plan);
  CHECK(ens.jumpIntensity > 10.0);      // real event activity
  CHECK(ens.smallJumpVariance > 0.0);   // real substitution
  const auto cf = empiricalCF(ens, {vec1(0.8), vec1(1.6)});
  for (const CfSample& s : cf) {
    const std::complex<double> exact = std::exp(-evalPsi(t, s.z));
    CHECK(std::abs(s.value.real() - exact.real()) <= 4.0 * s.seRe + 0.003);
    CHECK(std::abs(s.value.imag()) <= 4.0 * s.seIm + 0.003);  // symmetric law
  }
}
