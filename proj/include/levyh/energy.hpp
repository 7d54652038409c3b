#pragma once
// Resolvent energy functionals for atomic test measures.
//
// For a finite atomic measure nu on R^n (n <= 3) and the process exponent
// psi, the lambda-energy is
//
//     e_lambda(nu) = ∫_{R^n} Re( 1 / (lambda + psi(z)) ) |nu-hat(z)|^2 dz,
//
// with |nu-hat(z)|^2 = sum_{i,j} w_i w_j cos<z, x_i - x_j>  >= 0.  The
// integral may diverge (an atom always has infinite energy in dimension
// >= 2); divergence is detected and reported, never silently truncated.
//
// The large-lambda ladder e_{4^k}(nu) discriminates processes whose energy
// collapses (slope ~ -1/2 for Brownian motion) from those pinned at a
// positive limit (uniform motion keeps e_lambda = pi/|b| for every lambda).
#include <vector>

#include "levyh/checks.hpp"
#include "levyh/measure.hpp"
#include "levyh/quadrature.hpp"
#include "levyh/triplet.hpp"

namespace levyh {

// |nu-hat(z)|^2 for an atomic measure, computed as |sum_i w_i e^{i<z,x_i>}|^2
double cfSquared(const Atoms& nu, const Eigen::VectorXd& z);

struct EnergyOptions {
  double headEnd = 1.0;  // adaptive radial quadrature on [0, headEnd]
  double relTol = 1e-8;
  int maxOctaves = 48;
};

struct EnergyResult {
  double value = 0.0;  // +inf when the tail diverges
  double errorEst = 0.0;
  TailResult::Kind tailKind = TailResult::Kind::inconclusive;
};

// e_lambda(nu); throws std::invalid_argument for lambda <= 0, dimension
// mismatch, or dimension > 3
EnergyResult lambdaEnergy(const LevyTriplet& t, const Atoms& nu,
                          double lambda, const EnergyOptions& opt = {});

// e_1(nu) = ∫ (A/B^2) |nu-hat|^2 dz, the lambda = 1 energy
EnergyResult oneEnergy(const LevyTriplet& t, const Atoms& nu,
                       const EnergyOptions& opt = {});

struct EnergyLadder {
  enum class Limit { toZero, positive, inconclusive };
  std::vector<double> lambdas;       // 4^0 .. 4^{rungs-1}
  std::vector<EnergyResult> rungs;
  double slope = 0.0;                // d log e / d log lambda, last rungs
  Limit limit = Limit::inconclusive;
};

EnergyLadder energyLadder(const LevyTriplet& t, const Atoms& nu,
                          int rungs = 9, const EnergyOptions& opt = {});

// Partial sums of the dyadic-band series
//     sum_k ∫_{ y_k <= |1+psi(z)| < y_k^varsigma } |nu-hat|^2
//                / ( |1+psi| log|1+psi| ) dz,
// with y_{k+1} = y_k^varsigma.  Band edges are located by bisection along
// each ray, assuming |1+psi| increases radially (true away from compound
// Poisson oscillation).
struct ClogOptions {
  double y0 = 10.0;
  double varsigma = 2.0;
  int terms = 3;
  double relTol = 1e-9;
};

struct ClogResult {
  std::vector<double> termValues;
  double partialSum = 0.0;
};

ClogResult clogPartialSum(const LevyTriplet& t, const Atoms& nu,
                          const ClogOptions& opt = {});

// Numeric validation of the product energy comparison: for independent
// components with exponents Phi, Psi and every (x, y) on a log grid,
//     Re(1/(lambda + Phi(x) + Psi(y)))
//       >= Re(1/(lambda + Phi(x))) / (2 (1 + |Psi(y)|^2 / lambda^2)).
// Reports the worst margin; fails only if the inequality is violated.
CheckResult productEnergyBound(const LevyTriplet& t1, const LevyTriplet& t2,
                               double lambda = 1.0);

}  // namespace levyh
