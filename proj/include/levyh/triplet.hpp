// Characteristic triplet (a, Q, mu) of an n-dimensional Levy process, in the
// normalization
//
//   E exp(i<z, X_t>) = exp(-t psi(z)),
//   psi(z) = i<a,z> + (1/2)<z,Qz> + ∫ (1 - e^{i<z,x>} + i<z,x> 1_{|x|<1}) mu(dx).
//
// The stored vector `a` is the linear coefficient of psi; the physical drift
// of the sample paths is b = -a (a pure-drift process X_t = b t has
// psi(z) = -i<b,z>).  Use fromPhysicalDrift when constructing from b.
#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "levyh/measure.hpp"

namespace levyh {

struct LevyTriplet {
  Eigen::VectorXd a;   // linear coefficient of psi
  Eigen::MatrixXd Q;   // Gaussian covariance, symmetric PSD
  LevyMeasure mu;

  int dim() const { return static_cast<int>(a.size()); }
  Eigen::VectorXd physicalDrift() const { return -a; }

  static LevyTriplet fromPhysicalDrift(const Eigen::VectorXd& b,
                                       const Eigen::MatrixXd& Q,
                                       LevyMeasure mu) {
    return LevyTriplet{-b, Q, std::move(mu)};
  }
};

// analytic side conditions that cannot be inferred from the triplet; they
// gate theorem applications and default to "not asserted"
struct Assertions {
  bool hasResolventDensities = false;
  bool hasBoundedContinuousTransitionDensities = false;
  bool isSpecialSubordinator = false;
};

struct ProcessSpec {
  LevyTriplet triplet;
  Assertions assertions;
};

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> issues;
};

// Checks: dimensional consistency, Q symmetric within 1e-9 and PSD within
// -1e-10 (relative), measure components well formed, 1 ∧ |x|^2 integrable.
ValidationReport validateTriplet(const LevyTriplet& t);

// convenience builders
LevyTriplet makeBrownian(int dim, double variance = 1.0);
LevyTriplet makePureDrift(const Eigen::VectorXd& physicalDrift);

}  // namespace levyh
