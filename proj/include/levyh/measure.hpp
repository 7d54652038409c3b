// Levy measure model: a finite sum of components of three kinds.
//
//   Atoms            finitely many weighted points x != 0
//   LineDensity      mass on a line through 0: direction u (|u| = 1) with
//                    radial densities pos(r) dr at +r u and neg(r) dr at -r u
//   IsotropicStable  c |x|^(-dim-alpha) dx, alpha in (0,2), optionally
//                    clipped to a radial annulus [winLo, winHi)
//
// The measure of the whole space never charges the origin, and every valid
// component integrates (1 ∧ |x|^2).
#pragma once

#include <Eigen/Dense>
#include <variant>
#include <vector>

#include "levyh/ray_density.hpp"

namespace levyh {

struct Atom {
  Eigen::VectorXd x;
  double w = 0.0;
};

struct Atoms {
  std::vector<Atom> points;
};

struct LineDensity {
  Eigen::VectorXd direction;  // unit vector
  RayDensity pos;             // density at +r * direction
  RayDensity neg;             // density at -r * direction
};

struct IsotropicStable {
  double alpha = 0.5;      // stability index in (0, 2)
  double intensity = 1.0;  // c in  c |x|^(-dim-alpha) dx
  double winLo = 0.0;      // radial clipping window [winLo, winHi)
  double winHi = kInf;
};

using MeasureComponent = std::variant<Atoms, LineDensity, IsotropicStable>;

struct LevyMeasure {
  int dim = 1;
  std::vector<MeasureComponent> components;

  bool emptyMeasure() const;
  // total mass (may be +inf)
  double totalMass() const;
  // mass of { |x| >= r } (finite for any valid measure and r > 0)
  double massOutside(double r) const;
  // ∫_{|x| < r} |x|^2 mu(dx)
  double secondMomentInside(double r) const;
  // ∫_{|x| < r} x mu(dx); throws if not absolutely convergent
  Eigen::VectorXd firstMomentInside(double r) const;
  // whether ∫_{|x| < 1} |x| mu(dx) is finite
  bool finiteFirstMomentInside(double r = 1.0) const;
  // ∫_{|x| < r} x x^T mu(dx)
  Eigen::MatrixXd covarianceInside(double r) const;
  // ∫ (1 ∧ |x|) mu(dx), the finite-variation integral (may be +inf)
  double variationIntegral() const;
};

// surface area of the unit sphere S^{n-1} in R^n
double sphereSurface(int n);

// Second radial moment constants for IsotropicStable:
//   ∫_{winLo<=|x|<winHi, |x|<r} |x|^2 c|x|^{-n-a} dx
//     = c * sphereSurface(n) * ∫ r'^{1-a} dr'
double isotropicSecondMoment(const IsotropicStable& s, int dim, double r);
double isotropicMassOutside(const IsotropicStable& s, int dim, double r);

// structural symmetry:  mu(-B) == mu(B) by inspection of the representation
bool isSymmetric(const LevyMeasure& mu);

std::vector<std::string> validateMeasure(const LevyMeasure& mu);

}  // namespace levyh
