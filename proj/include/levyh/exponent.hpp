// Characteristic exponent evaluation,
//
//   psi(z) = i<a,z> + (1/2)<z,Qz>
//            + ∫ (1 - e^{i<z,x>} + i<z,x> 1_{|x|<1}) mu(dx),
//
// together with A(z) = 1 + Re psi(z) and B(z) = |1 + psi(z)|, and the
// characteristic function of a finite measure.  Component contributions:
//
//   atoms            exact trigonometric sums
//   line density     1-D integrals of (1 - cos(s r)) and (s r 1_{r<1} -
//                    sin(s r)) against the radial density; the singular part
//                    near r = 0 is summed as an exact power-moment series,
//                    oscillatory parts go through the quadrature layer
//   isotropic stable closed form  intensity * cPrime(alpha, dim) * |z|^alpha
//                    (cPrime cached, computed once by radial quadrature of
//                    the spherical cosine average); windowed components fall
//                    back to direct radial quadrature
//
// Accuracy target: 1e-8 * (1 + |psi|).
#pragma once

#include <complex>

#include "levyh/quadrature.hpp"
#include "levyh/triplet.hpp"

namespace levyh {

struct QuadOptions {
  double relTol = 1e-10;
};

std::complex<double> evalPsi(const LevyTriplet& t, const Eigen::VectorXd& z,
                             const QuadOptions& opts = {});

struct ABValue {
  double A = 1.0;  // 1 + Re psi  (always >= 1)
  double B = 1.0;  // |1 + psi|   (always >= A)
};

ABValue evalAB(const LevyTriplet& t, const Eigen::VectorXd& z,
               const QuadOptions& opts = {});

// characteristic function ∫ e^{i<z,x>} nu(dx) of a finite measure;
// throws std::domain_error when nu has infinite mass
std::complex<double> measureCF(const LevyMeasure& nu, const Eigen::VectorXd& z,
                               const QuadOptions& opts = {});

// spherical cosine-average constant: ∫ (1 - e^{i<z,x>}) |x|^{-dim-alpha} dx
// = cPrime(alpha, dim) |z|^alpha; values cached per (alpha, dim)
double cPrimeIsotropic(double alpha, int dim);

// 1-D integrals against a ray density, exposed for reuse and testing:
//   ∫ (1 - cos(s r)) rho(r) dr        and
//   ∫ (s r 1_{r<1} - sin(s r)) rho(r) dr       (s >= 0)
double oneMinusCosIntegral(const RayDensity& rho, double s, double relTol);
double compensatedSinIntegral(const RayDensity& rho, double s, double relTol);
// plain trig moments of a ray density (finite-mass use): ∫ trig(s r) rho dr
double trigMomentIntegral(const RayDensity& rho, Trig trig, double s,
                          double relTol);

}  // namespace levyh
