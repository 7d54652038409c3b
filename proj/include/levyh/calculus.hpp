// Process calculus on triplets:
//
//   sum            independent sum, componentwise (a1+a2, Q1+Q2, mu1+mu2)
//   product embed  (X, Y) on R^{n+m}: block Q, zero-padded measures, so that
//                  psi(x, y) = psi_1(x) + psi_2(y)
//   projection     Y = V^T X for an orthonormal basis V of a subspace; the
//                  linear term picks up the indicator-window correction
//                    a' = V^T a + Int V^T x (1_{|x|<1} - 1_{|V^T x|<1}) mu(dx)
//   truncation     removal of a finite sub-measure mu1 <= mu with
//                    a' = a + Int_{|x|<1} x mu1(dx),
//                  which leaves the exponent changed by Int (1-e^{i<z,x>}) mu1
// plus set restriction of measures (inside/outside a radius, off-range).
#pragma once

#include <Eigen/Dense>

#include "levyh/triplet.hpp"

namespace levyh {

LevyTriplet sumTriplets(const LevyTriplet& t1, const LevyTriplet& t2);

LevyTriplet productEmbed(const LevyTriplet& t1, const LevyTriplet& t2);

struct ProjectionResult {
  Eigen::MatrixXd subspaceBasis;  // columns: orthonormal basis of the target
  LevyTriplet projectedTriplet;   // in basis coordinates, dim = columns
  Eigen::VectorXd aPrime;         // corrected linear term (= triplet's a)
  double droppedMass = 0.0;       // jump mass sent to the origin (may be inf)
};

// basis columns orthonormal within 1e-10, 1 <= columns < dim
ProjectionResult projectTriplet(const LevyTriplet& t,
                                const Eigen::MatrixXd& subspaceBasis);

// mu1 finite and dominated by t.mu componentwise; line/isotropic parts of mu1
// must be windowed scalar multiples of a matching parent component
LevyTriplet truncateBigJumps(const LevyTriplet& t, const LevyMeasure& mu1);

struct RestrictRegion {
  enum class Kind { inside, outside, offRange };
  Kind kind = Kind::inside;
  double radius = 0.0;
  Eigen::MatrixXd P2;

  static RestrictRegion insideRadius(double r);
  static RestrictRegion outsideRadius(double r);
  static RestrictRegion offRangeOf(const Eigen::MatrixXd& P2);
};

LevyMeasure restrictMeasure(const LevyMeasure& mu, const RestrictRegion& reg);

}  // namespace levyh
