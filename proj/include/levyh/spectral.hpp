// Spectral machinery for the Gaussian covariance Q:
//
//   O Q O^T = diag(l_1, ..., l_n),  l_1 >= ... >= l_n >= 0,
//
// with the rows of O an orthonormal eigenbasis.  Derived objects: the PSD
// square root U = O^T diag(sqrt l) O, and the orthogonal projectors P1 onto
// range(U) = sqrt(Q) R^n and P2 = I - P1 onto its orthogonal complement.
// Eigenvalues below rankThreshold * l_1 are treated as exactly zero.
#pragma once

#include <Eigen/Dense>

#include "levyh/measure.hpp"

namespace levyh {

inline constexpr double kDefaultRankThreshold = 1e-10;

struct SpectralData {
  Eigen::VectorXd eigenvalues;  // non-increasing, clamped to >= 0
  Eigen::MatrixXd O;            // rows are the matching eigenvectors
  int rank = 0;                 // count of eigenvalues above the threshold
};

// throws std::invalid_argument on non-symmetric or indefinite input
SpectralData spectralDecompose(const Eigen::MatrixXd& Q,
                               double rankThreshold = kDefaultRankThreshold);

Eigen::MatrixXd matrixSqrt(const SpectralData& s);

struct RangeProjectors {
  Eigen::MatrixXd P1;  // onto sqrt(Q) R^n
  Eigen::MatrixXd P2;  // onto the orthogonal complement
};

RangeProjectors rangeProjectors(const SpectralData& s);

// an orthonormal basis (columns) of range(P2); empty when Q has full rank
Eigen::MatrixXd offRangeBasis(const SpectralData& s);

// mu{ x : |P2 x| > 0 }, evaluated with tolerance |P2 x| > 1e-9 (1 + |x|)
// for atoms; +inf when an infinite component charges the off-range set
double offRangeMass(const LevyMeasure& mu, const Eigen::MatrixXd& P2);

// restriction of mu to { x : |P2 x| > 0 }
LevyMeasure restrictOffRange(const LevyMeasure& mu, const Eigen::MatrixXd& P2);

}  // namespace levyh
