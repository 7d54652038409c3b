#include "levyh/triplet.hpp"

#include <stdexcept>

#include "levyh/spectral.hpp"

namespace levyh {

ValidationReport validateTriplet(const LevyTriplet& t) {
  ValidationReport rep;
  auto complain = [&](const std::string& m) {
    rep.ok = false;
    rep.issues.push_back(m);
  };

  const int n = t.dim();
  if (n < 1) complain("dimension must be >= 1");
  if (t.Q.rows() != n || t.Q.cols() != n)
    complain("covariance matrix shape does not match the dimension");
  if (t.mu.dim != n) complain("measure dimension does not match the triplet");

  if (t.Q.rows() == t.Q.cols() && t.Q.rows() == n && n >= 1) {
    const double scale = 1.0 + t.Q.cwiseAbs().maxCoeff();
    if ((t.Q - t.Q.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale) {
      complain("covariance matrix is not symmetric");
    } else {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t.Q);
      if (es.info() == Eigen::Success &&
          es.eigenvalues().minCoeff() < -1e-10 * scale)
        complain("covariance matrix is not positive semidefinite");
    }
  }

  for (const auto& m : validateMeasure(t.mu)) complain("measure: " + m);
  return rep;
}

LevyTriplet makeBrownian(int dim, double variance) {
  LevyTriplet t;
  t.a = Eigen::VectorXd::Zero(dim);
  t.Q = variance * Eigen::MatrixXd::Identity(dim, dim);
  t.mu.dim = dim;
  return t;
}

LevyTriplet makePureDrift(const Eigen::VectorXd& physicalDrift) {
  LevyTriplet t;
  t.a = -physicalDrift;
  t.Q = Eigen::MatrixXd::Zero(physicalDrift.size(), physicalDrift.size());
  t.mu.dim = static_cast<int>(physicalDrift.size());
  return t;
}

}  // namespace levyh
