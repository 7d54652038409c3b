#include "levyh/spectral.hpp"

#include <cmath>
#include <stdexcept>

namespace levyh {

namespace {

template <class... Ts>
struct Overload : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overload(Ts...) -> Overload<Ts...>;

bool lineOffRange(const Eigen::VectorXd& dir, const Eigen::MatrixXd& P2) {
  return (P2 * dir).norm() > 1e-9;
}

}  // namespace

SpectralData spectralDecompose(const Eigen::MatrixXd& Q,
                               double rankThreshold) {
  const double scale = 1.0 + Q.cwiseAbs().maxCoeff();
  if ((Q - Q.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale)
    throw std::invalid_argument("covariance matrix is not symmetric");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (Q + Q.transpose()));
  if (es.info() != Eigen::Success)
    throw std::invalid_argument("eigendecomposition failed");

  const int n = static_cast<int>(Q.rows());
  SpectralData s;
  s.eigenvalues.resize(n);
  s.O.resize(n, n);
  // Eigen returns ascending order; we keep them non-increasing with rows of
  // O as eigenvectors, so that O Q O^T = diag(eigenvalues).
  for (int i = 0; i < n; ++i) {
    s.eigenvalues(i) = es.eigenvalues()(n - 1 - i);
    s.O.row(i) = es.eigenvectors().col(n - 1 - i).transpose();
  }
  if (s.eigenvalues(n - 1) < -1e-10 * scale)
    throw std::invalid_argument("covariance matrix is not positive "
                                "semidefinite");
  const double lmax = std::max(s.eigenvalues(0), 0.0);
  s.rank = 0;
  for (int i = 0; i < n; ++i) {
    if (s.eigenvalues(i) <= rankThreshold * lmax || s.eigenvalues(i) <= 0.0)
      s.eigenvalues(i) = 0.0;
    else
      ++s.rank;
  }
  return s;
}

Eigen::MatrixXd matrixSqrt(const SpectralData& s) {
  const int n = static_cast<int>(s.eigenvalues.size());
  Eigen::MatrixXd U = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < s.rank; ++i)
    U += std::sqrt(s.eigenvalues(i)) * s.O.row(i).transpose() * s.O.row(i);
  return U;
}

RangeProjectors rangeProjectors(const SpectralData& s) {
  const int n = static_cast<int>(s.eigenvalues.size());
  RangeProjectors p;
  p.P1 = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < s.rank; ++i)
    p.P1 += s.O.row(i).transpose() * s.O.row(i);
  p.P2 = Eigen::MatrixXd::Identity(n, n) - p.P1;
  return p;
}

Eigen::MatrixXd offRangeBasis(const SpectralData& s) {
  const int n = static_cast<int>(s.eigenvalues.size());
  Eigen::MatrixXd B(n, n - s.rank);
  for (int i = s.rank; i < n; ++i) B.col(i - s.rank) = s.O.row(i).transpose();
  return B;
}

double offRangeMass(const LevyMeasure& mu, const Eigen::MatrixXd& P2) {
  if (P2.cwiseAbs().maxCoeff() <= 1e-12) return 0.0;  // full-rank Q
  double acc = 0.0;
  for (const auto& c : mu.components) {
    const double m = std::visit(
        Overload{[&](const Atoms& a) {
                   double s = 0.0;
                   for (const auto& p : a.points)
                     if ((P2 * p.x).norm() > 1e-9 * (1.0 + p.x.norm()))
                       s += p.w;
                   return s;
                 },
                 [&](const LineDensity& l) {
                   if (!lineOffRange(l.direction, P2)) return 0.0;
                   return l.pos.totalMass() + l.neg.totalMass();
                 },
                 [&](const IsotropicStable& s) {
                   // the in-range set is a proper subspace: Lebesgue-null
                   // for an absolutely continuous component
                   return isotropicMassOutside(s, mu.dim, 0.0);
                 }},
        c);
    if (std::isinf(m)) return kInf;
    acc += m;
  }
  return acc;
}

LevyMeasure restrictOffRange(const LevyMeasure& mu,
                             const Eigen::MatrixXd& P2) {
  LevyMeasure out;
  out.dim = mu.dim;
  if (P2.cwiseAbs().maxCoeff() <= 1e-12) return out;
  for (const auto& c : mu.components) {
    std::visit(
        Overload{[&](const Atoms& a) {
                   Atoms keep;
                   for (const auto& p : a.points)
                     if ((P2 * p.x).norm() > 1e-9 * (1.0 + p.x.norm()))
                       keep.points.push_back(p);
                   if (!keep.points.empty())
                     out.components.push_back(std::move(keep));
                 },
                 [&](const LineDensity& l) {
                   if (lineOffRange(l.direction, P2))
                     out.components.push_back(l);
                 },
                 [&](const IsotropicStable& s) {
                   out.components.push_back(s);
                 }},
        c);
  }
  return out;
}

}  // namespace levyh
