#pragma once
// Monte Carlo simulation of sample paths from a characteristic triplet, and
// hitting-probability estimation for points (epsilon-tubes), hyperplanes,
// and linear subspaces, as an empirical cross-check on polarity verdicts.
//
// Scheme: on a uniform grid of stepCount steps over [0, horizon],
//
//   X_t = d t + L W_t + (jumps with |x| >= cutoff, exact event list)
//
// where d = -a - ∫_{cutoff<=|x|<1} x mu(dx) is the physical drift including
// the compensation of the jumps kept as events, and L L^T = Q + Sigma_c with
// Sigma_c = ∫_{|x|<cutoff} x x^T mu(dx): jumps below the cutoff are replaced
// by their compensated Gaussian substitution, folded into the diffusion.
// Events arrive with exponential interarrivals at the total truncated
// intensity and carry marks sampled from the normalized restriction (atoms:
// discrete; ray densities: closed-form mass inversion by bisection;
// isotropic stable: exact power-law radius inverse CDF, uniform direction).
//
// Paths store the accumulated *random* part on the grid, separately from the
// deterministic drift rate; positions are assembled on demand.  This keeps
// linear functionals that annihilate the Gaussian factor exact: for the
// degenerate-Gaussian example with drift (1,-1) and rank-one Q on the
// diagonal, the anti-diagonal component of every path is exactly 2t in
// floating point, because both coordinates of every Gaussian increment are
// bitwise equal.
//
// Reproducibility: path i draws from the counter-based substream
// (seed, i) — jump arrivals and marks first, then the stepCount Gaussian
// grid vectors — so ensembles are bit-identical under any parallel schedule.
#include <complex>
#include <cstdint>
#include <variant>
#include <vector>

#include "levyh/rng.hpp"
#include "levyh/triplet.hpp"

namespace levyh {

struct SimPlan {
  double horizon = 1.0;
  int stepCount = 200;
  double smallJumpCutoff = 1.0;  // in (0, 1]
  int paths = 10000;
  std::uint64_t seed = 1;
};

struct JumpEvent {
  double time = 0.0;
  Eigen::VectorXd x;
};

struct SimPath {
  // accumulated random part (Gaussian + jumps) at grid times; [0] is zero
  std::vector<Eigen::VectorXd> random;
  std::vector<JumpEvent> jumps;  // sorted by time
};

struct Ensemble {
  SimPlan plan;
  int dim = 0;
  Eigen::VectorXd driftRate;    // physical drift incl. event compensation
  Eigen::MatrixXd gaussFactor;  // n x rank, L L^T = Q + Sigma_c
  double smallJumpVariance = 0.0;  // trace of Sigma_c (substitution report)
  double jumpIntensity = 0.0;      // total event intensity above the cutoff
  std::vector<SimPath> paths;

  double stepSize() const { return plan.horizon / plan.stepCount; }
  double gridTime(int k) const { return k * stepSize(); }
  Eigen::VectorXd positionAt(const SimPath& p, int k) const {
    return driftRate * gridTime(k) + p.random[k];
  }
};

// throws std::invalid_argument on plan violations (stepCount < 1, cutoff
// outside (0,1], paths < 1, horizon <= 0) and when the jump intensity above
// the cutoff is too large to simulate as events (advises a larger cutoff)
Ensemble simulatePaths(const LevyTriplet& t, const SimPlan& plan);

struct PointTube {
  Eigen::VectorXd center;
  double eps = 1e-3;
};
struct Hyperplane {
  Eigen::VectorXd normal;
  double offset = 0.0;
};
struct SubspaceTube {
  Eigen::MatrixXd basis;  // columns span the subspace (through the origin)
  double eps = 1e-3;
};
using HitTarget = std::variant<PointTube, Hyperplane, SubspaceTube>;

struct HittingEstimate {
  double probability = 0.0;
  double ci95 = 0.0;  // binomial normal-approximation half width
  long hits = 0;
  long paths = 0;
  std::uint64_t seed = 0;
  // set when a tube radius is small against the typical one-step motion, so
  // grid sampling may miss genuine entries
  bool discretizationCaveat = false;
};

// Hit = target entered at a grid time inside [t1, t2], or (hyperplanes) a
// sign change between consecutive grid points, or a within-step
// Brownian-bridge crossing  p = exp(-2 d0 d1 / (sigma_n^2 h))  of the
// Gaussian part, sampled on a dedicated substream.
HittingEstimate hittingEstimate(const Ensemble& ens, const HitTarget& target,
                                double t1, double t2);

struct CfSample {
  Eigen::VectorXd z;
  std::complex<double> value;
  double seRe = 0.0;
  double seIm = 0.0;
};

// sample mean of e^{i<z, X_horizon>} with componentwise standard errors
std::vector<CfSample> empiricalCF(const Ensemble& ens,
                                  const std::vector<Eigen::VectorXd>& zList);

// Linear functional <v, X_{t_k}>, evaluated on the split representation as
// <v, driftRate> t_k + <v, random_k>.  Functionals that annihilate the
// Gaussian factor and the jumps are exact: no roundoff from assembling
// coordinates first (the degenerate-Gaussian example gives exactly 2 t_k).
double pathComponent(const Ensemble& ens, const SimPath& p,
                     const Eigen::VectorXd& v, int k);

}  // namespace levyh
