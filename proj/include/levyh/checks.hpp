// Individual (H)-condition checkers.  Each checker examines one numerically
// decidable criterion and reports a CheckResult: a tri-state status plus a
// certainty grade and an evidence map, so verdicts stay auditable.
//
// Status semantics are per-condition ("does this triplet satisfy the named
// condition"), not per-hypothesis: combining conditions into an (H) verdict
// is the decision engine's job (decide.hpp).
//
// Certainty is `exact` only when the computation is closed form or finite
// (atom sums, linear algebra, power-law moment formulas); trend fits and
// quadrature classifications are `numeric`.
#pragma once

#include <map>
#include <string>

#include "levyh/spectral.hpp"
#include "levyh/triplet.hpp"

namespace levyh {

enum class CheckStatus { holds, fails, unknown };
enum class Certainty { exact, numeric };

const char* statusName(CheckStatus s);
const char* certaintyName(Certainty c);

struct CheckResult {
  CheckStatus status = CheckStatus::unknown;
  Certainty certainty = Certainty::numeric;
  std::map<std::string, double> evidence;
  std::string notes;
};

// Compound Poisson: Q = 0, mu finite, and zero pathwise drift, i.e.
// a = -∫_{|x|<1} x mu(dx) within 1e-10 (the linear term of psi must reduce
// to the small-jump compensator alone).  holds/fails, always exact.
CheckResult isCompoundPoisson(const LevyTriplet& t);

// Kesten's criterion for point polarity in one dimension (non-CP only):
// every singleton is non-polar iff ∫_0^inf Re([1+psi]^-1) dz < inf.
//   holds  = integral converges  = points non-polar
//   fails  = integral diverges   = points polar
// The head is integrated adaptively, the tail octave-by-octave with a
// power-law fit; evidence carries the value and the fitted tail exponent.
struct KestenOptions {
  double headEnd = 1.0;    // adaptive quadrature on [0, headEnd]
  double relTol = 1e-8;
  int maxOctaves = 60;     // dyadic octaves of tail examined
};
CheckResult kestenPointPolarity(const LevyTriplet& t,
                                const KestenOptions& opt = {});

// Growth profile of the ratio |Im psi| / (1 + Re psi) over directions x
// log-spaced radii.  Classifies the growth of the per-radius maximum:
//   bounded    ratio flat; boundEstimate is the observed sup M
//   logGrowth  ratio grows like log A (the f = log growth class)
//   unbounded  ratio outgrows log A
// status: holds for bounded/logGrowth (the exponent lies in a growth class
// an increasing f with divergent ∫ 1/(lambda f) covers), fails for
// unbounded, unknown when the trend is unclear.  Exact shortcuts: symmetric
// psi with a = 0 (ratio identically 0) and full-rank Q with an at most
// atomic measure (quadratic lower bound on Re psi).
enum class RatioGrowth { bounded, logGrowth, unbounded, unclear };

struct KfOptions {
  double rMin = 1e-2;
  double rMax = 1e8;
  int samplesPerDecade = 8;
};

struct KfRatioResult {
  CheckResult check;
  RatioGrowth growth = RatioGrowth::unclear;
  double boundEstimate = 0.0;  // observed sup of the ratio
};
KfRatioResult kfRatioProfile(const LevyTriplet& t, const KfOptions& opt = {});

// Condition (S): the off-range jump mass mu(R^n \ sqrt(Q) R^n) is finite and
// sqrt(Q) y = b' is solvable, where b' = -a - ∫_{|x|<1} x mu1(dx) and mu1 is
// the off-range restriction of mu.  Solvability reduces to P2 b' = 0.
// Infinite off-range mass makes the condition inapplicable -> unknown.
CheckResult conditionS(const LevyTriplet& t,
                       double rankThreshold = kDefaultRankThreshold);

// liminf of  g(eps) = ∫_{-eps}^{eps} x^2 mu(dx)  against a vanishing weight:
//   logWeight     eps / |log eps|
//   logLogWeight  eps / (|log eps| log |log eps|)
// holds when the ratio stays positive with a non-decreasing trend toward
// small eps (decade minima compared with a 10% margin); the criterion is
// sufficient only, so it never returns fails.
enum class SmallJumpWeight { logWeight, logLogWeight };

struct EpsGrid {
  double epsMax = 1e-1;
  double epsMin = 1e-8;
  int samplesPerDecade = 8;
};
CheckResult smallJumpLiminf(const LevyTriplet& t,
                            SmallJumpWeight weight = SmallJumpWeight::logWeight,
                            const EpsGrid& grid = {});

// liminf growth of the exponent along a radial log grid:
//   reOverZlog       Re psi(z) / (|z| / log |z|)        (no side conditions)
//   absOverZlogPow   |psi(z)| / (|z| log^{1+gamma} |z|) (needs the
//                    resolvent-density assertion; gated by the caller)
// holds when the ratio is bounded below by a positive, non-decaying trend.
enum class GrowthMode { reOverZlog, absOverZlogPow };

struct RadialGrid {
  double rMin = 1e1;
  double rMax = 1e8;
  int samplesPerDecade = 8;
};
CheckResult exponentGrowthLiminf(const LevyTriplet& t, GrowthMode mode,
                                 double gamma = 0.1,
                                 const RadialGrid& grid = {});

// One-dimensional dominance test for Q = 0: with mu+ the restriction to
// (0, inf) and mu-bar the reflection of the restriction to (-inf, 0),
// requires ∫ (1 ∧ x) mu+(dx) = inf and searches k in [0,1) and a remainder
// nu with ∫_0^delta x nu(dx) < inf such that mu-bar <= k mu+ + nu.  The
// remainder absorbs everything x-integrable near 0, so the decision reduces
// to comparing the parametric inner tails of the two sides.  Pass k < 0 to
// search for an admissible k automatically.
struct DominanceOptions {
  double k = -1.0;      // fixed k in [0,1), or negative to search
  double delta = 0.5;   // neighbourhood (0, delta) for the remainder budget
  double nuBudget = kInf;  // upper bound accepted for ∫_0^delta x nu(dx)
};
CheckResult oneDimDominance(const LevyTriplet& t,
                            const DominanceOptions& opt = {});

// Subordinator bundle.  isSubordinator requires Q = 0, jumps supported on
// (0, inf), finite variation near 0, and pathwise drift
// d = -a - ∫_0^1 x mu(dx) >= 0.  Then:
//   driftNecessity      fails (exact) when d > 0: a subordinator satisfying
//                       (H) must have zero drift
//   quasiStableEnvelope holds when mu is sandwiched between c1, c2 multiples
//                       of a stable subordinator measure r^{-1-alpha} dx,
//                       alpha in (0,1), up to finite-mass defects near 0 —
//                       automatic for parametric inner tails with dominant
//                       index in (0,1)
//   typeEnvelope        classification only: the density on (0,1] fits
//                       between 1/(c x^{1+alpha}) and c / x^{1+beta} for
//                       some 0 < alpha < beta < 1, c > 1.  Whether (H)
//                       holds for this class is open, so the engine never
//                       converts this into a verdict.
struct SubordinatorReport {
  bool isSubordinator = false;
  double drift = 0.0;
  CheckResult driftNecessity;
  CheckResult quasiStableEnvelope;
  CheckResult typeEnvelope;
  double typeAlpha = 0.0;
  double typeBeta = 0.0;
  double typeC = 0.0;
};
SubordinatorReport subordinatorDiagnostics(const LevyTriplet& t);

}  // namespace levyh
