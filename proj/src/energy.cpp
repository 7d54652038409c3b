#include "levyh/energy.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

#include "levyh/exponent.hpp"

namespace levyh {

namespace {

struct Direction {
  Eigen::VectorXd unit;
  double weight;  // surface weight; weights sum to |S^{n-1}|
};

// Half-sphere direction sets (the integrand is even, so each direction
// carries the weight of its antipode as well).
std::vector<Direction> directionSet(int n) {
  std::vector<Direction> dirs;
  if (n == 1) {
    Eigen::VectorXd e(1);
    e << 1.0;
    dirs.push_back({e, 2.0});
  } else if (n == 2) {
    const int K = 16;  // half circle, midpoint rule
    const double pi = std::acos(-1.0);
    for (int j = 0; j < K; ++j) {
      const double th = pi * (j + 0.5) / K;
      Eigen::VectorXd e(2);
      e << std::cos(th), std::sin(th);
      dirs.push_back({e, 2.0 * pi / K});
    }
  } else if (n == 3) {
    // Gauss-Legendre in u = cos(theta) on the upper hemisphere, uniform
    // azimuth; doubled weights account for the lower hemisphere.
    static const double glNode[4] = {0.06943184420297371, 0.33000947820757187,
                                     0.6699905217924281, 0.9305681557970262};
    static const double glWeight[4] = {0.17392742256872693,
                                       0.32607257743127305,
                                       0.32607257743127305,
                                       0.17392742256872693};
    const int K = 8;
    const double pi = std::acos(-1.0);
    for (int iu = 0; iu < 4; ++iu) {
      const double u = glNode[iu];
      const double s = std::sqrt(std::max(0.0, 1.0 - u * u));
      for (int j = 0; j < K; ++j) {
        const double ph = 2.0 * pi * (j + 0.5) / K;
        Eigen::VectorXd e(3);
        e << s * std::cos(ph), s * std::sin(ph), u;
        dirs.push_back({e, 2.0 * (2.0 * pi / K) * glWeight[iu]});
      }
    }
  } else {
    throw std::invalid_argument(
        "energy quadrature supports dimensions 1..3 only");
  }
  return dirs;
}

void requireCompatible(const LevyTriplet& t, const Atoms& nu) {
  const int n = t.dim();
  if (n > 3)
    throw std::invalid_argument(
        "energy quadrature supports dimensions 1..3 only");
  for (const auto& p : nu.points)
    if (p.x.size() != n)
      throw std::invalid_argument("test measure dimension mismatch");
}

// direction-averaged radial integrand
//   F(r) = sum_d w_d * Re(1/(lambda + psi(r d))) * |nu-hat(r d)|^2 * r^{n-1}
class RadialProfile {
 public:
  RadialProfile(const LevyTriplet& t, const Atoms& nu, double lambda)
      : t_(t), nu_(nu), lambda_(lambda), dirs_(directionSet(t.dim())) {}

  double operator()(double r) const {
    if (!(r > 0.0)) return 0.0;
    const int n = t_.dim();
    double acc = 0.0;
    for (const auto& d : dirs_) {
      const Eigen::VectorXd z = r * d.unit;
      const std::complex<double> den = lambda_ + evalPsi(t_, z, quad_);
      const double re = std::real(1.0 / den);
      acc += d.weight * re * cfSquared(nu_, z);
    }
    return acc * std::pow(r, n - 1);
  }

 private:
  const LevyTriplet& t_;
  const Atoms& nu_;
  double lambda_;
  std::vector<Direction> dirs_;
  QuadOptions quad_{1e-10};
};

}  // namespace

double cfSquared(const Atoms& nu, const Eigen::VectorXd& z) {
  double re = 0.0, im = 0.0;
  for (const auto& p : nu.points) {
    const double ph = z.dot(p.x);
    re += p.w * std::cos(ph);
    im += p.w * std::sin(ph);
  }
  return re * re + im * im;
}

EnergyResult lambdaEnergy(const LevyTriplet& t, const Atoms& nu,
                          double lambda, const EnergyOptions& opt) {
  if (!(lambda > 0.0))
    throw std::invalid_argument("lambda must be positive");
  requireCompatible(t, nu);

  EnergyResult out;
  if (nu.points.empty()) {
    out.tailKind = TailResult::Kind::converged;
    return out;
  }

  const RadialProfile F(t, nu, lambda);
  const auto f = [&F](double r) { return F(r); };

  const QuadResult head =
      adaptiveGK(f, 0.0, opt.headEnd, 0.0, opt.relTol, 4000);

  TailResult tail = octaveTailIntegral(f, opt.headEnd, opt.relTol,
                                       opt.maxOctaves);
  double tailValue = tail.value;
  double tailErr = tail.errorEst;
  if (tail.kind == TailResult::Kind::diverged) {
    // A slope fit straddling the lambda-dependent knee of the integrand can
    // misread a flat-then-decaying profile; a second pass from the reached
    // radius either confirms the divergence or completes the integral.
    const TailResult again =
        octaveTailIntegral(f, tail.reachedR, opt.relTol, opt.maxOctaves);
    tailValue += again.value;
    tailErr += again.errorEst;
    tail.kind = again.kind;
    tail.lastOctave = again.lastOctave;
  }

  out.tailKind = tail.kind;
  if (tail.kind == TailResult::Kind::diverged) {
    out.value = kInf;
    out.errorEst = 0.0;
    return out;
  }
  out.value = head.value + tailValue;
  out.errorEst = head.error + tailErr;
  if (tail.kind == TailResult::Kind::inconclusive)
    out.errorEst = std::max(out.errorEst, std::abs(tail.lastOctave));
  return out;
}

EnergyResult oneEnergy(const LevyTriplet& t, const Atoms& nu,
                       const EnergyOptions& opt) {
  return lambdaEnergy(t, nu, 1.0, opt);
}

EnergyLadder energyLadder(const LevyTriplet& t, const Atoms& nu, int rungs,
                          const EnergyOptions& opt) {
  if (rungs < 3) throw std::invalid_argument("ladder needs at least 3 rungs");
  EnergyLadder lad;
  double lambda = 1.0;
  for (int k = 0; k < rungs; ++k, lambda *= 4.0) {
    lad.lambdas.push_back(lambda);
    lad.rungs.push_back(lambdaEnergy(t, nu, lambda, opt));
  }

  // classify the large-lambda trend from the last rungs
  const int fit = 4;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < fit; ++i) {
    const int k = rungs - fit + i;
    const EnergyResult& e = lad.rungs[k];
    if (e.tailKind != TailResult::Kind::converged || !(e.value > 0.0) ||
        !std::isfinite(e.value)) {
      lad.limit = EnergyLadder::Limit::inconclusive;
      return lad;
    }
    const double x = std::log(lad.lambdas[k]);
    const double y = std::log(e.value);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  lad.slope = (fit * sxy - sx * sy) / (fit * sxx - sx * sx);
  if (lad.slope < -0.1)
    lad.limit = EnergyLadder::Limit::toZero;
  else if (std::abs(lad.slope) < 0.02)
    lad.limit = EnergyLadder::Limit::positive;
  else
    lad.limit = EnergyLadder::Limit::inconclusive;
  return lad;
}

namespace {

// smallest r >= 0 with B(r * dir) >= y along a ray, by bracket doubling and
// bisection; returns +inf when the level is never reached (bounded exponent)
double levelRadius(const LevyTriplet& t, const Eigen::VectorXd& dir,
                   double y) {
  const QuadOptions quad{1e-10};
  const auto Bat = [&](double r) {
    return evalAB(t, (r * dir).eval(), quad).B;
  };
  if (Bat(0.0) >= y) return 0.0;
  double lo = 0.0, hi = 1.0;
  int grow = 0;
  while (Bat(hi) < y) {
    lo = hi;
    hi *= 2.0;
    if (++grow > 60) return kInf;
  }
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    (Bat(mid) >= y ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

ClogResult clogPartialSum(const LevyTriplet& t, const Atoms& nu,
                          const ClogOptions& opt) {
  if (!(opt.y0 > 1.0)) throw std::invalid_argument("y0 must exceed 1");
  if (!(opt.varsigma > 1.0))
    throw std::invalid_argument("varsigma must exceed 1");
  requireCompatible(t, nu);

  const int n = t.dim();
  const auto dirs = directionSet(n);
  const QuadOptions quad{1e-10};

  ClogResult out;
  double y = opt.y0;
  for (int k = 0; k < opt.terms; ++k) {
    const double Y = std::pow(y, opt.varsigma);
    double term = 0.0;
    for (const auto& d : dirs) {
      const double rLo = levelRadius(t, d.unit, y);
      if (!std::isfinite(rLo)) continue;
      const double rHi = levelRadius(t, d.unit, Y);
      if (!(rHi > rLo)) continue;
      const auto f = [&](double r) {
        const Eigen::VectorXd z = r * d.unit;
        const double B = evalAB(t, z, quad).B;
        return cfSquared(nu, z) / (B * std::log(B)) * std::pow(r, n - 1);
      };
      const double cap = std::isfinite(rHi) ? rHi : rLo * 1e6;
      term += d.weight *
              adaptiveGK(f, rLo, cap, 0.0, opt.relTol, 4000).value;
    }
    out.termValues.push_back(term);
    out.partialSum += term;
    y = Y;
  }
  return out;
}

CheckResult productEnergyBound(const LevyTriplet& t1, const LevyTriplet& t2,
                               double lambda) {
  if (!(lambda > 0.0))
    throw std::invalid_argument("lambda must be positive");
  const QuadOptions quad{1e-10};

  const auto sampleArgs = [](const LevyTriplet& t) {
    std::vector<Eigen::VectorXd> pts;
    pts.push_back(Eigen::VectorXd::Zero(t.dim()));
    std::vector<Eigen::VectorXd> dirs;
    dirs.push_back(Eigen::VectorXd::Ones(t.dim()).normalized());
    if (t.dim() > 1) {
      Eigen::VectorXd alt(t.dim());
      for (int i = 0; i < t.dim(); ++i) alt(i) = (i % 2 == 0) ? 1.0 : -1.0;
      dirs.push_back(alt.normalized());
      dirs.push_back(Eigen::VectorXd::Unit(t.dim(), 0));
    }
    for (const auto& d : dirs)
      for (double r = 1e-2; r <= 1e4 * 1.001; r *= 10.0) {
        pts.push_back(r * d);
        pts.push_back(-r * d);
      }
    return pts;
  };

  CheckResult res;
  double minMargin = kInf, minRel = kInf;
  for (const auto& x : sampleArgs(t1)) {
    const std::complex<double> phi = evalPsi(t1, x, quad);
    const double base = std::real(1.0 / (lambda + phi));
    for (const auto& yv : sampleArgs(t2)) {
      const std::complex<double> psi = evalPsi(t2, yv, quad);
      const double lhs = std::real(1.0 / (lambda + phi + psi));
      const double rhs =
          base / (2.0 * (1.0 + std::norm(psi) / (lambda * lambda)));
      const double margin = lhs - rhs;
      minMargin = std::min(minMargin, margin);
      minRel = std::min(minRel,
                        margin / (std::abs(lhs) + std::abs(rhs) + 1e-300));
    }
  }
  res.evidence["minMargin"] = minMargin;
  res.evidence["minMarginRel"] = minRel;
  res.evidence["lambda"] = lambda;
  res.status = (minRel >= -1e-9) ? CheckStatus::holds : CheckStatus::fails;
  res.certainty = Certainty::numeric;
  if (res.status == CheckStatus::fails)
    res.notes = "resolvent comparison violated on the sample grid";
  return res;
}

}  // namespace levyh
