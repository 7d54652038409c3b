#include "levyh/exponent.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace levyh {

namespace {

constexpr double kPi = 3.14159265358979323846;

template <class... Ts>
struct Overload : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overload(Ts...) -> Overload<Ts...>;

// ---------------------------------------------------------------- spans

// ∫_a^b (1 - cos(s r)) span(r) dr.  On r <= 1/s the bracket is summed as the
// alternating power series sum_k (-1)^{k+1} (s r)^{2k} / (2k)!  against exact
// moments, which sidesteps both the cancellation of 1 - cos for small s r
// and the (possibly) non-integrable density singularity at 0.
double oneMinusCosSpan(const DensitySpan& span, double s, double relTol) {
  const double a = span.lo, b = span.hi;
  if (s == 0.0 || a >= b) return 0.0;
  const double m = std::min(b, 1.0 / s);
  double acc = 0.0;
  if (m > a) {
    double s2k = 1.0, fact = 1.0;
    for (int k = 1; k <= 24; ++k) {
      s2k *= s * s;
      fact *= (2.0 * k - 1.0) * (2.0 * k);
      const double term = s2k / fact * span.momentOn(2 * k, a, m);
      acc += (k % 2 == 1) ? term : -term;
      if (std::abs(term) <= 1e-17 * (std::abs(acc) + 1e-30)) break;
    }
  }
  if (b > m)
    acc += span.momentOn(0, m, b) -
           oscSpanIntegral(span, Trig::cos, s, m, b, relTol);
  return acc;
}

// ∫_a^b (s r 1_{r<1} - sin(s r)) span(r) dr  via the series
// sum_k (-1)^{k+1} (s r)^{2k+1} / (2k+1)!  below min(1, 1/s).
double compensatedSinSpan(const DensitySpan& span, double s, double relTol) {
  const double a = span.lo, b = span.hi;
  if (s == 0.0 || a >= b) return 0.0;
  double acc = 0.0;
  const double b1 = std::min(b, 1.0);
  if (a < b1) {
    const double m = std::min(b1, 1.0 / s);
    if (m > a) {
      double s2k1 = s, fact = 1.0;
      for (int k = 1; k <= 24; ++k) {
        s2k1 *= s * s;
        fact *= (2.0 * k) * (2.0 * k + 1.0);
        const double term = s2k1 / fact * span.momentOn(2 * k + 1, a, m);
        acc += (k % 2 == 1) ? term : -term;
        if (std::abs(term) <= 1e-17 * (std::abs(acc) + 1e-30)) break;
      }
    }
    if (b1 > m)
      acc += s * span.momentOn(1, m, b1) -
             oscSpanIntegral(span, Trig::sin, s, m, b1, relTol);
  }
  if (b > 1.0)
    acc -= oscSpanIntegral(span, Trig::sin, s, std::max(a, 1.0), b, relTol);
  return acc;
}

// ∫_a^b trig(s r) span(r) dr with a small-argument series region
double trigSpan(const DensitySpan& span, Trig trig, double s, double relTol) {
  const double a = span.lo, b = span.hi;
  if (a >= b) return 0.0;
  if (s == 0.0) return trig == Trig::cos ? span.momentOn(0, a, b) : 0.0;
  if (trig == Trig::cos)
    return span.momentOn(0, a, b) - oneMinusCosSpan(span, s, relTol);
  // sin: series below 1/s, oscillatory beyond
  const double m = std::min(b, 1.0 / s);
  double acc = 0.0;
  if (m > a) {
    double sp = s, fact = 1.0;
    for (int k = 0; k <= 24; ++k) {
      if (k > 0) {
        sp *= s * s;
        fact *= (2.0 * k) * (2.0 * k + 1.0);
      }
      const double term = sp / fact * span.momentOn(2 * k + 1, a, m);
      acc += (k % 2 == 0) ? term : -term;
      if (std::abs(term) <= 1e-17 * (std::abs(acc) + 1e-30)) break;
    }
  }
  if (b > m) acc += oscSpanIntegral(span, Trig::sin, s, m, b, relTol);
  return acc;
}

// ------------------------------------------------------- isotropic kernel

// spherical average of cos over directions: phi_n(x) = Gamma(n/2) (2/x)^nu
// J_nu(x) with nu = n/2 - 1;  phi_1 = cos, phi_2 = J_0, phi_3 = sin(x)/x
double besselPhi(int n, double x) {
  if (x < 1e-7) return 1.0 - x * x / (2.0 * n);
  switch (n) {
    case 1: return std::cos(x);
    case 2: return std::cyl_bessel_j(0.0, x);
    case 3: return std::sin(x) / x;
    default: {
      const double nu = 0.5 * n - 1.0;
      return std::tgamma(0.5 * n) * std::pow(2.0 / x, nu) *
             std::cyl_bessel_j(nu, x);
    }
  }
}

double powerIntegralUnit(double e, double a, double b) {
  DensitySpan s;
  s.coef = 1.0;
  s.exponent = e;
  s.lo = a;
  s.hi = b;
  return s.momentOn(0, a, b);
}

// ∫_X^inf phi_n(x) x^{-1-alpha} dx by lobe summation at the asymptotic
// phase zeros of J_nu (phi_n(x) ~ C x^{-nu-1/2} cos(x - nu pi/2 - pi/4))
double besselOscTail(int n, double alpha, double X, double relTol) {
  const double nu = 0.5 * n - 1.0;
  const double phase = nu * 0.5 * kPi + 0.25 * kPi;
  auto f = [&](double x) { return besselPhi(n, x) * std::pow(x, -1.0 - alpha); };
  // head up to a safe oscillatory regime
  const double X1 = std::max(X, std::max(10.0, 4.0 * std::abs(nu) * nu + 10.0));
  double head = 0.0;
  if (X1 > X) head = adaptiveGK(f, X, X1, 1e-14, relTol, 512).value;
  // cos(x - phase) zeros: x = phase + pi/2 + k pi
  const long k0 =
      static_cast<long>(std::ceil((X1 - phase - 0.5 * kPi) / kPi - 1e-12));
  auto zero = [&](long k) { return phase + 0.5 * kPi + k * kPi; };
  double first = 0.0;
  double z0 = zero(k0);
  if (z0 > X1) first = adaptiveGK(f, X1, z0, 1e-14, relTol, 64).value;
  auto lobeTerm = [&](int j) {
    return adaptiveGK(f, zero(k0 + j), zero(k0 + j + 1), 1e-15, 1e-12, 16)
        .value;
  };
  const double tail = alternatingLobeSum(lobeTerm, 96, 1e-14);
  return head + first + tail;
}

// ∫_lo^hi (1 - phi_n(s r)) r^{-1-alpha} dr
double oneMinusPhiIntegral(int n, double alpha, double s, double lo, double hi,
                           double relTol) {
  if (s == 0.0 || lo >= hi) return 0.0;
  const double m = std::min(hi, 1.0 / s);
  double acc = 0.0;
  if (m > lo) {
    // 1 - phi_n(x) = sum_{k>=1} (-1)^{k+1} Gamma(n/2) x^{2k} /
    //                (4^k k! Gamma(k + n/2))
    double coef = 1.0;  // Gamma(n/2) / (4^k k! Gamma(k+n/2)), built up
    double s2k = 1.0;
    for (int k = 1; k <= 24; ++k) {
      coef /= 4.0 * k * (k - 1.0 + 0.5 * n);
      s2k *= s * s;
      const double term =
          coef * s2k * powerIntegralUnit(2.0 * k - 1.0 - alpha, lo, m);
      acc += (k % 2 == 1) ? term : -term;
      if (std::abs(term) <= 1e-17 * (std::abs(acc) + 1e-30)) break;
    }
  }
  const double m2 = std::max(lo, m);  // the series may stop short of lo
  if (hi > m2) {
    const double massPart = powerIntegralUnit(-1.0 - alpha, m2, hi);
    // ∫ phi_n(s r) r^{-1-a} dr = s^a ∫ phi_n(x) x^{-1-a} dx
    double oscPart = besselOscTail(n, alpha, s * m2, relTol);
    if (hi != kInf) oscPart -= besselOscTail(n, alpha, s * hi, relTol);
    acc += massPart - std::pow(s, alpha) * oscPart;
  }
  return acc;
}

struct CPrimeKey {
  double alpha;
  int dim;
  bool operator<(const CPrimeKey& o) const {
    if (alpha != o.alpha) return alpha < o.alpha;
    return dim < o.dim;
  }
};

std::map<CPrimeKey, double> gCPrimeCache;
std::mutex gCPrimeMutex;

}  // namespace

double cPrimeIsotropic(double alpha, int dim) {
  {
    std::lock_guard<std::mutex> lock(gCPrimeMutex);
    auto it = gCPrimeCache.find({alpha, dim});
    if (it != gCPrimeCache.end()) return it->second;
  }
  const double v = sphereSurface(dim) *
                   oneMinusPhiIntegral(dim, alpha, 1.0, 0.0, kInf, 1e-12);
  std::lock_guard<std::mutex> lock(gCPrimeMutex);
  gCPrimeCache[{alpha, dim}] = v;
  return v;
}

double oneMinusCosIntegral(const RayDensity& rho, double s, double relTol) {
  double acc = 0.0;
  for (const auto& span : spansOf(rho)) acc += oneMinusCosSpan(span, s, relTol);
  return acc;
}

double compensatedSinIntegral(const RayDensity& rho, double s, double relTol) {
  double acc = 0.0;
  for (const auto& span : spansOf(rho))
    acc += compensatedSinSpan(span, s, relTol);
  return acc;
}

double trigMomentIntegral(const RayDensity& rho, Trig trig, double s,
                          double relTol) {
  double acc = 0.0;
  for (const auto& span : spansOf(rho)) acc += trigSpan(span, trig, s, relTol);
  return acc;
}

std::complex<double> evalPsi(const LevyTriplet& t, const Eigen::VectorXd& z,
                             const QuadOptions& opts) {
  const double zn = z.norm();
  if (zn == 0.0) return {0.0, 0.0};
  double re = 0.5 * z.dot(t.Q * z);
  double im = t.a.dot(z);
  for (const auto& c : t.mu.components) {
    std::visit(
        Overload{
            [&](const Atoms& at) {
              for (const auto& p : at.points) {
                const double zx = z.dot(p.x);
                re += p.w * (1.0 - std::cos(zx));
                im += p.w * ((p.x.norm() < 1.0 ? zx : 0.0) - std::sin(zx));
              }
            },
            [&](const LineDensity& l) {
              const double s = z.dot(l.direction);
              const double sa = std::abs(s);
              if (sa == 0.0) return;
              re += oneMinusCosIntegral(l.pos, sa, opts.relTol) +
                    oneMinusCosIntegral(l.neg, sa, opts.relTol);
              const double odd =
                  compensatedSinIntegral(l.pos, sa, opts.relTol) -
                  compensatedSinIntegral(l.neg, sa, opts.relTol);
              im += (s >= 0.0 ? odd : -odd);
            },
            [&](const IsotropicStable& st) {
              if (st.winLo == 0.0 && st.winHi == kInf) {
                re += st.intensity * cPrimeIsotropic(st.alpha, t.mu.dim) *
                      std::pow(zn, st.alpha);
              } else {
                re += st.intensity * sphereSurface(t.mu.dim) *
                      oneMinusPhiIntegral(t.mu.dim, st.alpha, zn, st.winLo,
                                          st.winHi, opts.relTol);
              }
            }},
        c);
  }
  return {re, im};
}

ABValue evalAB(const LevyTriplet& t, const Eigen::VectorXd& z,
               const QuadOptions& opts) {
  const auto psi = evalPsi(t, z, opts);
  ABValue v;
  v.A = 1.0 + psi.real();
  v.B = std::hypot(1.0 + psi.real(), psi.imag());
  return v;
}

std::complex<double> measureCF(const LevyMeasure& nu, const Eigen::VectorXd& z,
                               const QuadOptions& opts) {
  if (std::isinf(nu.totalMass()))
    throw std::domain_error("characteristic function needs a finite measure");
  std::complex<double> acc{0.0, 0.0};
  for (const auto& c : nu.components) {
    std::visit(
        Overload{
            [&](const Atoms& at) {
              for (const auto& p : at.points) {
                const double zx = z.dot(p.x);
                acc += p.w * std::complex<double>{std::cos(zx), std::sin(zx)};
              }
            },
            [&](const LineDensity& l) {
              const double s = z.dot(l.direction);
              const double sa = std::abs(s);
              const double re =
                  trigMomentIntegral(l.pos, Trig::cos, sa, opts.relTol) +
                  trigMomentIntegral(l.neg, Trig::cos, sa, opts.relTol);
              const double odd =
                  trigMomentIntegral(l.pos, Trig::sin, sa, opts.relTol) -
                  trigMomentIntegral(l.neg, Trig::sin, sa, opts.relTol);
              acc += std::complex<double>{re, s >= 0.0 ? odd : -odd};
            },
            [&](const IsotropicStable& st) {
              // symmetric component: real contribution
              const double zn = z.norm();
              const double mass = isotropicMassOutside(st, nu.dim, 0.0);
              const double omc =
                  st.intensity * sphereSurface(nu.dim) *
                  oneMinusPhiIntegral(nu.dim, st.alpha, zn, st.winLo, st.winHi,
                                      opts.relTol);
              acc += std::complex<double>{mass - omc, 0.0};
            }},
        c);
  }
  return acc;
}

}  // namespace levyh
