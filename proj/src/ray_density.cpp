#include "levyh/ray_density.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <sstream>

namespace levyh {

namespace {

// ∫_a^b c r^e dr with 0 <= a <= b <= inf; +inf when divergent.
double powerIntegral(double c, double e, double a, double b) {
  if (c == 0.0 || a >= b) return 0.0;
  const double p = e + 1.0;
  if (std::abs(p) < 1e-14) {
    if (a == 0.0 || b == kInf) return kInf;
    return c * std::log(b / a);
  }
  double upper, lower;
  if (b == kInf) {
    if (p > 0.0) return kInf;
    upper = 0.0;
  } else {
    upper = std::pow(b, p);
  }
  if (a == 0.0) {
    if (p < 0.0) return kInf;
    lower = 0.0;
  } else {
    lower = std::pow(a, p);
  }
  return c * (upper - lower) / p;
}

// ∫_a^b r^k c e^{-rate r} dr by the recurrence
//   M_0 = (e^{-ra} - e^{-rb})/rate,
//   M_k = (a^k e^{-ra} - b^k e^{-rb} + k M_{k-1})/rate.
double expIntegral(double c, double rate, int k, double a, double b) {
  if (c == 0.0 || a >= b) return 0.0;
  assert(rate > 0.0 && k >= 0);
  const double ea = std::exp(-rate * a);
  const double eb = (b == kInf) ? 0.0 : std::exp(-rate * b);
  double M = (ea - eb) / rate;
  double ak = 1.0, bk = 1.0;
  for (int j = 1; j <= k; ++j) {
    ak *= a;
    bk = (b == kInf) ? 0.0 : bk * b;
    M = (ak * ea - bk * eb + j * M) / rate;
  }
  return c * M;
}

}  // namespace

double DensitySpan::eval(double r) const {
  if (r < lo || r >= hi) return 0.0;
  if (exponential) return coef * std::exp(-rate * r);
  return coef * std::pow(r, exponent);
}

double DensitySpan::momentOn(int k, double a, double b) const {
  a = std::max(a, lo);
  b = std::min(b, hi);
  if (a >= b) return 0.0;
  if (exponential) return expIntegral(coef, rate, k, a, b);
  return powerIntegral(coef, exponent + k, a, b);
}

bool RayDensity::empty() const {
  return inner.coef == 0.0 && gridR.empty() && outerKind == OuterTail::none;
}

double RayDensity::outerStart() const {
  if (outerKind == OuterTail::none) return kInf;
  if (!gridR.empty()) return gridR.back();
  return innerEnd;  // tail directly after the inner piece (or 0: full line)
}

double RayDensity::supportLo() const {
  double lo = kInf;
  if (inner.coef > 0.0) lo = 0.0;
  else if (!gridR.empty()) lo = gridR.front();
  else if (outerKind != OuterTail::none) lo = outerStart();
  return std::max(lo, winLo);
}

double RayDensity::supportHi() const {
  double hi = 0.0;
  if (outerKind != OuterTail::none) hi = kInf;
  else if (!gridR.empty()) hi = gridR.back();
  else if (inner.coef > 0.0) hi = innerEnd;
  return std::min(hi, winHi);
}

double RayDensity::operator()(double r) const {
  if (!(r > 0.0) || r < winLo || r >= winHi) return 0.0;
  if (inner.coef > 0.0 && r < innerEnd)
    return inner.coef * std::pow(r, inner.exponent);
  if (!gridR.empty() && r >= gridR.front() && r <= gridR.back()) {
    auto it = std::upper_bound(gridR.begin(), gridR.end(), r);
    size_t i = (it == gridR.begin()) ? 0 : (it - gridR.begin() - 1);
    if (i + 1 >= gridR.size()) i = gridR.size() - 2;
    if (gridR.size() == 1) return gridV[0];
    const double p = std::log(gridV[i + 1] / gridV[i]) /
                     std::log(gridR[i + 1] / gridR[i]);
    return gridV[i] * std::pow(r / gridR[i], p);
  }
  if (outerKind == OuterTail::power && r >= outerStart())
    return outerPower.coef * std::pow(r, outerPower.exponent);
  if (outerKind == OuterTail::exponential && r >= outerStart())
    return expCoef * std::exp(-expRate * r);
  return 0.0;
}

std::vector<DensitySpan> spansOf(const RayDensity& d, double lo, double hi) {
  lo = std::max(lo, d.winLo);
  hi = std::min(hi, d.winHi);
  std::vector<DensitySpan> spans;
  if (lo >= hi || d.empty()) return spans;

  auto push = [&](DensitySpan s) {
    s.lo = std::max(s.lo, lo);
    s.hi = std::min(s.hi, hi);
    if (s.lo < s.hi && s.coef != 0.0) spans.push_back(s);
  };

  if (d.inner.coef > 0.0)
    push({false, d.inner.coef, d.inner.exponent, 0.0, 0.0, d.innerEnd});
  for (size_t i = 0; i + 1 < d.gridR.size(); ++i) {
    const double p = std::log(d.gridV[i + 1] / d.gridV[i]) /
                     std::log(d.gridR[i + 1] / d.gridR[i]);
    // cell density v_i (r/r_i)^p  ==  (v_i r_i^{-p}) r^p
    push({false, d.gridV[i] * std::pow(d.gridR[i], -p), p, 0.0, d.gridR[i],
          d.gridR[i + 1]});
  }
  if (d.outerKind == OuterTail::power)
    push({false, d.outerPower.coef, d.outerPower.exponent, 0.0, d.outerStart(),
          kInf});
  else if (d.outerKind == OuterTail::exponential) {
    DensitySpan s;
    s.exponential = true;
    s.coef = d.expCoef;
    s.rate = d.expRate;
    s.lo = d.outerStart();
    s.hi = kInf;
    push(s);
  }
  return spans;
}

double RayDensity::momentOn(int k, double lo, double hi) const {
  double acc = 0.0;
  for (const auto& s : spansOf(*this, lo, hi)) {
    const double v = s.momentOn(k, lo, hi);
    if (std::isinf(v)) return kInf;
    acc += v;
  }
  return acc;
}

RayDensity RayDensity::scaled(double s) const {
  RayDensity r = *this;
  r.inner.coef *= s;
  for (auto& v : r.gridV) v *= s;
  r.outerPower.coef *= s;
  r.expCoef *= s;
  return r;
}

RayDensity RayDensity::windowed(double lo, double hi) const {
  RayDensity r = *this;
  r.winLo = std::max(winLo, lo);
  r.winHi = std::min(winHi, hi);
  return r;
}

RayDensity RayDensity::rescaledRadius(double gamma) const {
  assert(gamma > 0.0);
  RayDensity r;
  // rho(r) dr pushed through r -> gamma r gives density rho(u/gamma)/gamma
  r.inner.coef = inner.coef * std::pow(gamma, -inner.exponent - 1.0);
  r.inner.exponent = inner.exponent;
  r.innerEnd = innerEnd * gamma;
  r.gridR = gridR;
  r.gridV = gridV;
  for (auto& x : r.gridR) x *= gamma;
  for (auto& v : r.gridV) v /= gamma;
  r.outerKind = outerKind;
  r.outerPower.coef = outerPower.coef * std::pow(gamma, -outerPower.exponent - 1.0);
  r.outerPower.exponent = outerPower.exponent;
  r.expCoef = expCoef / gamma;
  r.expRate = expRate / gamma;
  r.winLo = winLo * gamma;
  r.winHi = (winHi == kInf) ? kInf : winHi * gamma;
  return r;
}

std::vector<std::string> RayDensity::validate() const {
  std::vector<std::string> bad;
  auto complain = [&](const std::string& m) { bad.push_back(m); };

  if (inner.coef < 0.0) complain("inner tail coefficient is negative");
  if (inner.coef > 0.0 && !(innerEnd > 0.0))
    complain("inner tail present but innerEnd is not positive");
  if (gridR.size() != gridV.size())
    complain("grid radius/value arrays differ in length");
  if (gridR.size() == 1) complain("grid needs at least two nodes");
  for (size_t i = 0; i < gridR.size(); ++i) {
    if (!(gridR[i] > 0.0)) complain("grid radii must be positive");
    if (!(gridV[i] > 0.0))
      complain("grid density values must be strictly positive");
    if (i > 0 && !(gridR[i] > gridR[i - 1]))
      complain("grid radii must be strictly increasing");
  }
  if (inner.coef > 0.0 && !gridR.empty() &&
      std::abs(gridR.front() - innerEnd) > 1e-12 * (1.0 + innerEnd))
    complain("inner tail must end where the grid begins");
  if (outerKind == OuterTail::power) {
    if (outerPower.coef < 0.0) complain("outer tail coefficient is negative");
    if (outerPower.coef > 0.0 && outerPower.exponent >= -1.0)
      complain("outer power tail must decay faster than 1/r (finite mass)");
    if (outerPower.coef > 0.0 && gridR.empty() && inner.coef > 0.0 &&
        !(innerEnd > 0.0))
      complain("outer tail needs a positive start radius");
  }
  if (outerKind == OuterTail::exponential) {
    if (expCoef < 0.0) complain("exponential tail coefficient is negative");
    if (expCoef > 0.0 && !(expRate > 0.0))
      complain("exponential tail rate must be positive");
  }
  if (!(winLo >= 0.0) || !(winHi > winLo))
    complain("window must satisfy 0 <= winLo < winHi");
  // integrability of (1 ∧ r^2) against the density, all pieces included
  if (bad.empty() && !empty()) {
    if (std::isinf(momentOn(2, 0.0, 1.0)))
      complain("density not integrable against r^2 near 0");
    if (std::isinf(momentOn(0, 1.0, kInf)))
      complain("density has infinite mass away from 0");
  }
  return bad;
}

}  // namespace levyh
