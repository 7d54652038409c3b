#include "levyh/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

namespace levyh {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Gauss-Kronrod 7-15 nodes and weights on [-1, 1]
constexpr double kKronrodX[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double kKronrodW[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double kGaussW[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct PanelResult {
  double value;
  double error;
};

PanelResult gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double kron = kKronrodW[7] * f(c);
  double gauss = kGaussW[3] * f(c);
  for (int i = 0; i < 7; ++i) {
    const double lo = f(c - h * kKronrodX[i]);
    const double hi = f(c + h * kKronrodX[i]);
    kron += kKronrodW[i] * (lo + hi);
    if (i % 2 == 1) gauss += kGaussW[i / 2] * (lo + hi);
  }
  kron *= h;
  gauss *= h;
  const double diff = std::abs(kron - gauss);
  // standard scaled error heuristic
  const double err = diff * std::min(1.0, std::pow(200.0 * diff / (1.0 + std::abs(kron)), 1.5)) + 1e-300;
  return {kron, std::max(err, std::abs(kron) * 5e-16)};
}

struct Interval {
  double a, b, value, error;
  bool operator<(const Interval& o) const { return error < o.error; }
};

}  // namespace

QuadResult adaptiveGK(const std::function<double(double)>& f, double a,
                      double b, double absTol, double relTol,
                      int maxIntervals) {
  QuadResult out;
  if (!(b > a)) {
    out.converged = true;
    return out;
  }
  std::priority_queue<Interval> heap;
  auto first = gk15(f, a, b);
  out.evaluations = 15;
  heap.push({a, b, first.value, first.error});
  double sum = first.value, errSum = first.error;
  int n = 1;
  while (n < maxIntervals) {
    const double target = std::max(absTol, relTol * std::abs(sum));
    if (errSum <= target) break;
    Interval worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {  // interval exhausted by fp
      heap.push(worst);
      break;
    }
    auto left = gk15(f, worst.a, mid);
    auto right = gk15(f, mid, worst.b);
    out.evaluations += 30;
    sum += left.value + right.value - worst.value;
    errSum += left.error + right.error - worst.error;
    heap.push({worst.a, mid, left.value, left.error});
    heap.push({mid, worst.b, right.value, right.error});
    ++n;
  }
  out.value = sum;
  out.error = errSum;
  out.converged = errSum <= std::max(absTol, relTol * std::abs(sum)) * 1.0001;
  return out;
}

double alternatingLobeSum(const std::function<double(int)>& lobe, int maxLobes,
                          double absTol, double* errorOut) {
  // Euler transformation: maintain the averaging triangle's newest row.
  std::vector<double> row;
  double partial = 0.0, estimate = 0.0, prevEstimate = 0.0, err = kInf;
  for (int j = 0; j < maxLobes; ++j) {
    partial += lobe(j);
    std::vector<double> next(row.size() + 1);
    next[0] = partial;
    for (size_t i = 1; i < next.size(); ++i)
      next[i] = 0.5 * (next[i - 1] + row[i - 1]);
    row.swap(next);
    prevEstimate = estimate;
    estimate = row.back();
    if (j >= 2) {
      err = std::abs(estimate - prevEstimate);
      if (err <= absTol) break;
    }
  }
  if (errorOut) *errorOut = err;
  return estimate;
}

namespace {

double trigEval(Trig t, double x) {
  return t == Trig::cos ? std::cos(x) : std::sin(x);
}

// ∫_a^b trig(s r) r^e dr in the pre-oscillatory regime s b <= O(1), summed as
// the alternating Taylor series of the trig factor against exact power
// moments.  Avoids asking panel quadrature to resolve a sharply peaked
// envelope over the (possibly many decades wide) stretch before the first
// trig zero.
double trigPowerSeries(Trig trig, double s, double e, double a, double b) {
  DensitySpan unit;
  unit.coef = 1.0;
  unit.exponent = e;
  unit.lo = a;
  unit.hi = b;
  double acc = 0.0, sp = trig == Trig::sin ? s : 1.0, fact = 1.0;
  for (int k = 0; k <= 30; ++k) {
    if (k > 0) {
      sp *= s * s;
      fact *= trig == Trig::sin ? (2.0 * k) * (2.0 * k + 1.0)
                                : (2.0 * k - 1.0) * (2.0 * k);
    }
    const int power = trig == Trig::sin ? 2 * k + 1 : 2 * k;
    const double term = sp / fact * unit.momentOn(power, a, b);
    acc += (k % 2 == 0) ? term : -term;
    if (std::abs(term) <= 1e-17 * (std::abs(acc) + 1e-300)) break;
  }
  return acc;
}

// ∫_lo^inf trig(s r) coef r^e dr for a decaying envelope (e < 0), by lobes
// between consecutive zeros of the trig factor, Euler-accelerated.
double oscPowerTailToInf(double coef, double e, double lo, double s, Trig trig,
                         double absTol) {
  // zeros of sin(sr): r = k pi / s; of cos(sr): r = (k + 1/2) pi / s
  const double offset = (trig == Trig::cos) ? 0.5 * kPi : 0.0;
  const long k0 = static_cast<long>(std::ceil((s * lo - offset) / kPi - 1e-12));
  auto zero = [&](long k) { return (offset + k * kPi) / s; };
  double head = 0.0;
  double z0 = zero(k0);
  if (z0 > lo) {
    // Below r = 1/s the integrand does not oscillate: integrate the series
    // there and keep panel quadrature for the (< one period) remainder.
    const double m = std::min(std::max(lo, 1.0 / s), z0);
    if (m > lo) head += coef * trigPowerSeries(trig, s, e, lo, m);
    if (z0 > m)
      head += adaptiveGK(
                  [&](double r) {
                    return trigEval(trig, s * r) * coef * std::pow(r, e);
                  },
                  m, z0, absTol * 0.1, 1e-12, 64)
                  .value;
  } else {
    z0 = lo;
  }
  auto lobeTerm = [&](int j) {
    const double a = std::max(zero(k0 + j), lo);
    const double b = zero(k0 + j + 1);
    return adaptiveGK(
               [&](double r) {
                 return trigEval(trig, s * r) * coef * std::pow(r, e);
               },
               a, b, absTol * 0.01, 1e-12, 16)
        .value;
  };
  const double tail = alternatingLobeSum(lobeTerm, 96, absTol * 0.1);
  return head + tail;
}

}  // namespace

double oscSpanIntegral(const DensitySpan& span, Trig trig, double s, double a,
                       double b, double relTol) {
  a = std::max(a, span.lo);
  b = std::min(b, span.hi);
  if (a >= b) return 0.0;
  if (s == 0.0) return trig == Trig::cos ? span.momentOn(0, a, b) : 0.0;

  auto f = [&](double r) { return trigEval(trig, s * r) * span.eval(r); };

  // scale for the absolute tolerance: the L1 mass of the span on [a, b-ish]
  const double mass =
      span.momentOn(0, a, std::min(b, std::max(2.0 * a, a + 10.0 / s)));
  const double absTol = std::max(relTol * (mass + 1e-8), 1e-300);

  if (span.exponential) {
    // closed form: ∫ e^{-rate r} trig(s r) dr
    const double rate = span.rate, c = span.coef;
    auto anti = [&](double r) {  // ∫_r^inf
      const double den = rate * rate + s * s;
      const double er = std::exp(-rate * r);
      if (trig == Trig::cos)
        return er * (rate * std::cos(s * r) - s * std::sin(s * r)) / den;
      return er * (rate * std::sin(s * r) + s * std::cos(s * r)) / den;
    };
    const double top = (b == kInf) ? 0.0 : anti(b);
    return c * (anti(a) - top);
  }

  const double e = span.exponent, c = span.coef;
  const double oscillations =
      (b == kInf) ? kInf : s * (b - a) / (2.0 * kPi);

  if (oscillations <= 40.0) {
    return adaptiveGK(f, a, b, absTol, relTol, 512).value;
  }
  if (e < -0.1) {  // decaying: difference of accelerated tails
    double v = oscPowerTailToInf(c, e, a, s, trig, absTol);
    if (b != kInf) v -= oscPowerTailToInf(c, e, b, s, trig, absTol);
    return v;
  }
  // growing (or flat) envelope over a long finite interval: integrate by
  // parts to trade one power of r for one power of 1/s, then recurse.
  //   ∫ r^e sin(sr) = [-r^e cos(sr)/s] + (e/s) ∫ r^{e-1} cos(sr)
  //   ∫ r^e cos(sr) = [ r^e sin(sr)/s] - (e/s) ∫ r^{e-1} sin(sr)
  double boundary;
  DensitySpan rec = span;
  rec.exponent = e - 1.0;
  double factor;
  Trig next;
  if (trig == Trig::sin) {
    boundary = (-std::pow(b, e) * std::cos(s * b) +
                std::pow(a, e) * std::cos(s * a)) / s;
    factor = e / s;
    next = Trig::cos;
  } else {
    boundary = (std::pow(b, e) * std::sin(s * b) -
                std::pow(a, e) * std::sin(s * a)) / s;
    factor = -e / s;
    next = Trig::sin;
  }
  rec.coef = 1.0;
  return c * (boundary + factor * oscSpanIntegral(rec, next, s, a, b, relTol));
}

TailResult octaveTailIntegral(const std::function<double(double)>& f,
                              double r0, double relTol, int maxOctaves) {
  TailResult out;
  std::vector<double> octaves;
  double sum = 0.0, errAcc = 0.0;
  double lo = r0;
  for (int k = 0; k < maxOctaves; ++k) {
    const double hi = 2.0 * lo;
    auto q = adaptiveGK(f, lo, hi, 1e-300, std::min(relTol, 1e-9), 600);
    octaves.push_back(q.value);
    sum += q.value;
    errAcc += q.error;
    lo = hi;

    if (octaves.size() >= 8) {
      // least-squares slope of log g_k over the last window
      const int win = 6;
      bool positive = true;
      for (int i = 0; i < win; ++i)
        if (!(octaves[octaves.size() - 1 - i] > 0.0)) positive = false;
      if (!positive) {
        // integrand vanished (or oscillated to ~0): treat as converged when
        // the recent octaves are negligible against the accumulated value
        double recent = 0.0;
        for (int i = 0; i < win; ++i)
          recent += std::abs(octaves[octaves.size() - 1 - i]);
        if (recent <= relTol * std::abs(sum) + 1e-300) {
          out.kind = TailResult::Kind::converged;
          out.value = sum;
          out.errorEst = errAcc + recent;
          out.fittedExponent = -kInf;
          out.reachedR = lo;
          out.lastOctave = octaves.back();
          return out;
        }
        continue;
      }
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      for (int i = 0; i < win; ++i) {
        const double x = static_cast<double>(i);
        const double y = std::log(octaves[octaves.size() - win + i]);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
      }
      const double slope = (win * sxy - sx * sy) / (win * sxx - sx * sx);
      const double rho = std::exp(slope);          // octave ratio 2^{p+1}
      const double p = slope / std::log(2.0) - 1.0;  // integrand exponent
      out.fittedExponent = p;

      if (p < -1.1) {  // geometric decay: remainder from the fitted ratio
        const double remainder = octaves.back() * rho / (1.0 - rho);
        const double remErr = 0.25 * remainder;
        if (remainder <= relTol * (std::abs(sum) + remainder) * 4.0 ||
            k == maxOctaves - 1) {
          out.kind = TailResult::Kind::converged;
          out.value = sum + remainder;
          out.errorEst = errAcc + remErr;
          out.reachedR = lo;
          out.lastOctave = octaves.back();
          return out;
        }
      } else if (p > -0.9 && octaves.size() >= 12) {
        out.kind = TailResult::Kind::diverged;
        out.value = sum;
        out.errorEst = errAcc;
        out.reachedR = lo;
        out.lastOctave = octaves.back();
        return out;
      } else if (std::abs(p + 1.0) <= 0.03 && octaves.size() >= 16) {
        // octave contributions essentially constant: logarithmic divergence
        out.kind = TailResult::Kind::diverged;
        out.value = sum;
        out.errorEst = errAcc;
        out.reachedR = lo;
        out.lastOctave = octaves.back();
        return out;
      }
    }
  }
  out.kind = TailResult::Kind::inconclusive;
  out.value = sum;
  out.errorEst = errAcc;
  out.reachedR = lo;
  out.lastOctave = octaves.empty() ? 0.0 : octaves.back();
  return out;
}

}  // namespace levyh
