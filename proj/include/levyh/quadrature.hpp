// Quadrature layer.
//
//  * adaptiveGK      : globally adaptive Gauss-Kronrod 7-15 on a bounded
//                      interval
//  * oscSpanIntegral : ∫ trig(s r) * span(r) dr for a power-law/exponential
//                      span, robust for any frequency s (few oscillations ->
//                      direct panels; many -> between-zeros lobe summation
//                      with Euler acceleration, or integration by parts for
//                      growing envelopes)
//  * octaveTailIntegral : ∫_{r0}^inf F of a positive radial profile, summed
//                      over dyadic octaves with a fitted power-law remainder
//                      and a converged / diverged / inconclusive verdict
#pragma once

#include <functional>

#include "levyh/ray_density.hpp"

namespace levyh {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = false;
  long evaluations = 0;
};

QuadResult adaptiveGK(const std::function<double(double)>& f, double a,
                      double b, double absTol, double relTol,
                      int maxIntervals = 4000);

enum class Trig { cos, sin };

// ∫_a^b trig(s r) * span(r) dr with [a,b] clipped to the span; s >= 0
double oscSpanIntegral(const DensitySpan& span, Trig trig, double s, double a,
                       double b, double relTol = 1e-11);

// Alternating-series summation with Euler averaging.  `lobe(j)` returns the
// signed j-th term; terms must eventually alternate with decaying magnitude.
double alternatingLobeSum(const std::function<double(int)>& lobe, int maxLobes,
                          double absTol, double* errorOut = nullptr);

struct TailResult {
  enum class Kind { converged, diverged, inconclusive };
  Kind kind = Kind::inconclusive;
  double value = 0.0;        // octave sum (+ remainder estimate if converged)
  double errorEst = 0.0;
  double fittedExponent = 0.0;  // power-law exponent of the integrand
  double lastOctave = 0.0;      // contribution of the last octave summed
  double reachedR = 0.0;
};

TailResult octaveTailIntegral(const std::function<double(double)>& f,
                              double r0, double relTol, int maxOctaves = 48);

}  // namespace levyh
