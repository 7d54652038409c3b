// One-sided radial jump density on (0, inf).
//
// A RayDensity describes the radial part of a Levy measure concentrated on a
// half-line.  The density is assembled from up to three contiguous pieces:
//
//   (0, innerEnd)            parametric power law  coef * r^exponent
//   [grid.front(), grid.back()]   tabulated values on a log grid, interpolated
//                            log-log (each cell is itself a power law)
//   [outerStart, inf)        power law  coef * r^exponent  with exponent < -1,
//                            or exponential  coef * exp(-rate * r)
//
// plus a clipping window [winLo, winHi): the density is zero outside.  Every
// piece is a power law or an exponential, so moments  ∫ r^k rho(r) dr  over
// any interval have closed forms; nothing near r = 0 is ever quadratured.
#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace levyh {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct PowerPiece {
  double coef = 0.0;      // multiplicative constant, >= 0
  double exponent = 0.0;  // exponent of r
};

enum class OuterTail { none, power, exponential };

struct RayDensity {
  // inner parametric piece on (0, innerEnd); inactive when inner.coef == 0
  PowerPiece inner;
  double innerEnd = 0.0;

  // tabulated piece on [gridR.front(), gridR.back()]; values strictly positive
  std::vector<double> gridR;
  std::vector<double> gridV;

  // tail on [outerStart(), inf)
  OuterTail outerKind = OuterTail::none;
  PowerPiece outerPower;
  double expCoef = 0.0;
  double expRate = 0.0;

  // clipping window: density vanishes outside [winLo, winHi)
  double winLo = 0.0;
  double winHi = kInf;

  bool empty() const;
  double outerStart() const;      // left endpoint of the tail piece
  double supportLo() const;       // inf of the effective support
  double supportHi() const;       // sup of the effective support

  double operator()(double r) const;

  // ∫ r^k rho(r) dr over [lo, hi], closed form per piece.  Returns +inf when
  // the integral diverges (possible only at the endpoints 0 and inf).
  double momentOn(int k, double lo, double hi) const;
  double totalMass() const { return momentOn(0, 0.0, kInf); }

  RayDensity scaled(double s) const;              // s * rho
  RayDensity windowed(double lo, double hi) const;
  // pushforward of rho(r) dr under r -> gamma * r (0 < gamma <= 1):
  // new density  rho(r/gamma) / gamma
  RayDensity rescaledRadius(double gamma) const;

  // validation: returns a list of problems, empty when well formed
  std::vector<std::string> validate() const;
};

// A power-law or exponential span, the common currency of the quadrature
// layer: every RayDensity decomposes into a short list of these.
struct DensitySpan {
  bool exponential = false;
  double coef = 0.0;
  double exponent = 0.0;  // power law: coef * r^exponent
  double rate = 0.0;      // exponential: coef * exp(-rate * r)
  double lo = 0.0;
  double hi = kInf;

  double eval(double r) const;
  // ∫ r^k f(r) dr over [a, b] ⊂ [lo, hi], closed form; +inf on divergence
  double momentOn(int k, double a, double b) const;
};

// Decompose into spans clipped to the window (and optionally to [lo, hi]).
std::vector<DensitySpan> spansOf(const RayDensity& d, double lo = 0.0,
                                 double hi = kInf);

}  // namespace levyh
