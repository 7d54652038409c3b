#include "levyh/calculus.hpp"

#include <cmath>
#include <stdexcept>

#include "levyh/exponent.hpp"
#include "levyh/spectral.hpp"

namespace levyh {

namespace {

template <class... Ts>
struct Overload : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overload(Ts...) -> Overload<Ts...>;

// jump images at most this far from the origin are treated as zero jumps
constexpr double kDropTol = 1e-12;

RayDensity fullPowerRay(double coef, double alpha, double winLo, double winHi) {
  RayDensity d;
  d.inner = {coef, -1.0 - alpha};
  d.innerEnd = 1.0;
  d.outerKind = OuterTail::power;
  d.outerPower = {coef, -1.0 - alpha};
  d.winLo = winLo;
  d.winHi = winHi;
  return d;
}

// a 1-d isotropic component is exactly a symmetric line density
LineDensity isotropicAsLine(const IsotropicStable& st, int dim, int axis) {
  LineDensity l;
  l.direction = Eigen::VectorXd::Unit(dim, axis);
  l.pos = fullPowerRay(st.intensity, st.alpha, st.winLo, st.winHi);
  l.neg = l.pos;
  return l;
}

MeasureComponent embedComponent(const MeasureComponent& c, int newDim,
                                int offset, int srcDim) {
  return std::visit(
      Overload{
          [&](const Atoms& at) -> MeasureComponent {
            Atoms out;
            for (const auto& p : at.points) {
              Eigen::VectorXd x = Eigen::VectorXd::Zero(newDim);
              x.segment(offset, srcDim) = p.x;
              out.points.push_back({std::move(x), p.w});
            }
            return out;
          },
          [&](const LineDensity& l) -> MeasureComponent {
            LineDensity out = l;
            out.direction = Eigen::VectorXd::Zero(newDim);
            out.direction.segment(offset, srcDim) = l.direction;
            return out;
          },
          [&](const IsotropicStable& st) -> MeasureComponent {
            if (srcDim == 1) return isotropicAsLine(st, newDim, offset);
            throw std::invalid_argument(
                "embedding an isotropic component of dimension >= 2 is not "
                "representable");
          }},
      c);
}

bool sameDirection(const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                   bool& flipped) {
  const double d = u.dot(v);
  flipped = d < 0.0;
  return std::abs(d) >= 1.0 - 1e-12;
}

// mu1 ray must look like k * parent on its support window; returns k
double windowScale(const RayDensity& sub, const RayDensity& parent, double lo,
                   double hi) {
  const double top = std::isinf(hi) ? std::max(2.0 * lo, lo + 1.0) : hi;
  double k = -1.0;
  for (int i = 0; i < 16; ++i) {
    const double r = lo * std::pow(top / lo, (i + 0.5) / 16.0);
    const double s = sub(r), p = parent(r);
    if (s == 0.0) continue;
    if (p <= 0.0)
      throw std::invalid_argument(
          "truncated measure is not dominated: density outside the parent "
          "support");
    const double ki = s / p;
    if (k < 0.0) k = ki;
    if (std::abs(ki - k) > 1e-9 * std::max(k, ki))
      throw std::invalid_argument(
          "truncated ray density is not a windowed multiple of its parent");
  }
  if (k < 0.0) return 0.0;
  if (k > 1.0 + 1e-9)
    throw std::invalid_argument(
        "truncated measure is not dominated: density exceeds the parent");
  return std::min(k, 1.0);
}

// parent ray minus k * parent on [lo, hi): up to three windowed pieces
std::vector<RayDensity> subtractWindow(const RayDensity& parent, double k,
                                       double lo, double hi) {
  std::vector<RayDensity> pieces;
  auto keep = [&](RayDensity d) {
    if (!d.empty() && d.winLo < d.winHi && d.momentOn(0, d.winLo, d.winHi) > 0)
      pieces.push_back(std::move(d));
  };
  keep(parent.windowed(0.0, lo));
  if (1.0 - k > 1e-12) keep(parent.windowed(lo, hi).scaled(1.0 - k));
  keep(parent.windowed(hi, kInf));
  return pieces;
}

}  // namespace

LevyTriplet sumTriplets(const LevyTriplet& t1, const LevyTriplet& t2) {
  if (t1.dim() != t2.dim())
    throw std::invalid_argument("summands must have equal dimensions");
  LevyTriplet out;
  out.a = t1.a + t2.a;
  out.Q = t1.Q + t2.Q;
  out.mu.dim = t1.dim();
  out.mu.components = t1.mu.components;
  out.mu.components.insert(out.mu.components.end(), t2.mu.components.begin(),
                           t2.mu.components.end());
  return out;
}

LevyTriplet productEmbed(const LevyTriplet& t1, const LevyTriplet& t2) {
  const int n = t1.dim(), m = t2.dim();
  LevyTriplet out;
  out.a.resize(n + m);
  out.a << t1.a, t2.a;
  out.Q = Eigen::MatrixXd::Zero(n + m, n + m);
  out.Q.topLeftCorner(n, n) = t1.Q;
  out.Q.bottomRightCorner(m, m) = t2.Q;
  out.mu.dim = n + m;
  for (const auto& c : t1.mu.components)
    out.mu.components.push_back(embedComponent(c, n + m, 0, n));
  for (const auto& c : t2.mu.components)
    out.mu.components.push_back(embedComponent(c, n + m, n, m));
  return out;
}

ProjectionResult projectTriplet(const LevyTriplet& t,
                                const Eigen::MatrixXd& V) {
  const int n = t.dim();
  const int k = static_cast<int>(V.cols());
  if (V.rows() != n || k < 1 || k >= n)
    throw std::invalid_argument(
        "subspace basis must have triplet-dimension rows and strictly fewer "
        "columns");
  const Eigen::MatrixXd gram = V.transpose() * V;
  if ((gram - Eigen::MatrixXd::Identity(k, k)).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("subspace basis is not orthonormal");

  ProjectionResult out;
  out.subspaceBasis = V;
  Eigen::VectorXd aP = V.transpose() * t.a;
  LevyMeasure mu;
  mu.dim = k;

  for (const auto& c : t.mu.components) {
    std::visit(
        Overload{
            [&](const Atoms& at) {
              Atoms img;
              for (const auto& p : at.points) {
                Eigen::VectorXd y = V.transpose() * p.x;
                // |y| <= |x|, so the indicator windows differ only when the
                // image falls inside the unit ball and the source does not
                if (p.x.norm() >= 1.0 && y.norm() < 1.0) aP -= p.w * y;
                if (y.norm() > kDropTol)
                  img.points.push_back({std::move(y), p.w});
                else
                  out.droppedMass += p.w;
              }
              if (!img.points.empty()) mu.components.push_back(std::move(img));
            },
            [&](const LineDensity& l) {
              const Eigen::VectorXd v = V.transpose() * l.direction;
              const double gamma = v.norm();
              if (gamma <= kDropTol) {
                out.droppedMass +=
                    l.pos.totalMass() + l.neg.totalMass();
                return;
              }
              if (gamma < 1.0) {
                // window correction  -v Int_1^{1/gamma} r (pos - neg)(r) dr
                const double m1 = l.pos.momentOn(1, 1.0, 1.0 / gamma) -
                                  l.neg.momentOn(1, 1.0, 1.0 / gamma);
                aP -= v * m1;
              }
              LineDensity img;
              img.direction = v / gamma;
              img.pos = l.pos.rescaledRadius(gamma);
              img.neg = l.neg.rescaledRadius(gamma);
              mu.components.push_back(std::move(img));
            },
            [&](const IsotropicStable& st) {
              if (st.winLo != 0.0 || st.winHi != kInf)
                throw std::invalid_argument(
                    "projection of a windowed isotropic component is not "
                    "representable");
              // correction vanishes by symmetry; marginal stays stable
              IsotropicStable img = st;
              img.intensity = st.intensity * cPrimeIsotropic(st.alpha, n) /
                              cPrimeIsotropic(st.alpha, k);
              mu.components.push_back(img);
            }},
        c);
  }

  out.projectedTriplet.a = aP;
  out.projectedTriplet.Q = V.transpose() * t.Q * V;
  out.projectedTriplet.mu = std::move(mu);
  out.aPrime = std::move(aP);
  return out;
}

LevyTriplet truncateBigJumps(const LevyTriplet& t, const LevyMeasure& mu1) {
  if (mu1.dim != t.dim())
    throw std::invalid_argument("truncated measure dimension mismatch");
  if (std::isinf(mu1.totalMass()))
    throw std::invalid_argument("truncated measure must have finite mass");

  LevyTriplet out = t;
  out.mu.components.clear();

  // mutable copies of the parent components, consumed by matching
  std::vector<MeasureComponent> rest = t.mu.components;

  for (const auto& c1 : mu1.components) {
    std::visit(
        Overload{
            [&](const Atoms& at1) {
              for (const auto& p1 : at1.points) {
                double left = p1.w;
                for (auto& rc : rest) {
                  auto* at = std::get_if<Atoms>(&rc);
                  if (!at) continue;
                  for (auto& p : at->points) {
                    if ((p.x - p1.x).norm() > 1e-9 * (1.0 + p1.x.norm()))
                      continue;
                    const double take = std::min(left, p.w);
                    p.w -= take;
                    left -= take;
                    if (left <= 0.0) break;
                  }
                  if (left <= 0.0) break;
                }
                if (left > 1e-9 * (1.0 + p1.w))
                  throw std::invalid_argument(
                      "truncated measure is not dominated: atom exceeds the "
                      "parent weight");
              }
            },
            [&](const LineDensity& l1) {
              for (auto& rc : rest) {
                auto* l = std::get_if<LineDensity>(&rc);
                if (!l) continue;
                bool flipped = false;
                if (!sameDirection(l->direction, l1.direction, flipped))
                  continue;
                const RayDensity& subPos = flipped ? l1.neg : l1.pos;
                const RayDensity& subNeg = flipped ? l1.pos : l1.neg;
                std::vector<RayDensity> posPieces{l->pos},
                    negPieces{l->neg};
                if (!subPos.empty()) {
                  const double lo = subPos.supportLo(), hi = subPos.supportHi();
                  const double k = windowScale(subPos, l->pos, lo, hi);
                  posPieces = subtractWindow(l->pos, k, lo, hi);
                }
                if (!subNeg.empty()) {
                  const double lo = subNeg.supportLo(), hi = subNeg.supportHi();
                  const double k = windowScale(subNeg, l->neg, lo, hi);
                  negPieces = subtractWindow(l->neg, k, lo, hi);
                }
                // re-emit the split rays as one-sided line components
                std::vector<MeasureComponent> emitted;
                for (auto& p : posPieces) {
                  LineDensity piece;
                  piece.direction = l->direction;
                  piece.pos = std::move(p);
                  emitted.push_back(std::move(piece));
                }
                for (auto& nn : negPieces) {
                  LineDensity piece;
                  piece.direction = l->direction;
                  piece.neg = std::move(nn);
                  emitted.push_back(std::move(piece));
                }
                rc = Atoms{};  // consume the parent slot
                for (auto& e : emitted) rest.push_back(std::move(e));
                return;
              }
              throw std::invalid_argument(
                  "truncated measure is not dominated: no parent line with "
                  "this direction");
            },
            [&](const IsotropicStable& s1) {
              for (auto& rc : rest) {
                auto* s = std::get_if<IsotropicStable>(&rc);
                if (!s) continue;
                if (std::abs(s->alpha - s1.alpha) > 1e-12) continue;
                if (s1.winLo < s->winLo - 1e-15 || s1.winHi > s->winHi)
                  throw std::invalid_argument(
                      "truncated isotropic window exceeds the parent window");
                if (s1.intensity > s->intensity * (1.0 + 1e-9))
                  throw std::invalid_argument(
                      "truncated measure is not dominated: isotropic "
                      "intensity exceeds the parent");
                std::vector<IsotropicStable> pieces;
                auto keep = [&](double lo, double hi, double c) {
                  if (lo < hi && c > 1e-12 * s->intensity)
                    pieces.push_back({s->alpha, c, lo, hi});
                };
                keep(s->winLo, s1.winLo, s->intensity);
                keep(s1.winLo, s1.winHi, s->intensity - s1.intensity);
                keep(s1.winHi, s->winHi, s->intensity);
                rc = Atoms{};  // consume the parent slot
                for (auto& p : pieces) rest.push_back(p);
                return;
              }
              throw std::invalid_argument(
                  "truncated measure is not dominated: no matching isotropic "
                  "parent");
            }},
        c1);
  }

  // a' = a + Int_{|x|<1} x mu1(dx): removed small jumps stop being
  // compensated, so their mean drift moves into the linear term
  out.a = t.a + mu1.firstMomentInside(1.0);

  for (auto& rc : rest) {
    if (auto* at = std::get_if<Atoms>(&rc)) {
      Atoms kept;
      for (auto& p : at->points)
        if (p.w > 1e-12) kept.points.push_back(std::move(p));
      if (!kept.points.empty()) out.mu.components.push_back(std::move(kept));
    } else {
      out.mu.components.push_back(std::move(rc));
    }
  }
  return out;
}

RestrictRegion RestrictRegion::insideRadius(double r) {
  RestrictRegion reg;
  reg.kind = Kind::inside;
  reg.radius = r;
  return reg;
}

RestrictRegion RestrictRegion::outsideRadius(double r) {
  RestrictRegion reg;
  reg.kind = Kind::outside;
  reg.radius = r;
  return reg;
}

RestrictRegion RestrictRegion::offRangeOf(const Eigen::MatrixXd& P2) {
  RestrictRegion reg;
  reg.kind = Kind::offRange;
  reg.P2 = P2;
  return reg;
}

LevyMeasure restrictMeasure(const LevyMeasure& mu, const RestrictRegion& reg) {
  if (reg.kind == RestrictRegion::Kind::offRange)
    return restrictOffRange(mu, reg.P2);
  if (!(reg.radius > 0.0))
    throw std::invalid_argument("restriction radius must be positive");
  const bool inside = reg.kind == RestrictRegion::Kind::inside;
  const double lo = inside ? 0.0 : reg.radius;
  const double hi = inside ? reg.radius : kInf;

  LevyMeasure out;
  out.dim = mu.dim;
  for (const auto& c : mu.components) {
    std::visit(
        Overload{
            [&](const Atoms& at) {
              Atoms kept;
              for (const auto& p : at.points) {
                const double r = p.x.norm();
                if (inside ? r < reg.radius : r >= reg.radius)
                  kept.points.push_back(p);
              }
              if (!kept.points.empty())
                out.components.push_back(std::move(kept));
            },
            [&](const LineDensity& l) {
              LineDensity w;
              w.direction = l.direction;
              w.pos = l.pos.windowed(lo, hi);
              w.neg = l.neg.windowed(lo, hi);
              if (!w.pos.empty() || !w.neg.empty())
                out.components.push_back(std::move(w));
            },
            [&](const IsotropicStable& st) {
              IsotropicStable w = st;
              w.winLo = std::max(st.winLo, lo);
              w.winHi = std::min(st.winHi, hi);
              if (!(w.winLo < w.winHi)) return;
              if (mu.dim == 1)  // exactly a symmetric line density in 1-d
                out.components.push_back(
                    isotropicAsLine(w, 1, 0));
              else
                out.components.push_back(w);
            }},
        c);
  }
  return out;
}

}  // namespace levyh
