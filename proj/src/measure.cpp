#include "levyh/measure.hpp"

#include <cmath>
#include <stdexcept>

namespace levyh {

namespace {

double pi() { return 3.14159265358979323846; }

template <class... Ts>
struct Overload : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overload(Ts...) -> Overload<Ts...>;

}  // namespace

double sphereSurface(int n) {
  // 2 pi^{n/2} / Gamma(n/2); S^0 = two points
  if (n == 1) return 2.0;
  return 2.0 * std::pow(pi(), 0.5 * n) / std::tgamma(0.5 * n);
}

double isotropicSecondMoment(const IsotropicStable& s, int dim, double r) {
  const double hi = std::min(r, s.winHi);
  const double lo = s.winLo;
  if (lo >= hi) return 0.0;
  // ∫_lo^hi r'^2 r'^{-1-a} dr' * c * surface = c surf (hi^{2-a}-lo^{2-a})/(2-a)
  const double p = 2.0 - s.alpha;
  return s.intensity * sphereSurface(dim) *
         (std::pow(hi, p) - std::pow(lo, p)) / p;
}

double isotropicMassOutside(const IsotropicStable& s, int dim, double r) {
  const double lo = std::max(r, s.winLo);
  const double hi = s.winHi;
  if (lo >= hi) return 0.0;
  if (lo == 0.0) return kInf;
  const double p = -s.alpha;
  const double top = (hi == kInf) ? 0.0 : std::pow(hi, p);
  return s.intensity * sphereSurface(dim) * (top - std::pow(lo, p)) / p;
}

bool LevyMeasure::emptyMeasure() const {
  for (const auto& c : components) {
    const bool has = std::visit(
        Overload{[](const Atoms& a) { return !a.points.empty(); },
                 [](const LineDensity& l) {
                   return !l.pos.empty() || !l.neg.empty();
                 },
                 [](const IsotropicStable& s) {
                   return s.intensity > 0.0 && s.winLo < s.winHi;
                 }},
        c);
    if (has) return false;
  }
  return true;
}

double LevyMeasure::totalMass() const {
  double acc = 0.0;
  for (const auto& c : components) {
    const double m = std::visit(
        Overload{[](const Atoms& a) {
                   double s = 0.0;
                   for (const auto& p : a.points) s += p.w;
                   return s;
                 },
                 [](const LineDensity& l) {
                   return l.pos.totalMass() + l.neg.totalMass();
                 },
                 [this](const IsotropicStable& s) {
                   return isotropicMassOutside(s, dim, 0.0);
                 }},
        c);
    if (std::isinf(m)) return kInf;
    acc += m;
  }
  return acc;
}

double LevyMeasure::massOutside(double r) const {
  double acc = 0.0;
  for (const auto& c : components) {
    const double m = std::visit(
        Overload{[&](const Atoms& a) {
                   double s = 0.0;
                   for (const auto& p : a.points)
                     if (p.x.norm() >= r) s += p.w;
                   return s;
                 },
                 [&](const LineDensity& l) {
                   return l.pos.momentOn(0, r, kInf) +
                          l.neg.momentOn(0, r, kInf);
                 },
                 [&](const IsotropicStable& s) {
                   return isotropicMassOutside(s, dim, r);
                 }},
        c);
    if (std::isinf(m)) return kInf;
    acc += m;
  }
  return acc;
}

double LevyMeasure::secondMomentInside(double r) const {
  double acc = 0.0;
  for (const auto& c : components) {
    acc += std::visit(
        Overload{[&](const Atoms& a) {
                   double s = 0.0;
                   for (const auto& p : a.points) {
                     const double n = p.x.norm();
                     if (n < r) s += p.w * n * n;
                   }
                   return s;
                 },
                 [&](const LineDensity& l) {
                   return l.pos.momentOn(2, 0.0, r) +
                          l.neg.momentOn(2, 0.0, r);
                 },
                 [&](const IsotropicStable& s) {
                   return isotropicSecondMoment(s, dim, r);
                 }},
        c);
  }
  return acc;
}

bool LevyMeasure::finiteFirstMomentInside(double r) const {
  for (const auto& c : components) {
    const bool fin = std::visit(
        Overload{[](const Atoms&) { return true; },
                 [&](const LineDensity& l) {
                   return !std::isinf(l.pos.momentOn(1, 0.0, r)) &&
                          !std::isinf(l.neg.momentOn(1, 0.0, r));
                 },
                 [&](const IsotropicStable& s) {
                   // ∫ r'^{-a} dr' near 0 diverges iff a >= 1 (when the
                   // window reaches 0)
                   return s.winLo > 0.0 || s.alpha < 1.0;
                 }},
        c);
    if (!fin) return false;
  }
  return true;
}

Eigen::VectorXd LevyMeasure::firstMomentInside(double r) const {
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(dim);
  for (const auto& c : components) {
    std::visit(
        Overload{[&](const Atoms& a) {
                   for (const auto& p : a.points)
                     if (p.x.norm() < r) acc += p.w * p.x;
                 },
                 [&](const LineDensity& l) {
                   const double mp = l.pos.momentOn(1, 0.0, r);
                   const double mn = l.neg.momentOn(1, 0.0, r);
                   if (std::isinf(mp) || std::isinf(mn))
                     throw std::domain_error(
                         "first moment of the measure near 0 diverges");
                   acc += (mp - mn) * l.direction;
                 },
                 [&](const IsotropicStable&) {
                   // rotation invariant: contributes the zero vector
                 }},
        c);
  }
  return acc;
}

Eigen::MatrixXd LevyMeasure::covarianceInside(double r) const {
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto& c : components) {
    std::visit(
        Overload{[&](const Atoms& a) {
                   for (const auto& p : a.points)
                     if (p.x.norm() < r) acc += p.w * p.x * p.x.transpose();
                 },
                 [&](const LineDensity& l) {
                   const double m2 = l.pos.momentOn(2, 0.0, r) +
                                     l.neg.momentOn(2, 0.0, r);
                   acc += m2 * l.direction * l.direction.transpose();
                 },
                 [&](const IsotropicStable& s) {
                   // x x^T averaged over the sphere is (|x|^2 / n) I
                   acc += (isotropicSecondMoment(s, dim, r) / dim) *
                          Eigen::MatrixXd::Identity(dim, dim);
                 }},
        c);
  }
  return acc;
}

double LevyMeasure::variationIntegral() const {
  double acc = 0.0;
  for (const auto& c : components) {
    const double v = std::visit(
        Overload{[](const Atoms& a) {
                   double s = 0.0;
                   for (const auto& p : a.points)
                     s += p.w * std::min(1.0, p.x.norm());
                   return s;
                 },
                 [](const LineDensity& l) {
                   const double v1 = l.pos.momentOn(1, 0.0, 1.0) +
                                     l.neg.momentOn(1, 0.0, 1.0);
                   const double v2 = l.pos.momentOn(0, 1.0, kInf) +
                                     l.neg.momentOn(0, 1.0, kInf);
                   return v1 + v2;
                 },
                 [&](const IsotropicStable& s) {
                   double near = 0.0;
                   const double hi1 = std::min(1.0, s.winHi);
                   if (s.winLo < hi1) {
                     if (s.winLo == 0.0 && s.alpha >= 1.0) return kInf;
                     const double p = 1.0 - s.alpha;
                     const double lov =
                         (s.winLo == 0.0) ? 0.0 : std::pow(s.winLo, p);
                     near = s.intensity * sphereSurface(dim) *
                            (std::pow(hi1, p) - lov) / p;
                   }
                   return near + isotropicMassOutside(s, dim, 1.0);
                 }},
        c);
    if (std::isinf(v)) return kInf;
    acc += v;
  }
  return acc;
}

bool isSymmetric(const LevyMeasure& mu) {
  for (const auto& c : mu.components) {
    const bool sym = std::visit(
        Overload{[&](const Atoms& a) {
                   // every atom needs a mirror of equal weight
                   for (const auto& p : a.points) {
                     bool found = false;
                     for (const auto& q : a.points) {
                       if ((p.x + q.x).norm() <= 1e-12 * (1.0 + p.x.norm()) &&
                           std::abs(p.w - q.w) <= 1e-12 * (1.0 + p.w)) {
                         found = true;
                         break;
                       }
                     }
                     if (!found) return false;
                   }
                   return true;
                 },
                 [](const LineDensity& l) {
                   // pos and neg must agree as functions; compare the
                   // representations through probe evaluation
                   const double lo = std::min(l.pos.supportLo(),
                                              l.neg.supportLo());
                   const double hi = std::max(l.pos.supportHi(),
                                              l.neg.supportHi());
                   if (std::isinf(lo) && hi == 0.0) return true;  // empty
                   double a = std::max(lo, 1e-12), b = std::isinf(hi)
                                                           ? 1e6
                                                           : hi;
                   if (a >= b) a = b / 2;
                   for (int i = 0; i <= 64; ++i) {
                     const double r = a * std::pow(b / a, i / 64.0);
                     const double vp = l.pos(r), vn = l.neg(r);
                     if (std::abs(vp - vn) > 1e-10 * (1.0 + std::abs(vp)))
                       return false;
                   }
                   return true;
                 },
                 [](const IsotropicStable&) { return true; }},
        c);
    if (!sym) return false;
  }
  return true;
}

std::vector<std::string> validateMeasure(const LevyMeasure& mu) {
  std::vector<std::string> bad;
  if (mu.dim < 1) bad.push_back("measure dimension must be >= 1");
  int idx = -1;
  for (const auto& c : mu.components) {
    ++idx;
    const std::string tag = "component " + std::to_string(idx) + ": ";
    std::visit(
        Overload{
            [&](const Atoms& a) {
              for (const auto& p : a.points) {
                if (p.x.size() != mu.dim)
                  bad.push_back(tag + "atom dimension mismatch");
                else if (!(p.x.norm() > 0.0))
                  bad.push_back(tag + "atom at the origin is not allowed");
                if (!(p.w > 0.0))
                  bad.push_back(tag + "atom weight must be positive");
              }
            },
            [&](const LineDensity& l) {
              if (l.direction.size() != mu.dim)
                bad.push_back(tag + "direction dimension mismatch");
              else if (std::abs(l.direction.norm() - 1.0) > 1e-9)
                bad.push_back(tag + "direction must be a unit vector");
              for (const auto& m : l.pos.validate())
                bad.push_back(tag + "pos ray: " + m);
              for (const auto& m : l.neg.validate())
                bad.push_back(tag + "neg ray: " + m);
            },
            [&](const IsotropicStable& s) {
              if (!(s.alpha > 0.0 && s.alpha < 2.0))
                bad.push_back(tag + "stable index must lie in (0, 2)");
              if (!(s.intensity > 0.0))
                bad.push_back(tag + "stable intensity must be positive");
              if (!(s.winLo >= 0.0) || !(s.winHi > s.winLo))
                bad.push_back(tag + "stable window must satisfy 0 <= lo < hi");
            }},
        c);
  }
  return bad;
}

}  // namespace levyh
