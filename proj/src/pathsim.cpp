#include "levyh/pathsim.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "levyh/measure.hpp"

namespace levyh {

namespace {

// PSD factor L with L L^T = M and rank columns, by diagonally pivoted
// Cholesky.  Columns of L are scaled columns of the residual, so exact
// structure in M (equal rows for a rank-one diagonal factor) survives
// bitwise into L — the basis of the exact linear-invariant guarantee.
Eigen::MatrixXd psdFactor(const Eigen::MatrixXd& M) {
  const int n = static_cast<int>(M.rows());
  Eigen::MatrixXd R = M;
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  const double tol = 1e-13 * std::max(1.0, R.diagonal().maxCoeff());
  int rank = 0;
  for (int k = 0; k < n; ++k) {
    int p = 0;
    const double piv = R.diagonal().maxCoeff(&p);
    if (!(piv > tol)) break;
    const Eigen::VectorXd col = R.col(p) / std::sqrt(piv);
    L.col(rank++) = col;
    R -= col * col.transpose();
  }
  return L.leftCols(rank);
}

// ∫_{lo<=|x|<hi} x mu(dx); finite for any valid measure and lo > 0
Eigen::VectorXd annulusFirstMoment(const LevyMeasure& mu, double lo,
                                   double hi) {
  Eigen::VectorXd m = Eigen::VectorXd::Zero(mu.dim);
  if (!(hi > lo)) return m;
  for (const auto& comp : mu.components) {
    if (const auto* at = std::get_if<Atoms>(&comp)) {
      for (const auto& p : at->points) {
        const double r = p.x.norm();
        if (r >= lo && r < hi) m += p.w * p.x;
      }
    } else if (const auto* ld = std::get_if<LineDensity>(&comp)) {
      const double diff =
          ld->pos.momentOn(1, lo, hi) - ld->neg.momentOn(1, lo, hi);
      m += diff * ld->direction;
    }
    // isotropic components are symmetric: zero first moment on any annulus
  }
  return m;
}

// one weighted sampling channel for jumps with |x| >= cutoff
struct JumpChannel {
  double mass = 0.0;
  std::function<Eigen::VectorXd(CounterRng&)> sample;
};

Eigen::VectorXd sphereDirection(CounterRng& rng, int n) {
  Eigen::VectorXd g(n);
  do {
    for (int i = 0; i < n; ++i) g(i) = rng.gaussian();
  } while (g.norm() < 1e-12);
  return g / g.norm();
}

// radius with density rho restricted to [cut, inf), by closed-form mass
// bisection (rho decomposes into power/exponential spans)
double sampleRayRadius(const RayDensity& rho, double cut, double mass,
                       CounterRng& rng) {
  const double target = rng.uniform() * mass;
  double hi = std::max(2.0 * cut, 1.0);
  int grow = 0;
  while (rho.momentOn(0, cut, hi) < target && ++grow < 400) hi *= 2.0;
  double lo = cut;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    (rho.momentOn(0, cut, mid) >= target ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<JumpChannel> buildChannels(const LevyMeasure& mu, double cut) {
  std::vector<JumpChannel> ch;
  const int n = mu.dim;
  for (const auto& comp : mu.components) {
    if (const auto* at = std::get_if<Atoms>(&comp)) {
      auto big = std::make_shared<std::vector<Atom>>();
      double mass = 0.0;
      for (const auto& p : at->points)
        if (p.x.norm() >= cut) {
          big->push_back(p);
          mass += p.w;
        }
      if (mass > 0.0)
        ch.push_back({mass, [big, mass](CounterRng& rng) {
                        double u = rng.uniform() * mass;
                        for (const auto& p : *big) {
                          u -= p.w;
                          if (u <= 0.0) return p.x;
                        }
                        return big->back().x;
                      }});
    } else if (const auto* ld = std::get_if<LineDensity>(&comp)) {
      for (int side = 0; side < 2; ++side) {
        const RayDensity& rho = (side == 0) ? ld->pos : ld->neg;
        const double mass = rho.momentOn(0, cut, kInf);
        if (!(mass > 0.0)) continue;
        if (!std::isfinite(mass))
          throw std::invalid_argument(
              "infinite jump intensity above the cutoff; increase "
              "smallJumpCutoff");
        const Eigen::VectorXd dir =
            (side == 0) ? ld->direction : Eigen::VectorXd(-ld->direction);
        ch.push_back({mass, [rho, dir, cut, mass](CounterRng& rng) {
                        return Eigen::VectorXd(
                            sampleRayRadius(rho, cut, mass, rng) * dir);
                      }});
      }
    } else if (const auto* is = std::get_if<IsotropicStable>(&comp)) {
      const double lo = std::max(cut, is->winLo);
      if (!(lo < is->winHi)) continue;
      const double a = is->alpha;
      const double K = is->intensity * sphereSurface(n) / a;
      const double tailLo = std::pow(lo, -a);
      const double tailHi =
          std::isfinite(is->winHi) ? std::pow(is->winHi, -a) : 0.0;
      const double mass = K * (tailLo - tailHi);
      if (!(mass > 0.0)) continue;
      ch.push_back({mass, [tailLo, tailHi, a, n](CounterRng& rng) {
                      const double u = rng.uniform();
                      const double r = std::pow(
                          tailLo - u * (tailLo - tailHi), -1.0 / a);
                      return Eigen::VectorXd(r * sphereDirection(rng, n));
                    }});
    }
  }
  return ch;
}

}  // namespace

Ensemble simulatePaths(const LevyTriplet& t, const SimPlan& plan) {
  if (plan.stepCount < 1)
    throw std::invalid_argument("stepCount must be >= 1");
  if (plan.paths < 1) throw std::invalid_argument("paths must be >= 1");
  if (!(plan.horizon > 0.0))
    throw std::invalid_argument("horizon must be positive");
  if (!(plan.smallJumpCutoff > 0.0) || plan.smallJumpCutoff > 1.0)
    throw std::invalid_argument("smallJumpCutoff must lie in (0, 1]");

  const int n = t.dim();
  const double cut = plan.smallJumpCutoff;

  Ensemble ens;
  ens.plan = plan;
  ens.dim = n;

  const Eigen::MatrixXd sigmaSmall = t.mu.covarianceInside(cut);
  ens.smallJumpVariance = sigmaSmall.trace();
  ens.gaussFactor = psdFactor(t.Q + sigmaSmall);
  ens.driftRate = -t.a - annulusFirstMoment(t.mu, cut, 1.0);

  const auto channels = buildChannels(t.mu, cut);
  double lambda = 0.0;
  for (const auto& c : channels) lambda += c.mass;
  ens.jumpIntensity = lambda;
  if (lambda * plan.horizon > 1e6) {
    std::ostringstream os;
    os << "expected jump count " << lambda * plan.horizon
       << " per path is too large to simulate as events; increase "
          "smallJumpCutoff";
    throw std::invalid_argument(os.str());
  }

  const int steps = plan.stepCount;
  const double h = plan.horizon / steps;
  const double sqrtH = std::sqrt(h);
  const int rank = static_cast<int>(ens.gaussFactor.cols());

  ens.paths.resize(plan.paths);
  const auto worker = [&](int lo, int hi) {
    Eigen::VectorXd xi(rank);
    for (int i = lo; i < hi; ++i) {
      CounterRng rng(plan.seed, static_cast<std::uint64_t>(i));
      SimPath& path = ens.paths[i];

      if (lambda > 0.0) {
        double time = rng.exponential() / lambda;
        while (time <= plan.horizon) {
          double u = rng.uniform() * lambda;
          std::size_t c = 0;
          while (c + 1 < channels.size() && u > channels[c].mass)
            u -= channels[c].mass, ++c;
          path.jumps.push_back({time, channels[c].sample(rng)});
          time += rng.exponential() / lambda;
        }
      }

      path.random.assign(steps + 1, Eigen::VectorXd::Zero(n));
      std::size_t nextJump = 0;
      for (int k = 1; k <= steps; ++k) {
        path.random[k] = path.random[k - 1];
        if (rank > 0) {
          for (int j = 0; j < rank; ++j) xi(j) = rng.gaussian();
          path.random[k] += ens.gaussFactor * (sqrtH * xi);
        }
        const double tk = k * h;
        while (nextJump < path.jumps.size() &&
               path.jumps[nextJump].time <= tk + (k == steps ? 1e-12 : 0.0)) {
          path.random[k] += path.jumps[nextJump].x;
          ++nextJump;
        }
      }
    }
  };

  const int workers = std::max(
      1, std::min<int>(static_cast<int>(std::thread::hardware_concurrency()),
                       8));
  if (workers == 1 || plan.paths < 256) {
    worker(0, plan.paths);
  } else {
    std::vector<std::future<void>> futs;
    const int chunk = (plan.paths + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const int lo = w * chunk;
      const int hi = std::min(plan.paths, lo + chunk);
      if (lo >= hi) break;
      futs.push_back(std::async(std::launch::async, worker, lo, hi));
    }
    for (auto& f : futs) f.get();
  }
  return ens;
}

HittingEstimate hittingEstimate(const Ensemble& ens, const HitTarget& target,
                                double t1, double t2) {
  if (t2 < t1) throw std::invalid_argument("empty time window");
  const int steps = ens.plan.stepCount;
  const double h = ens.stepSize();
  const int k0 = std::max(0, static_cast<int>(std::ceil(t1 / h - 1e-12)));
  const int k1 = std::min(steps, static_cast<int>(std::floor(t2 / h + 1e-12)));

  HittingEstimate est;
  est.paths = static_cast<long>(ens.paths.size());
  est.seed = ens.plan.seed;
  if (k1 < k0) return est;

  const double typicalStep =
      std::sqrt(ens.gaussFactor.squaredNorm() * h +
                std::pow(ens.driftRate.norm() * h, 2));

  long hits = 0;

  if (const auto* hp = std::get_if<Hyperplane>(&target)) {
    const Eigen::VectorXd& nrm = hp->normal;
    if (nrm.size() != ens.dim)
      throw std::invalid_argument("target dimension mismatch");
    // Gaussian variance of the normal component over one step
    const double sigma2 =
        (ens.gaussFactor.transpose() * nrm).squaredNorm() * h;
    for (std::size_t i = 0; i < ens.paths.size(); ++i) {
      const SimPath& p = ens.paths[i];
      CounterRng bridge(ens.plan.seed ^ 0x9E3779B97F4A7C15ull,
                        static_cast<std::uint64_t>(i));
      bool hit = false;
      double prev = nrm.dot(ens.positionAt(p, k0)) - hp->offset;
      if (prev == 0.0) hit = true;
      for (int k = k0 + 1; k <= k1 && !hit; ++k) {
        const double cur = nrm.dot(ens.positionAt(p, k)) - hp->offset;
        if (prev == 0.0 || cur == 0.0 || (prev < 0.0) != (cur < 0.0)) {
          hit = true;
        } else if (sigma2 > 0.0) {
          // same side: within-step Brownian-bridge crossing of the
          // Gaussian part
          const double pCross =
              std::exp(-2.0 * std::abs(prev) * std::abs(cur) / sigma2);
          if (bridge.uniform() < pCross) hit = true;
        }
        prev = cur;
      }
      if (hit) ++hits;
    }
  } else {
    Eigen::MatrixXd proj;  // orthogonal projector for subspace targets
    double eps = 0.0;
    if (const auto* pt = std::get_if<PointTube>(&target)) {
      if (pt->center.size() != ens.dim)
        throw std::invalid_argument("target dimension mismatch");
      eps = pt->eps;
    } else {
      const auto& st = std::get<SubspaceTube>(target);
      if (st.basis.rows() != ens.dim)
        throw std::invalid_argument("target dimension mismatch");
      // orthonormal projector onto the column span
      Eigen::HouseholderQR<Eigen::MatrixXd> qr(st.basis);
      Eigen::MatrixXd Qm =
          qr.householderQ() *
          Eigen::MatrixXd::Identity(
              st.basis.rows(), std::min(st.basis.rows(), st.basis.cols()));
      proj = Qm * Qm.transpose();
      eps = st.eps;
    }
    const auto distance = [&](const Eigen::VectorXd& x) {
      if (const auto* pt = std::get_if<PointTube>(&target))
        return (x - pt->center).norm();
      return (x - proj * x).norm();
    };
    est.discretizationCaveat = eps < 2.0 * typicalStep;
    for (const SimPath& p : ens.paths) {
      for (int k = k0; k <= k1; ++k) {
        if (distance(ens.positionAt(p, k)) <= eps) {
          ++hits;
          break;
        }
      }
    }
  }

  est.hits = hits;
  est.probability =
      static_cast<double>(hits) / static_cast<double>(est.paths);
  est.ci95 = 1.96 * std::sqrt(est.probability * (1.0 - est.probability) /
                              static_cast<double>(est.paths));
  return est;
}

double pathComponent(const Ensemble& ens, const SimPath& p,
                     const Eigen::VectorXd& v, int k) {
  return v.dot(ens.driftRate) * ens.gridTime(k) + v.dot(p.random[k]);
}

std::vector<CfSample> empiricalCF(const Ensemble& ens,
                                  const std::vector<Eigen::VectorXd>& zList) {
  std::vector<CfSample> out;
  const int last = ens.plan.stepCount;
  const double P = static_cast<double>(ens.paths.size());
  for (const auto& z : zList) {
    if (z.size() != ens.dim)
      throw std::invalid_argument("test frequency dimension mismatch");
    std::vector<double> cs_(ens.paths.size()), ss_(ens.paths.size());
    double sc = 0.0, ss = 0.0;
    for (std::size_t i = 0; i < ens.paths.size(); ++i) {
      const double ph = z.dot(ens.positionAt(ens.paths[i], last));
      cs_[i] = std::cos(ph);
      ss_[i] = std::sin(ph);
      sc += cs_[i];
      ss += ss_[i];
    }
    CfSample cs;
    cs.z = z;
    const double mc = sc / P, ms = ss / P;
    cs.value = {mc, ms};
    double vc = 0.0, vs = 0.0;  // centered: robust when the law degenerates
    for (std::size_t i = 0; i < ens.paths.size(); ++i) {
      vc += (cs_[i] - mc) * (cs_[i] - mc);
      vs += (ss_[i] - ms) * (ss_[i] - ms);
    }
    cs.seRe = std::sqrt(vc / P / P);
    cs.seIm = std::sqrt(vs / P / P);
    out.push_back(cs);
  }
  return out;
}

}  // namespace levyh
