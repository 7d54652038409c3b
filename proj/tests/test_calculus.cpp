// Process calculus: sums, product embeddings, subspace projections, and
// big-jump truncation, all pinned by exponent identities.
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <random>

#include "levyh/calculus.hpp"
#include "levyh/exponent.hpp"

using namespace levyh;

namespace {

Eigen::VectorXd vec1(double x) {
  Eigen::VectorXd v(1);
  v << x;
  return v;
}

Eigen::VectorXd vec2(double x, double y) {
  Eigen::VectorXd v(2);
  v << x, y;
  return v;
}

LevyTriplet degenerateGaussian() {
  LevyTriplet t;
  t.a = vec2(1, -1);
  t.Q.resize(2, 2);
  t.Q << 2, 2, 2, 2;
  t.mu.dim = 2;
  return t;
}

RayDensity benignDensity() {
  RayDensity d;
  d.gridR = {0.25, 0.5, 1.0, 2.0};
  d.gridV = {1.2, 0.9, 0.4, 0.1};
  d.outerKind = OuterTail::exponential;
  d.expCoef = 0.1 * std::exp(3.0 * 2.0);
  d.expRate = 3.0;
  return d;
}

RayDensity stableRay(double coef, double alpha) {
  RayDensity d;
  d.inner = {coef, -1.0 - alpha};
  d.innerEnd = 1.0;
  d.outerKind = OuterTail::power;
  d.outerPower = {coef, -1.0 - alpha};
  return d;
}

// atoms + one line density, dimension n, deterministic per seed
LevyTriplet randomJumpTriplet(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  LevyTriplet t;
  t.a.resize(n);
  for (int i = 0; i < n; ++i) t.a(i) = u(rng);
  Eigen::MatrixXd A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = 0.5 * u(rng);
  t.Q = A.transpose() * A;
  t.mu.dim = n;
  Atoms at;
  for (int i = 0; i < 3; ++i) {
    Eigen::VectorXd x(n);
    for (int j = 0; j < n; ++j) x(j) = 2.0 * u(rng);
    if (x.norm() < 1e-3) x(0) += 1.0;
    at.points.push_back({std::move(x), 0.5 + 0.4 * u(rng)});
  }
  t.mu.components.push_back(std::move(at));
  LineDensity l;
  Eigen::VectorXd dir(n);
  for (int j = 0; j < n; ++j) dir(j) = u(rng);
  if (dir.norm() < 1e-3) dir(0) = 1.0;
  l.direction = dir.normalized();
  l.pos = benignDensity();
  l.neg = benignDensity().scaled(0.5);
  t.mu.components.push_back(std::move(l));
  return t;
}

Eigen::MatrixXd randomOrthonormal(int n, int k, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = g(rng);
  return Eigen::HouseholderQR<Eigen::MatrixXd>(M).householderQ() *
         Eigen::MatrixXd::Identity(n, k);
}

}  // namespace

TEST_CASE("independent sums") {
  SUBCASE("zero process is the identity") {
    const LevyTriplet bm = makeBrownian(1);
    LevyTriplet zero;
    zero.a = vec1(0);
    zero.Q = Eigen::MatrixXd::Zero(1, 1);
    zero.mu.dim = 1;
    const LevyTriplet s = sumTriplets(bm, zero);
    CHECK(s.a == bm.a);
    CHECK(s.Q == bm.Q);
    CHECK(s.mu.components.empty());
  }

  SUBCASE("atomic parts concatenate") {
    LevyTriplet t1, t2;
    t1.a = vec1(0.5);
    t1.Q = Eigen::MatrixXd::Identity(1, 1);
    t1.mu.dim = 1;
    Atoms a1;
    a1.points.push_back({vec1(1.0), 2.0});
    t1.mu.components.push_back(a1);
    t2 = t1;
    const LevyTriplet s = sumTriplets(t1, t2);
    CHECK(s.a(0) == 1.0);
    CHECK(s.Q(0, 0) == 2.0);
    CHECK(s.mu.components.size() == 2);
    CHECK(s.mu.totalMass() == doctest::Approx(4.0));
  }

  SUBCASE("dimension mismatch throws") {
    CHECK_THROWS(sumTriplets(makeBrownian(1), makeBrownian(2)));
  }

  SUBCASE("exponent additivity") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    const LevyTriplet t1 = randomJumpTriplet(2, rng);
    const LevyTriplet t2 = randomJumpTriplet(2, rng);
    const LevyTriplet s = sumTriplets(t1, t2);
    for (int i = 0; i < 50; ++i) {
      const Eigen::VectorXd z = vec2(u(rng), u(rng));
      const auto lhs = evalPsi(s, z);
      const auto rhs = evalPsi(t1, z) + evalPsi(t2, z);
      CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(rhs)));
    }
  }
}

TEST_CASE("product embeddings") {
  SUBCASE("two Brownian motions give a planar one") {
    const LevyTriplet p = productEmbed(makeBrownian(1), makeBrownian(1));
    CHECK(p.dim() == 2);
    CHECK(p.Q == Eigen::MatrixXd::Identity(2, 2));
    const auto psi = evalPsi(p, vec2(1.0, 3.0));
    CHECK(psi.real() == doctest::Approx((1.0 + 9.0) / 2.0));
  }

  SUBCASE("atoms embed with zero padding") {
    LevyTriplet cp;
    cp.a = vec1(0);
    cp.Q = Eigen::MatrixXd::Zero(1, 1);
    cp.mu.dim = 1;
    Atoms at;
    at.points.push_back({vec1(1.0), 1.0});
    cp.mu.components.push_back(at);
    const LevyTriplet p = productEmbed(makeBrownian(2), cp);
    REQUIRE(p.mu.components.size() == 1);
    const auto& e = std::get<Atoms>(p.mu.components[0]);
    CHECK(e.points[0].x(0) == 0.0);
    CHECK(e.points[0].x(1) == 0.0);
    CHECK(e.points[0].x(2) == 1.0);
  }

  SUBCASE("one-dimensional isotropic factors embed as line densities") {
    LevyTriplet st;
    st.a = vec1(0);
    st.Q = Eigen::MatrixXd::Zero(1, 1);
    st.mu.dim = 1;
    st.mu.components.push_back(IsotropicStable{0.7, 0.3, 0.0, kInf});
    const LevyTriplet p = productEmbed(makeBrownian(1), st);
    REQUIRE(p.mu.components.size() == 1);
    const auto& l = std::get<LineDensity>(p.mu.components[0]);
    CHECK(l.direction(1) == 1.0);
    // exponent additivity survives the conversion
    const auto lhs = evalPsi(p, vec2(0.4, 1.3));
    const auto rhs =
        evalPsi(makeBrownian(1), vec1(0.4)) + evalPsi(st, vec1(1.3));
    CHECK(std::abs(lhs - rhs) <= 1e-9 * (1.0 + std::abs(rhs)));
  }

  SUBCASE("exponent splits over the factors") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    const LevyTriplet t1 = randomJumpTriplet(2, rng);
    const LevyTriplet t2 = randomJumpTriplet(1, rng);
    const LevyTriplet p = productEmbed(t1, t2);
    for (int i = 0; i < 50; ++i) {
      const Eigen::VectorXd x = vec2(u(rng), u(rng));
      const Eigen::VectorXd y = vec1(u(rng));
      Eigen::VectorXd z(3);
      z << x, y;
      const auto lhs = evalPsi(p, z);
      const auto rhs = evalPsi(t1, x) + evalPsi(t2, y);
      CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(rhs)));
    }
  }
}

TEST_CASE("subspace projections") {
  SUBCASE("degenerate Gaussian onto its null direction is uniform motion") {
    Eigen::MatrixXd V(2, 1);
    V << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
    const auto pr = projectTriplet(degenerateGaussian(), V);
    CHECK(pr.projectedTriplet.dim() == 1);
    CHECK(pr.aPrime(0) == doctest::Approx(std::sqrt(2.0)));
    CHECK(std::abs(pr.projectedTriplet.Q(0, 0)) <= 1e-12);
    CHECK(pr.projectedTriplet.mu.components.empty());
    CHECK(validateTriplet(pr.projectedTriplet).ok);
  }

  SUBCASE("degenerate Gaussian onto the first axis keeps diffusion") {
    Eigen::MatrixXd V(2, 1);
    V << 1.0, 0.0;
    const auto pr = projectTriplet(degenerateGaussian(), V);
    CHECK(pr.aPrime(0) == doctest::Approx(1.0));
    CHECK(pr.projectedTriplet.Q(0, 0) == doctest::Approx(2.0));
  }

  SUBCASE("indicator-window correction for a single atom") {
    LevyTriplet t;
    t.a = vec2(0, 0);
    t.Q = Eigen::MatrixXd::Zero(2, 2);
    t.mu.dim = 2;
    Atoms at;
    at.points.push_back({vec2(0.5, 2.0), 1.0});
    t.mu.components.push_back(at);
    Eigen::MatrixXd V(2, 1);
    V << 1.0, 0.0;
    const auto pr = projectTriplet(t, V);
    // the source jump is long (|x| ~ 2.06), the image is short (0.5), so the
    // image gains compensation and the linear term pays for it
    CHECK(pr.aPrime(0) == doctest::Approx(-0.5));
    const auto& img = std::get<Atoms>(pr.projectedTriplet.mu.components[0]);
    CHECK(img.points[0].x(0) == doctest::Approx(0.5));
    CHECK(img.points[0].w == 1.0);
    CHECK(pr.droppedMass == 0.0);
  }

  SUBCASE("jumps orthogonal to the subspace are dropped with their mass") {
    LevyTriplet t;
    t.a = vec2(0, 0);
    t.Q = Eigen::MatrixXd::Zero(2, 2);
    t.mu.dim = 2;
    Atoms at;
    at.points.push_back({vec2(0.0, 1.5), 0.7});
    at.points.push_back({vec2(1.0, 0.0), 0.2});
    t.mu.components.push_back(at);
    Eigen::MatrixXd V(2, 1);
    V << 1.0, 0.0;
    const auto pr = projectTriplet(t, V);
    CHECK(pr.droppedMass == doctest::Approx(0.7));
    CHECK(pr.projectedTriplet.mu.totalMass() == doctest::Approx(0.2));
  }

  SUBCASE("isotropic marginal keeps the index, rescales the intensity") {
    LevyTriplet t;
    t.a = vec2(0, 0);
    t.Q = Eigen::MatrixXd::Zero(2, 2);
    t.mu.dim = 2;
    t.mu.components.push_back(IsotropicStable{1.3, 0.8, 0.0, kInf});
    Eigen::MatrixXd V(2, 1);
    V << 0.0, 1.0;
    const auto pr = projectTriplet(t, V);
    const auto& img =
        std::get<IsotropicStable>(pr.projectedTriplet.mu.components[0]);
    CHECK(img.alpha == 1.3);
    CHECK(img.intensity ==
          doctest::Approx(0.8 * cPrimeIsotropic(1.3, 2) /
                          cPrimeIsotropic(1.3, 1)));
    // exponent agreement on the subspace
    for (double w : {0.5, 2.0}) {
      const auto lhs = evalPsi(pr.projectedTriplet, vec1(w));
      const auto rhs = evalPsi(t, vec2(0.0, w));
      CHECK(std::abs(lhs - rhs) <= 1e-9 * (1.0 + std::abs(rhs)));
    }
  }

  SUBCASE("non-orthonormal basis throws") {
    Eigen::MatrixXd V(2, 1);
    V << 1.0, 1.0;
    CHECK_THROWS(projectTriplet(degenerateGaussian(), V));
  }

  SUBCASE("exponent oracle on random subspaces") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int trial = 0; trial < 4; ++trial) {
      const int n = 3;
      const int k = 1 + static_cast<int>(rng() % 2);
      const LevyTriplet t = randomJumpTriplet(n, rng);
      const Eigen::MatrixXd V = randomOrthonormal(n, k, rng);
      const auto pr = projectTriplet(t, V);
      CHECK(validateTriplet(pr.projectedTriplet).ok);
      CHECK((pr.projectedTriplet.Q - V.transpose() * t.Q * V)
                .cwiseAbs()
                .maxCoeff() <= 1e-12);
      for (int i = 0; i < 50; ++i) {
        Eigen::VectorXd w(k);
        for (int j = 0; j < k; ++j) w(j) = u(rng);
        const Eigen::VectorXd z = V * w;  // a point of the subspace
        const auto lhs = evalPsi(pr.projectedTriplet, w);
        const auto rhs = evalPsi(t, z);
        CHECK(std::abs(lhs - rhs) <= 1e-8 * (1.0 + std::abs(rhs)));
      }
    }
  }

  SUBCASE("projecting twice equals projecting once") {
    std::mt19937_64 rng(44);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    const LevyTriplet t = randomJumpTriplet(3, rng);
    const Eigen::MatrixXd VA = randomOrthonormal(3, 2, rng);
    const Eigen::MatrixXd VB = randomOrthonormal(2, 1, rng);
    const auto two = projectTriplet(projectTriplet(t, VA).projectedTriplet,
                                    VB);
    const auto one = projectTriplet(t, VA * VB);
    CHECK((two.projectedTriplet.a - one.projectedTriplet.a)
              .cwiseAbs()
              .maxCoeff() <= 1e-10);
    CHECK((two.projectedTriplet.Q - one.projectedTriplet.Q)
              .cwiseAbs()
              .maxCoeff() <= 1e-10);
    for (int i = 0; i < 25; ++i) {
      const Eigen::VectorXd w = vec1(u(rng));
      const auto lhs = evalPsi(two.projectedTriplet, w);
      const auto rhs = evalPsi(one.projectedTriplet, w);
      CHECK(std::abs(lhs - rhs) <= 1e-8 * (1.0 + std::abs(rhs)));
    }
  }
}

TEST_CASE("big-jump truncation") {
  SUBCASE("full removal of an atomic measure") {
    LevyTriplet t;
    t.a = vec1(0);
    t.Q = Eigen::MatrixXd::Identity(1, 1);
    t.mu.dim = 1;
    Atoms at;
    at.points.push_back({vec1(0.5), 2.0});
    at.points.push_back({vec1(3.0), 1.0});
    t.mu.components.push_back(at);
    const LevyTriplet r = truncateBigJumps(t, t.mu);
    CHECK(r.mu.components.empty());
    CHECK(r.Q == t.Q);
    // a' = a + sum of w x over |x| < 1
    CHECK(r.a(0) == doctest::Approx(1.0));
  }

  SUBCASE("empty truncation is the identity") {
    const LevyTriplet t = makeBrownian(2);
    LevyMeasure none;
    none.dim = 2;
    const LevyTriplet r = truncateBigJumps(t, none);
    CHECK(r.a == t.a);
    CHECK(r.mu.components.empty());
  }

  SUBCASE("small-atom removal shifts the linear term") {
    LevyTriplet t;
    t.a = vec1(0);
    t.Q = Eigen::MatrixXd::Zero(1, 1);
    t.mu.dim = 1;
    Atoms at;
    at.points.push_back({vec1(0.5), 2.0});
    t.mu.components.push_back(at);
    const LevyTriplet r = truncateBigJumps(t, t.mu);
    CHECK(r.a(0) == doctest::Approx(1.0));
  }

  SUBCASE("exponent identity for atomic removals") {
    std::mt19937_64 rng(45);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    const LevyTriplet t = randomJumpTriplet(2, rng);
    // remove half the weight of every atom
    LevyMeasure mu1;
    mu1.dim = 2;
    Atoms half;
    for (const auto& p : std::get<Atoms>(t.mu.components[0]).points)
      half.points.push_back({p.x, 0.5 * p.w});
    mu1.components.push_back(half);
    const LevyTriplet r = truncateBigJumps(t, mu1);
    for (int i = 0; i < 50; ++i) {
      const Eigen::VectorXd z = vec2(u(rng), u(rng));
      std::complex<double> removed{0.0, 0.0};
      for (const auto& p : half.points) {
        const double zx = z.dot(p.x);
        removed += p.w * (std::complex<double>{1.0, 0.0} -
                          std::exp(std::complex<double>{0.0, zx}));
      }
      const auto diff = evalPsi(t, z) - evalPsi(r, z);
      CHECK(std::abs(diff - removed) <= 1e-12 * (1.0 + std::abs(removed)));
    }
  }

  SUBCASE("windowed multiple of a line density") {
    LevyTriplet t;
    t.a = vec1(0);
    t.Q = Eigen::MatrixXd::Zero(1, 1);
    t.mu.dim = 1;
    LineDensity l;
    l.direction = vec1(1);
    l.pos = stableRay(1.0, 0.8);
    t.mu.components.push_back(l);
    LevyMeasure mu1;
    mu1.dim = 1;
    LineDensity part;
    part.direction = vec1(1);
    part.pos = stableRay(1.0, 0.8).scaled(0.25).windowed(1.0, 3.0);
    mu1.components.push_back(part);
    const LevyTriplet r = truncateBigJumps(t, mu1);
    // masses: removed 0.25 of the [1,3) window
    const double removed =
        0.25 * l.pos.momentOn(0, 1.0, 3.0);
    CHECK(t.mu.totalMass() == kInf);
    CHECK(r.mu.massOutside(1.0) ==
          doctest::Approx(t.mu.massOutside(1.0) - removed));
    // exponent identity against the characteristic function of mu1
    for (double z : {0.4, 2.0}) {
      const auto diff = evalPsi(t, vec1(z)) - evalPsi(r, vec1(z));
      const auto want =
          mu1.totalMass() - measureCF(mu1, vec1(z));
      CHECK(std::abs(diff - want) <= 1e-8 * (1.0 + std::abs(want)));
    }
  }

  SUBCASE("domination failures throw") {
    LevyTriplet t;
    t.a = vec1(0);
    t.Q = Eigen::MatrixXd::Zero(1, 1);
    t.mu.dim = 1;
    Atoms at;
    at.points.push_back({vec1(0.5), 1.0});
    t.mu.components.push_back(at);
    LevyMeasure tooBig;
    tooBig.dim = 1;
    Atoms b;
    b.points.push_back({vec1(0.5), 2.0});
    tooBig.components.push_back(b);
    CHECK_THROWS(truncateBigJumps(t, tooBig));
    LevyMeasure elsewhere;
    elsewhere.dim = 1;
    Atoms e;
    e.points.push_back({vec1(0.7), 0.1});
    elsewhere.components.push_back(e);
    CHECK_THROWS(truncateBigJumps(t, elsewhere));
    // infinite mu1
    LevyMeasure inf1;
    inf1.dim = 1;
    LineDensity l;
    l.direction = vec1(1);
    l.pos = stableRay(1.0, 0.8);
    inf1.components.push_back(l);
    CHECK_THROWS(truncateBigJumps(t, inf1));
  }
}

TEST_CASE("measure restriction") {
  SUBCASE("atoms filter exactly") {
    LevyMeasure mu;
    mu.dim = 1;
    Atoms at;
    at.points.push_back({vec1(0.5), 1.0});
    at.points.push_back({vec1(2.0), 1.0});
    mu.components.push_back(at);
    const LevyMeasure in = restrictMeasure(mu, RestrictRegion::insideRadius(1));
    CHECK(in.totalMass() == doctest::Approx(1.0));
    CHECK(std::get<Atoms>(in.components[0]).points[0].x(0) == 0.5);
    const LevyMeasure outp =
        restrictMeasure(mu, RestrictRegion::outsideRadius(1));
    CHECK(std::get<Atoms>(outp.components[0]).points[0].x(0) == 2.0);
  }

  SUBCASE("off-range restriction with a zero projector is empty") {
    LevyMeasure mu;
    mu.dim = 2;
    Atoms at;
    at.points.push_back({vec2(1, 1), 3.0});
    at.points.push_back({vec2(1, 0), 2.0});
    mu.components.push_back(at);
    const LevyMeasure none =
        restrictMeasure(mu, RestrictRegion::offRangeOf(
                                Eigen::MatrixXd::Zero(2, 2)));
    CHECK(none.totalMass() == 0.0);
    // anti-diagonal projector keeps only the skewed atom
    Eigen::MatrixXd P2(2, 2);
    P2 << 0.5, -0.5, -0.5, 0.5;
    const LevyMeasure off = restrictMeasure(mu, RestrictRegion::offRangeOf(P2));
    CHECK(off.totalMass() == doctest::Approx(2.0));
  }

  SUBCASE("line densities are windowed") {
    LevyMeasure mu;
    mu.dim = 1;
    LineDensity l;
    l.direction = vec1(1);
    l.pos = stableRay(1.0, 0.5);
    mu.components.push_back(l);
    const LevyMeasure outp =
        restrictMeasure(mu, RestrictRegion::outsideRadius(2.0));
    CHECK(outp.totalMass() == doctest::Approx(mu.massOutside(2.0)));
    const LevyMeasure in =
        restrictMeasure(mu, RestrictRegion::insideRadius(2.0));
    CHECK(in.massOutside(0.5) ==
          doctest::Approx(mu.massOutside(0.5) - mu.massOutside(2.0)));
  }

  SUBCASE("one-dimensional isotropic converts to an exact line density") {
    LevyMeasure mu;
    mu.dim = 1;
    mu.components.push_back(IsotropicStable{0.5, 1.0, 0.0, kInf});
    const LevyMeasure outp =
        restrictMeasure(mu, RestrictRegion::outsideRadius(1.0));
    REQUIRE(outp.components.size() == 1);
    CHECK(std::holds_alternative<LineDensity>(outp.components[0]));
    CHECK(outp.totalMass() == doctest::Approx(mu.massOutside(1.0)));
  }

  SUBCASE("higher-dimensional isotropic keeps the parametric window") {
    LevyMeasure mu;
    mu.dim = 2;
    mu.components.push_back(IsotropicStable{0.5, 1.0, 0.0, kInf});
    const LevyMeasure outp =
        restrictMeasure(mu, RestrictRegion::outsideRadius(1.0));
    const auto& st = std::get<IsotropicStable>(outp.components[0]);
    CHECK(st.winLo == 1.0);
    CHECK(outp.totalMass() == doctest::Approx(mu.massOutside(1.0)));
  }
}
