#include "levyh/decide.hpp"

#include <cmath>
#include <complex>
#include <future>
#include <stdexcept>
#include <utility>

#include "levyh/calculus.hpp"
#include "levyh/exponent.hpp"
#include "levyh/spectral.hpp"

namespace levyh {

const char* kindName(DecompositionKind k) {
  switch (k) {
    case DecompositionKind::sum: return "sum";
    case DecompositionKind::product: return "product";
    default: return "timeChange";
  }
}

namespace {

Certainty combine(Certainty a, Certainty b) {
  return (a == Certainty::exact && b == Certainty::exact) ? Certainty::exact
                                                          : Certainty::numeric;
}

TraceEntry silentEntry(std::string rule, std::string theorem,
                       std::string msg) {
  TraceEntry e{std::move(rule), std::move(theorem), {}};
  e.result.notes = std::move(msg);
  return e;
}

Eigen::VectorXd patternVec(int m, int phase) {
  static const double vals[] = {0.7, -1.3, 0.4, 2.1, -0.6, 1.7, -2.3, 0.9};
  Eigen::VectorXd z(m);
  for (int i = 0; i < m; ++i) z(i) = vals[(i + phase) % 8];
  return z;
}

// |Im psi_2| <= c (1 + Re psi_1 + Re psi_2): sample the ratio on a
// log-radial grid and require a non-growing trend across the last decades.
bool imagRatioBounded(const LevyTriplet& t1, const LevyTriplet& t2,
                      double& supOut) {
  const int n = t1.dim();
  const QuadOptions qo{1e-8};
  std::vector<Eigen::VectorXd> dirs;
  for (int i = 0; i < n; ++i) dirs.push_back(Eigen::VectorXd::Unit(n, i));
  if (n > 1)
    dirs.push_back(Eigen::VectorXd::Ones(n) / std::sqrt(double(n)));
  const int perDecade = 6, decades = 8;
  const int steps = perDecade * decades;
  std::vector<double> prof(steps + 1, 0.0);
  double sup = 0.0;
  for (int i = 0; i <= steps; ++i) {
    const double r = 1e-2 * std::pow(10.0, double(i) / perDecade);
    double m = 0.0;
    for (const auto& d : dirs) {
      const std::complex<double> p1 = evalPsi(t1, r * d, qo);
      const std::complex<double> p2 = evalPsi(t2, r * d, qo);
      m = std::max(m, std::abs(p2.imag()) / (1.0 + p1.real() + p2.real()));
    }
    prof[i] = m;
    sup = std::max(sup, m);
  }
  supOut = sup;
  if (sup <= 1e-10) return true;
  auto decadeMax = [&](int firstBack) {
    double m = 0.0;
    for (int i = 0; i < perDecade; ++i)
      m = std::max(m, prof[steps - firstBack - i]);
    return m;
  };
  const double mLast = decadeMax(0), mPrev = decadeMax(perDecade);
  return mPrev > 0.0 && mLast / mPrev <= 1.05;
}

struct Pipeline {
  const ProcessSpec& spec;
  const DecideOptions& opt;
  Verdict v;

  bool done() const { return v.status != CheckStatus::unknown; }
  void record(TraceEntry e) { v.trace.push_back(std::move(e)); }
  void conclude(TraceEntry e) {
    v.status = e.result.status;
    v.certainty = e.result.certainty;
    v.decidedBy = e.rule;
    v.trace.push_back(std::move(e));
  }
};

void runDecomposition(Pipeline& p);

}  // namespace

Verdict decideH(const ProcessSpec& spec, const DecideOptions& opt) {
  Pipeline p{spec, opt, {}};
  const LevyTriplet& t = spec.triplet;
  const int n = t.dim();

  // 1. compound Poisson
  {
    CheckResult cp = isCompoundPoisson(t);
    TraceEntry e{"compound-poisson", "compound-poisson", cp};
    if (cp.status == CheckStatus::holds) {
      e.result.notes += "; hits points with positive probability";
      p.conclude(std::move(e));
      return p.v;
    }
    e.result.status = CheckStatus::unknown;
    e.result.notes = "not compound Poisson (" + cp.notes + ")";
    p.record(std::move(e));
  }

  // 2. nondegenerate Gaussian part
  const SpectralData sp = spectralDecompose(t.Q, opt.rankThreshold);
  if (sp.rank == n && n > 0) {
    TraceEntry e{"full-rank-gaussian", "kanda-forst", {}};
    e.result.status = CheckStatus::holds;
    e.result.certainty = Certainty::exact;
    e.result.evidence["lambdaMin"] = sp.eigenvalues(n - 1);
    e.result.notes = "nondegenerate Gaussian part: Re psi has a quadratic "
                     "lower bound, bounded-ratio criterion applies";
    p.conclude(std::move(e));
    return p.v;
  }
  p.record(silentEntry("full-rank-gaussian", "kanda-forst",
                       "Gaussian rank " + std::to_string(sp.rank) + " of " +
                           std::to_string(n) + ": criterion silent"));

  // 3. condition (S) equivalence when the off-range jump mass is finite
  {
    CheckResult cs = conditionS(t, opt.rankThreshold);
    TraceEntry e{"condition-s", "condition-s-equivalence", cs};
    if (cs.status != CheckStatus::unknown) {
      p.conclude(std::move(e));
      return p.v;
    }
    p.record(std::move(e));
  }

  // 4. one-dimensional subordinator necessity / special class
  std::optional<SubordinatorReport> subRep;
  if (n == 1) {
    subRep = subordinatorDiagnostics(t);
    if (subRep->isSubordinator) {
      if (subRep->drift > 0.0) {
        p.conclude(TraceEntry{"subordinator-drift", "zero-drift-necessity",
                              subRep->driftNecessity});
        return p.v;
      }
      if (spec.assertions.isSpecialSubordinator) {
        TraceEntry e{"special-subordinator", "special-subordinator", {}};
        e.result.status = CheckStatus::holds;
        e.result.certainty = Certainty::exact;
        e.result.evidence["drift"] = 0.0;
        e.result.notes = "zero-drift subordinator asserted special: "
                         "potential-theoretic characterization applies";
        p.conclude(std::move(e));
        return p.v;
      }
      p.record(TraceEntry{"subordinator-drift", "zero-drift-necessity",
                          subRep->driftNecessity});
    }
  }

  // 5. zero-drift necessity for the off-range projection
  if (sp.rank < n) {
    TraceEntry e{"projected-drift", "zero-drift-necessity", {}};
    e.result.certainty = Certainty::exact;
    try {
      LevyTriplet proj = t;
      if (sp.rank > 0)
        proj = projectTriplet(t, offRangeBasis(sp)).projectedTriplet;
      if ((proj.Q.size() == 0 || proj.Q.cwiseAbs().maxCoeff() <= 1e-12) &&
          proj.mu.finiteFirstMomentInside(1.0)) {
        const Eigen::VectorXd comp = proj.mu.firstMomentInside(1.0);
        const Eigen::VectorXd b0 = -proj.a - comp;
        e.result.evidence["projectedDriftNorm"] = b0.norm();
        if (b0.norm() > 1e-9 * (1.0 + proj.a.norm() + comp.norm())) {
          e.result.status = CheckStatus::fails;
          e.result.notes = "off-range projection has finite variation and "
                           "nonzero pathwise drift";
          p.conclude(std::move(e));
          return p.v;
        }
        e.result.notes = "off-range projection has zero pathwise drift: "
                         "necessity silent";
      } else {
        e.result.notes = "off-range projection has infinite variation: "
                         "necessity silent";
      }
    } catch (const std::exception& ex) {
      e.result.certainty = Certainty::numeric;
      e.result.notes = std::string("projection unrepresentable: ") +
                       ex.what();
    }
    p.record(std::move(e));
  }

  // 6 + 7. numeric sufficient criteria (holds-only from here on)
  const auto policy =
      opt.concurrent ? std::launch::async : std::launch::deferred;
  auto guarded = [](auto fn) {
    return [fn = std::move(fn)]() -> CheckResult {
      try {
        return fn();
      } catch (const std::exception& ex) {
        CheckResult r;
        r.notes = std::string("check not run: ") + ex.what();
        return r;
      }
    };
  };

  if (n == 1) {
    // quasi-stable envelope (already computed, exact)
    if (subRep && subRep->isSubordinator) {
      TraceEntry e{"quasi-stable", "locally-quasi-stable",
                   subRep->quasiStableEnvelope};
      if (e.result.status == CheckStatus::holds) {
        p.conclude(std::move(e));
        return p.v;
      }
      e.result.status = CheckStatus::unknown;
      p.record(std::move(e));
    }

    const bool qZero = t.Q.cwiseAbs().maxCoeff() <= 1e-12;
    std::future<CheckResult> domFut, sjLogFut, sjLLFut, grReFut, grAbsFut;
    if (qZero)
      domFut = std::async(policy, guarded([&t] {
                            return oneDimDominance(t, DominanceOptions{});
                          }));
    sjLogFut = std::async(policy, guarded([&t] {
                            return smallJumpLiminf(
                                t, SmallJumpWeight::logWeight, EpsGrid{});
                          }));
    sjLLFut = std::async(policy, guarded([&t] {
                           return smallJumpLiminf(
                               t, SmallJumpWeight::logLogWeight, EpsGrid{});
                         }));
    grReFut = std::async(policy, guarded([&t] {
                           return exponentGrowthLiminf(
                               t, GrowthMode::reOverZlog, 0.1, RadialGrid{});
                         }));
    const double gamma = opt.gammaAbsGrowth;
    grAbsFut = std::async(policy, guarded([&t, gamma] {
                            return exponentGrowthLiminf(
                                t, GrowthMode::absOverZlogPow, gamma,
                                RadialGrid{});
                          }));

    // deterministic merge order, independent of completion order
    std::vector<TraceEntry> merged;
    if (qZero)
      merged.push_back(
          TraceEntry{"jump-dominance", "jump-dominance", domFut.get()});
    merged.push_back(TraceEntry{"small-jump-liminf", "small-jump-growth",
                                sjLogFut.get()});
    merged.push_back(TraceEntry{"small-jump-liminf-loglog",
                                "small-jump-growth", sjLLFut.get()});
    merged.push_back(TraceEntry{"exponent-growth-re", "exponent-growth",
                                grReFut.get()});
    TraceEntry grAbs{"exponent-growth-abs", "exponent-growth",
                     grAbsFut.get()};
    if (grAbs.result.status == CheckStatus::holds &&
        !spec.assertions.hasResolventDensities) {
      grAbs.result.status = CheckStatus::unknown;
      grAbs.result.notes += "; assert hasResolventDensities to conclude";
    }
    merged.push_back(std::move(grAbs));

    for (auto& e : merged) {
      if (!p.done() && e.result.status == CheckStatus::holds)
        p.conclude(std::move(e));
      else
        p.record(std::move(e));
    }
    if (p.done()) return p.v;
  }

  // 7. bounded-ratio criteria under density assertions
  {
    const KfRatioResult kf = kfRatioProfile(t, KfOptions{});
    const bool bounded = kf.growth == RatioGrowth::bounded;
    const bool logG = kf.growth == RatioGrowth::logGrowth;
    if (bounded && spec.assertions.hasBoundedContinuousTransitionDensities) {
      TraceEntry e{"kf-ratio", "kanda-forst", kf.check};
      e.result.notes += "; bounded continuous transition densities asserted";
      p.conclude(std::move(e));
      return p.v;
    }
    if ((bounded || logG) && spec.assertions.hasResolventDensities) {
      TraceEntry e{"rao-growth", "rao", kf.check};
      e.result.notes += std::string("; resolvent densities asserted, |1+psi|"
                                    " <= A f(A) with f = ") +
                        (bounded ? "const" : "log");
      p.conclude(std::move(e));
      return p.v;
    }
    TraceEntry e{"kf-ratio", "kanda-forst", kf.check};
    e.result.status = CheckStatus::unknown;
    if (bounded || logG)
      e.result.notes += "; no density assertion available to conclude";
    p.record(std::move(e));
  }

  // 8. declared decomposition rules
  if (opt.decomposition) runDecomposition(p);
  if (p.done()) return p.v;

  // 9. informational classification for open problem classes
  if (subRep && subRep->typeEnvelope.status == CheckStatus::holds) {
    TraceEntry e{"type-classification", "stable-envelope-class",
                 subRep->typeEnvelope};
    e.result.status = CheckStatus::unknown;
    e.result.notes += "; membership alone does not decide (H)";
    p.record(std::move(e));
  }

  return p.v;
}

namespace {

void runDecomposition(Pipeline& p) {
  const DecompositionDecl& d = *p.opt.decomposition;
  const LevyTriplet& t = p.spec.triplet;
  const int n = t.dim();
  const int n1 = d.part1.triplet.dim();
  const int n2 = d.part2.triplet.dim();
  DecideOptions sub = p.opt;
  sub.decomposition.reset();

  // cheap exponent-consistency test of the declared parts
  const QuadOptions qo{1e-10};
  std::string why;
  try {
    if (d.kind == DecompositionKind::sum) {
      if (n1 != n || n2 != n) {
        why = "part dimension differs from the parent";
      } else {
        for (int k = 0; k < 3 && why.empty(); ++k) {
          const Eigen::VectorXd z = patternVec(n, k);
          const auto lhs = evalPsi(t, z, qo);
          const auto rhs =
              evalPsi(d.part1.triplet, z, qo) + evalPsi(d.part2.triplet, z, qo);
          if (std::abs(lhs - rhs) > 1e-6 * (1.0 + std::abs(lhs)))
            why = "exponent of the declared sum does not match the parent";
        }
      }
    } else if (d.kind == DecompositionKind::product) {
      if (n1 + n2 != n) {
        why = "part dimensions do not add up to the parent";
      } else {
        for (int k = 0; k < 3 && why.empty(); ++k) {
          const Eigen::VectorXd z = patternVec(n, k);
          const auto lhs = evalPsi(t, z, qo);
          const auto rhs = evalPsi(d.part1.triplet, z.head(n1), qo) +
                           evalPsi(d.part2.triplet, z.tail(n2), qo);
          if (std::abs(lhs - rhs) > 1e-6 * (1.0 + std::abs(lhs)))
            why = "exponent of the declared product does not match the parent";
        }
      }
    } else {
      if (n1 != n) why = "base process dimension differs from the parent";
      if (n2 != 1) why = "clock must be one-dimensional";
    }
  } catch (const std::exception& ex) {
    why = std::string("consistency test failed to run: ") + ex.what();
  }
  {
    TraceEntry e{"decomposition-consistency", "exponent-consistency", {}};
    e.result.notes =
        why.empty()
            ? std::string("declared ") + kindName(d.kind) +
                  " decomposition consistent with the exponent"
            : why + "; decomposition rules skipped";
    p.record(std::move(e));
    if (!why.empty()) return;
  }

  try {
    if (d.kind == DecompositionKind::sum ||
        d.kind == DecompositionKind::product) {
      const bool isSum = d.kind == DecompositionKind::sum;
      const char* ruleCp = isSum ? "sum-cp-part" : "product-cp-part";
      const char* thmCp =
          isSum ? "cp-sum-stability" : "cp-product-stability";

      // one part compound Poisson, the other satisfying (H)
      const std::pair<const ProcessSpec*, const ProcessSpec*> orders[2] = {
          {&d.part1, &d.part2}, {&d.part2, &d.part1}};
      for (const auto& [main, other] : orders) {
        const CheckResult cp = isCompoundPoisson(other->triplet);
        if (cp.status != CheckStatus::holds) continue;
        const Verdict vm = decideH(*main, sub);
        if (vm.status == CheckStatus::holds) {
          TraceEntry e{ruleCp, thmCp, {}};
          e.result.status = CheckStatus::holds;
          e.result.certainty = combine(cp.certainty, vm.certainty);
          e.result.notes = "one part satisfies (H) (via rule '" +
                           vm.decidedBy +
                           "') and the other is compound Poisson";
          p.conclude(std::move(e));
          return;
        }
      }

      // both parts satisfy condition (S)
      const CheckResult s1 = conditionS(d.part1.triplet, p.opt.rankThreshold);
      const CheckResult s2 = conditionS(d.part2.triplet, p.opt.rankThreshold);
      if (s1.status == CheckStatus::holds &&
          s2.status == CheckStatus::holds) {
        TraceEntry e{isSum ? "sum-condition-s" : "product-condition-s",
                     isSum ? "condition-s-sum" : "condition-s-product",
                     {}};
        e.result.status = CheckStatus::holds;
        e.result.certainty = combine(s1.certainty, s2.certainty);
        e.result.evidence["residualNorm1"] = s1.evidence.at("residualNorm");
        e.result.evidence["residualNorm2"] = s2.evidence.at("residualNorm");
        e.result.notes = "both parts satisfy condition (S), which is "
                         "preserved under this composition";
        p.conclude(std::move(e));
        return;
      }

      // resolvent-density sum rule
      if (isSum) {
        for (const auto& [main, other] : orders) {
          if (!main->assertions.hasResolventDensities) continue;
          if (!d.oneEnergyComparable) continue;
          const Verdict vm = decideH(*main, sub);
          if (vm.status != CheckStatus::holds) continue;
          double sup = 0.0;
          if (!imagRatioBounded(main->triplet, other->triplet, sup))
            continue;
          TraceEntry e{"sum-resolvent-density", "resolvent-density-sum", {}};
          e.result.status = CheckStatus::holds;
          e.result.certainty = Certainty::numeric;
          e.result.evidence["imagRatioSup"] = sup;
          e.result.notes =
              "one part has resolvent densities and satisfies (H) (via "
              "rule '" +
              vm.decidedBy +
              "'), its 1-energy comparison is asserted, and the other "
              "part's imaginary exponent is controlled by the combined "
              "real parts";
          p.conclude(std::move(e));
          return;
        }
      }
      p.record(silentEntry(isSum ? "sum-rules" : "product-rules",
                           isSum ? "cp-sum-stability" : "cp-product-stability",
                           "no composition rule applies to the declared "
                           "parts"));
      return;
    }

    // time change by a subordinating clock
    const SubordinatorReport clock =
        subordinatorDiagnostics(d.part2.triplet);
    if (!clock.isSubordinator) {
      p.record(silentEntry("time-change-clock", "glover-rao-subordination",
                           "declared clock is not a subordinator; rules "
                           "skipped"));
      return;
    }
    const Verdict vc = decideH(d.part2, sub);
    if (vc.status == CheckStatus::holds) {
      TraceEntry e{"time-change-clock", "glover-rao-subordination", {}};
      e.result.status = CheckStatus::holds;
      e.result.certainty = vc.certainty;
      e.result.notes = "the clock satisfies (H) (via rule '" + vc.decidedBy +
                       "'), which transfers to the time-changed process";
      p.conclude(std::move(e));
      return;
    }
    if (clock.drift > 0.0) {
      const Verdict vb = decideH(d.part1, sub);
      if (vb.status != CheckStatus::unknown) {
        TraceEntry e{"time-change-drift", "positive-drift-time-change", {}};
        e.result.status = vb.status;
        e.result.certainty = vb.certainty;
        e.result.evidence["clockDrift"] = clock.drift;
        e.result.notes =
            std::string("clock has positive drift, so (H) transfers in both "
                        "directions; base process verdict '") +
            statusName(vb.status) + "' (via rule '" + vb.decidedBy + "')";
        p.conclude(std::move(e));
        return;
      }
    }
    p.record(silentEntry("time-change-clock", "glover-rao-subordination",
                         "clock verdict unknown and clock drift is zero; "
                         "rules silent"));
  } catch (const std::exception& ex) {
    p.record(silentEntry("decomposition-rules", "exponent-consistency",
                         std::string("decomposition rules aborted: ") +
                             ex.what()));
  }
}

}  // namespace

}  // namespace levyh
