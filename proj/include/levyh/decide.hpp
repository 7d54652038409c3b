#pragma once
// Verdict engine: combines the individual checkers into a single
// holds/fails/unknown answer for the polarity hypothesis (H), with a trace
// of every rule consulted.
//
// Rule families, in evaluation order:
//   1. compound Poisson                          -> holds (exact)
//   2. full-rank Gaussian part                   -> holds (exact)
//   3. condition (S) when off-range mass finite  -> holds/fails (exact*)
//   4. 1-D subordinator drift / special class    -> fails / holds (exact)
//   5. projected zero-drift necessity            -> fails (exact)
//   6. 1-D sufficient criteria (quasi-stable, dominance, small-jump
//      liminf, exponent growth)                  -> holds
//   7. bounded-ratio criteria under density assertions (Kanda-Forst, Rao)
//                                                -> holds
//   8. declared decompositions (sum / product / subordination)
//   9. stable-envelope classification            -> informational only
//
// "fails" is only ever produced by necessity results (3, 4, 5, and the
// time-change equivalence in 8).  Rules gated on user assertions can only
// add "holds", and they run after every unconditional "fails" rule, so
// strengthening assertions never weakens a verdict.
#include <optional>
#include <string>
#include <vector>

#include "levyh/checks.hpp"
#include "levyh/triplet.hpp"

namespace levyh {

struct TraceEntry {
  std::string rule;     // pipeline step, e.g. "condition-s"
  std::string theorem;  // criterion family, e.g. "kanda-forst"
  CheckResult result;
};

struct Verdict {
  CheckStatus status = CheckStatus::unknown;
  Certainty certainty = Certainty::numeric;
  std::string decidedBy;  // rule name of the deciding trace entry; empty if
                          // undecided
  std::vector<TraceEntry> trace;
};

enum class DecompositionKind { sum, product, timeChange };

const char* kindName(DecompositionKind k);

// A user-declared decomposition of the process under study.  For `sum` and
// `product` the parts are independent components; for `timeChange` part1 is
// the base process and part2 the subordinating clock.
struct DecompositionDecl {
  DecompositionKind kind = DecompositionKind::sum;
  ProcessSpec part1;
  ProcessSpec part2;
  // user-asserted: the 1-resolvent energy of part1 dominates (up to a
  // constant) the 1-resolvent energy of the sum on compacts; required by
  // the resolvent-density sum rule
  bool oneEnergyComparable = false;
};

struct DecideOptions {
  double rankThreshold = kDefaultRankThreshold;
  std::optional<DecompositionDecl> decomposition;
  double gammaAbsGrowth = 0.1;  // exponent for the |psi| growth criterion
  bool concurrent = true;       // run numeric profile rules in parallel
};

// Decide (H) for the process.  Never throws on valid triplets; numeric
// rules that cannot run (wrong dimension, unrepresentable projection) are
// skipped or recorded as unknown trace entries.
Verdict decideH(const ProcessSpec& spec, const DecideOptions& opt = {});

}  // namespace levyh
