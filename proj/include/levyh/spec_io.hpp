#pragma once
// JSON process-spec files and deterministic machine-readable reports.
//
// Process-spec schema (field names exact; unknown fields rejected):
//
//   {
//     "dim": 2,
//     "a": [1.0, -1.0],                  // linear coefficient of psi
//     "Q": [[2.0, 2.0], [2.0, 2.0]],
//     "mu": [ COMPONENT, ... ],          // optional, default empty
//     "assertions": {                    // optional, all default false
//       "hasResolventDensities": false,
//       "hasBoundedContinuousTransitionDensities": false,
//       "isSpecialSubordinator": false
//     }
//   }
//
//   COMPONENT is tagged by "type":
//     {"type": "atoms", "points": [{"x": [..], "w": 2.0}, ...]}
//     {"type": "lineDensity", "direction": [..],
//      "densityPos": RAY, "densityNeg": RAY}          // each ray optional
//     {"type": "isotropicStable", "alpha": 0.5, "intensity": 1.0,
//      "window": {"lo": 0.0, "hi": 1.0}}              // window optional
//
//   RAY (all parts optional):
//     {"inner": {"coef": c, "exponent": e}, "innerEnd": r,
//      "grid": {"r": [..], "v": [..]},
//      "outer": {"kind": "power", "coef": c, "exponent": e}
//            or {"kind": "exponential", "coef": c, "rate": q},
//      "window": {"lo": a, "hi": b}}
//
// An infinite window end is written by omitting "hi".  Serialization prints
// every number with 17 significant digits, preserves component order, and
// always emits the same fields in the same order, so byte-identical output
// is reproducible and parse(serialize(s)) == s for every valid spec.
//
// Schema violations raise SchemaError carrying one message per problem
// (JSON-path prefixed; parse errors carry the byte position).
#include <stdexcept>
#include <string>
#include <vector>

#include "levyh/decide.hpp"
#include "levyh/triplet.hpp"

namespace levyh {

struct SchemaError : std::runtime_error {
  explicit SchemaError(std::vector<std::string> problems);
  std::vector<std::string> errors;
};

ProcessSpec parseProcessSpec(const std::string& text);
ProcessSpec loadProcessSpec(const std::string& path);

std::string serializeProcessSpec(const ProcessSpec& spec);
void saveProcessSpec(const ProcessSpec& spec, const std::string& path);

// deterministic float formatting used in every report (17 significant
// digits, round-trip exact)
std::string jsonNum(double x);
std::string jsonQuote(const std::string& s);

// reports
std::string serializeVerdict(const Verdict& v);
std::string verdictMarkdown(const Verdict& v);

// write-then-rename so readers never observe a partial file
void writeFileAtomic(const std::string& path, const std::string& content);

}  // namespace levyh
