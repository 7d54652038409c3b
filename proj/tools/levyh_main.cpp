// Command-line frontend.
//
//   levyh check     --input spec.json [--output verdict.json] [--markdown f.md]
//   levyh describe  --input spec.json [--output grid.csv] [grid flags]
//   levyh project   --input spec.json --subspace '[[1,-1]]' [--output out.json]
//   levyh energy    --input spec.json [--atoms '[{"x":[0],"w":1}]'] [...]
//   levyh simulate  --input spec.json --target hyperplane --normal '[1]' [...]
//
// Exit codes: 0 success, 2 schema/usage errors, 3 numeric failure (artifacts
// written before the failure are kept).  All file writes are atomic
// (temp file + rename), and every floating-point value is printed with
// 17 significant digits, so identical inputs give byte-identical artifacts.
#include <CLI11.hpp>
#include <Eigen/Dense>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "levyh/calculus.hpp"
#include "levyh/checks.hpp"
#include "levyh/decide.hpp"
#include "levyh/energy.hpp"
#include "levyh/exponent.hpp"
#include "levyh/pathsim.hpp"
#include "levyh/spec_io.hpp"

namespace {

using namespace levyh;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitSchema = 2;
constexpr int kExitNumeric = 3;

// ------------------------------------------------------------ flag parsing

json parseFlagJson(const std::string& text, const std::string& flag) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError({flag + ": not valid JSON: " + e.what()});
  }
}

Eigen::VectorXd flagVector(const std::string& text, const std::string& flag,
                           int dim) {
  const json v = parseFlagJson(text, flag);
  if (!v.is_array() || static_cast<int>(v.size()) != dim)
    throw SchemaError(
        {flag + ": expected an array of " + std::to_string(dim) + " numbers"});
  Eigen::VectorXd out(dim);
  for (int i = 0; i < dim; ++i) {
    if (!v[i].is_number()) throw SchemaError({flag + ": expected numbers"});
    out(i) = v[i].get<double>();
  }
  return out;
}

// columns of the returned matrix are the given vectors, orthonormalized by
// Gram-Schmidt (so "--subspace [[1,-1]]" works without manual scaling)
Eigen::MatrixXd flagBasis(const std::string& text, const std::string& flag,
                          int dim) {
  const json v = parseFlagJson(text, flag);
  if (!v.is_array() || v.empty() || static_cast<int>(v.size()) >= dim + 1)
    throw SchemaError({flag + ": expected 1.." + std::to_string(dim) +
                       " basis vectors"});
  Eigen::MatrixXd basis(dim, static_cast<int>(v.size()));
  for (int j = 0; j < basis.cols(); ++j) {
    if (!v[j].is_array() || static_cast<int>(v[j].size()) != dim)
      throw SchemaError({flag + "[" + std::to_string(j) +
                         "]: expected an array of " + std::to_string(dim) +
                         " numbers"});
    for (int i = 0; i < dim; ++i) {
      if (!v[j][i].is_number())
        throw SchemaError({flag + ": expected numbers"});
      basis(i, j) = v[j][i].get<double>();
    }
  }
  for (int j = 0; j < basis.cols(); ++j) {
    for (int i = 0; i < j; ++i)
      basis.col(j) -= basis.col(i).dot(basis.col(j)) * basis.col(i);
    const double norm = basis.col(j).norm();
    if (norm < 1e-12)
      throw SchemaError({flag + ": vectors are linearly dependent"});
    basis.col(j) /= norm;
  }
  return basis;
}

Atoms flagAtoms(const std::string& text, const std::string& flag, int dim) {
  const json v = parseFlagJson(text, flag);
  if (!v.is_array() || v.empty())
    throw SchemaError({flag + ": expected a nonempty array of atoms"});
  Atoms nu;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const json& p = v[i];
    const std::string at = flag + "[" + std::to_string(i) + "]";
    if (!p.is_object() || !p.contains("x") || !p.contains("w"))
      throw SchemaError({at + ": expected {\"x\": [...], \"w\": number}"});
    Atom a;
    a.x = flagVector(p["x"].dump(), at + ".x", dim);
    if (!p["w"].is_number() || (a.w = p["w"].get<double>()) < 0.0)
      throw SchemaError({at + ".w: expected a nonnegative number"});
    nu.points.push_back(std::move(a));
  }
  return nu;
}

// ------------------------------------------------------------------ output

void emit(const std::optional<std::string>& path, const std::string& content) {
  if (path)
    writeFileAtomic(*path, content);
  else
    std::cout << content;
}

const char* tailKindName(TailResult::Kind k) {
  switch (k) {
    case TailResult::Kind::converged: return "converged";
    case TailResult::Kind::diverged: return "diverged";
    default: return "inconclusive";
  }
}

const char* limitName(EnergyLadder::Limit l) {
  switch (l) {
    case EnergyLadder::Limit::toZero: return "toZero";
    case EnergyLadder::Limit::positive: return "positive";
    default: return "inconclusive";
  }
}

// ---------------------------------------------------------------- commands

int runCheck(const ProcessSpec& spec, const std::optional<std::string>& out,
             const std::optional<std::string>& mdOut, double rankThreshold,
             bool serial) {
  DecideOptions opt;
  opt.rankThreshold = rankThreshold;
  opt.concurrent = !serial;
  const Verdict v = decideH(spec, opt);

  std::string md = verdictMarkdown(v);
  // point polarity is about singletons, not (H); report it alongside the
  // verdict for one-dimensional non-compound-Poisson inputs
  if (spec.triplet.dim() == 1 &&
      isCompoundPoisson(spec.triplet).status != CheckStatus::holds) {
    const CheckResult kes = kestenPointPolarity(spec.triplet);
    md += "\nPoint polarity (Kesten): ";
    md += kes.status == CheckStatus::holds
              ? "integral converges; singletons are non-polar"
              : (kes.status == CheckStatus::fails
                     ? "integral diverges; singletons are polar"
                     : "inconclusive");
    if (auto it = kes.evidence.find("integral"); it != kes.evidence.end())
      md += " (integral = " + jsonNum(it->second) + ")";
    md += "\n";
  }

  emit(out, serializeVerdict(v));
  if (mdOut)
    writeFileAtomic(*mdOut, md);
  else if (out)
    std::cout << md;  // JSON went to a file; summary still lands on stdout
  return kExitOk;
}

int runDescribe(const ProcessSpec& spec, const std::optional<std::string>& out,
                double rMin, double rMax, int perDecade,
                const std::vector<std::string>& directionFlags) {
  const int n = spec.triplet.dim();
  std::vector<Eigen::VectorXd> dirs;
  for (const auto& d : directionFlags) {
    Eigen::VectorXd v = flagVector(d, "--direction", n);
    const double norm = v.norm();
    if (norm <= 0.0)
      throw SchemaError({"--direction: zero vector"});
    dirs.push_back(v / norm);
  }
  if (dirs.empty())
    for (int i = 0; i < n; ++i)
      dirs.push_back(Eigen::VectorXd::Unit(n, i));
  if (!(rMin > 0.0) || !(rMax > rMin) || perDecade < 1)
    throw SchemaError({"--r-min/--r-max/--per-decade: need 0 < rMin < rMax "
                       "and at least one sample per decade"});

  std::ostringstream csv;
  for (int i = 0; i < n; ++i) csv << "z" << (i + 1) << ",";
  csv << "re_psi,im_psi,A,B\n";
  const double step = 1.0 / perDecade;
  for (const auto& dir : dirs) {
    for (double e = std::log10(rMin); e <= std::log10(rMax) + 1e-12;
         e += step) {
      const Eigen::VectorXd z = std::pow(10.0, e) * dir;
      const std::complex<double> psi = evalPsi(spec.triplet, z);
      const ABValue ab = evalAB(spec.triplet, z);
      for (int i = 0; i < n; ++i) csv << jsonNum(z(i)) << ",";
      csv << jsonNum(psi.real()) << "," << jsonNum(psi.imag()) << ","
          << jsonNum(ab.A) << "," << jsonNum(ab.B) << "\n";
    }
  }
  emit(out, csv.str());
  return kExitOk;
}

int runProject(const ProcessSpec& spec, const std::optional<std::string>& out,
               const std::string& subspaceFlag) {
  if (subspaceFlag.empty())
    throw SchemaError({"--subspace is required for project"});
  const Eigen::MatrixXd basis =
      flagBasis(subspaceFlag, "--subspace", spec.triplet.dim());
  const ProjectionResult pr = projectTriplet(spec.triplet, basis);
  ProcessSpec projected;
  projected.triplet = pr.projectedTriplet;
  projected.assertions = spec.assertions;
  emit(out, serializeProcessSpec(projected));
  return kExitOk;
}

int runEnergy(const ProcessSpec& spec, const std::optional<std::string>& out,
              const std::optional<std::string>& csvOut,
              const std::string& atomsFlag, int rungs,
              const EnergyOptions& eopt) {
  Atoms nu;
  if (atomsFlag.empty()) {
    Atom origin;
    origin.x = Eigen::VectorXd::Zero(spec.triplet.dim());
    origin.w = 1.0;
    nu.points.push_back(std::move(origin));
  } else {
    nu = flagAtoms(atomsFlag, "--atoms", spec.triplet.dim());
  }
  if (rungs < 2) throw SchemaError({"--lambda-ladder: need at least 2 rungs"});

  const EnergyLadder ladder = energyLadder(spec.triplet, nu, rungs, eopt);

  std::ostringstream js;
  js << "{\n  \"lambdas\": [";
  for (std::size_t i = 0; i < ladder.lambdas.size(); ++i)
    js << (i ? ", " : "") << jsonNum(ladder.lambdas[i]);
  js << "],\n  \"rungs\": [";
  for (std::size_t i = 0; i < ladder.rungs.size(); ++i) {
    const EnergyResult& r = ladder.rungs[i];
    js << (i ? "," : "") << "\n    {\"value\": " << jsonNum(r.value)
       << ", \"errorEst\": " << jsonNum(r.errorEst)
       << ", \"tail\": " << jsonQuote(tailKindName(r.tailKind)) << "}";
  }
  js << "\n  ],\n  \"slope\": " << jsonNum(ladder.slope)
     << ",\n  \"limit\": " << jsonQuote(limitName(ladder.limit)) << "\n}\n";
  emit(out, js.str());

  if (csvOut) {
    std::ostringstream csv;
    csv << "lambda,value,errorEst,tail\n";
    for (std::size_t i = 0; i < ladder.lambdas.size(); ++i)
      csv << jsonNum(ladder.lambdas[i]) << ","
          << jsonNum(ladder.rungs[i].value) << ","
          << jsonNum(ladder.rungs[i].errorEst) << ","
          << tailKindName(ladder.rungs[i].tailKind) << "\n";
    writeFileAtomic(*csvOut, csv.str());
  }
  return kExitOk;
}

int runSimulate(const ProcessSpec& spec, const std::optional<std::string>& out,
                const SimPlan& plan, const std::string& targetKind,
                const std::string& normalFlag, double offset,
                const std::string& centerFlag, const std::string& subspaceFlag,
                double eps, double winLo, double winHi) {
  const int n = spec.triplet.dim();
  HitTarget target = Hyperplane{};
  if (targetKind == "hyperplane") {
    if (normalFlag.empty())
      throw SchemaError({"--normal is required for a hyperplane target"});
    Hyperplane h;
    h.normal = flagVector(normalFlag, "--normal", n);
    h.offset = offset;
    target = h;
  } else if (targetKind == "point") {
    PointTube p;
    p.center = centerFlag.empty()
                   ? Eigen::VectorXd::Zero(n).eval()
                   : flagVector(centerFlag, "--center", n);
    p.eps = eps;
    target = p;
  } else if (targetKind == "subspace") {
    if (subspaceFlag.empty())
      throw SchemaError({"--subspace is required for a subspace target"});
    SubspaceTube s;
    s.basis = flagBasis(subspaceFlag, "--subspace", n);
    s.eps = eps;
    target = s;
  } else {
    throw SchemaError(
        {"--target: expected hyperplane, point, or subspace"});
  }
  if (winHi < 0.0) winHi = plan.horizon;

  const Ensemble ens = simulatePaths(spec.triplet, plan);
  const HittingEstimate est = hittingEstimate(ens, target, winLo, winHi);

  std::ostringstream js;
  js << "{\n  \"probability\": " << jsonNum(est.probability)
     << ",\n  \"ci95\": " << jsonNum(est.ci95) << ",\n  \"hits\": "
     << est.hits << ",\n  \"paths\": " << est.paths << ",\n  \"seed\": "
     << est.seed << ",\n  \"discretizationCaveat\": "
     << (est.discretizationCaveat ? "true" : "false")
     << ",\n  \"window\": [" << jsonNum(winLo) << ", " << jsonNum(winHi)
     << "],\n  \"jumpIntensity\": " << jsonNum(ens.jumpIntensity)
     << ",\n  \"smallJumpVariance\": " << jsonNum(ens.smallJumpVariance)
     << "\n}\n";
  emit(out, js.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Levy process (H)-condition toolkit"};
  app.require_subcommand(1);

  std::string input;
  std::string output;  // empty = stdout
  const auto addCommon = [&](CLI::App* cmd) {
    cmd->add_option("--input", input, "process-spec JSON file")->required();
    cmd->add_option("--output", output, "artifact path (default: stdout)");
  };
  const auto outOpt = [&]() -> std::optional<std::string> {
    if (output.empty()) return std::nullopt;
    return output;
  };

  // check
  auto* check = app.add_subcommand("check", "decide hypothesis (H)");
  addCommon(check);
  std::string markdownOut;
  double rankThreshold = kDefaultRankThreshold;
  bool serial = false;
  check->add_option("--markdown", markdownOut, "markdown summary path");
  check->add_option("--rank-threshold", rankThreshold,
                    "relative eigenvalue cutoff for rank decisions");
  check->add_flag("--serial", serial, "run numeric profile rules serially");

  // describe
  auto* describe =
      app.add_subcommand("describe", "exponent values on a log grid (CSV)");
  addCommon(describe);
  double rMin = 1e-2, rMax = 1e4;
  int perDecade = 8;
  std::vector<std::string> directions;
  describe->add_option("--r-min", rMin, "smallest radius (default 0.01)");
  describe->add_option("--r-max", rMax, "largest radius (default 1e4)");
  describe->add_option("--per-decade", perDecade,
                       "samples per decade (default 8)");
  describe
      ->add_option("--direction", directions,
                   "ray direction as a JSON array (repeatable; default: "
                   "coordinate axes)")
      ->allow_extra_args(false);  // one JSON token per use; keep brackets

  // project
  auto* project =
      app.add_subcommand("project", "orthogonal projection onto a subspace");
  addCommon(project);
  std::string subspace;
  project->add_option("--subspace", subspace,
                      "JSON array of basis vectors, e.g. [[1,-1]]");

  // energy
  auto* energy = app.add_subcommand(
      "energy", "lambda-energy ladder of a finite atomic measure");
  addCommon(energy);
  std::string atoms, energyCsv;
  int rungs = 9;
  EnergyOptions eopt;
  energy->add_option("--atoms", atoms,
                     "test measure as JSON atoms (default: unit mass at 0)");
  energy->add_option("--lambda-ladder", rungs,
                     "number of rungs lambda = 4^k (default 9)");
  energy->add_option("--csv", energyCsv, "also write the ladder as CSV");
  energy->add_option("--head-end", eopt.headEnd,
                     "adaptive-quadrature head range (default 1)");
  energy->add_option("--rel-tol", eopt.relTol,
                     "relative tolerance (default 1e-8)");
  energy->add_option("--max-octaves", eopt.maxOctaves,
                     "dyadic tail octaves examined (default 48)");

  // simulate
  auto* simulate =
      app.add_subcommand("simulate", "Monte Carlo hitting estimate");
  addCommon(simulate);
  SimPlan plan;
  std::string targetKind = "hyperplane", normal, center, simSubspace;
  double offset = 0.0, eps = 1e-3, winLo = 0.0, winHi = -1.0;
  simulate->add_option("--paths", plan.paths, "number of paths (default 1e4)");
  simulate->add_option("--seed", plan.seed, "RNG seed (default 1)");
  simulate->add_option("--horizon", plan.horizon,
                       "time horizon (default 1)");
  simulate->add_option("--steps", plan.stepCount,
                       "grid steps (default 200)");
  simulate->add_option("--cutoff", plan.smallJumpCutoff,
                       "small-jump cutoff in (0,1] (default 1)");
  simulate->add_option("--target", targetKind,
                       "hyperplane | point | subspace");
  simulate->add_option("--normal", normal, "hyperplane normal (JSON array)");
  simulate->add_option("--offset", offset, "hyperplane offset (default 0)");
  simulate->add_option("--center", center,
                       "point-tube center (JSON array, default origin)");
  simulate->add_option("--subspace", simSubspace,
                       "subspace-tube basis (JSON array of vectors)");
  simulate->add_option("--eps", eps, "tube radius (default 1e-3)");
  simulate->add_option("--window-lo", winLo,
                       "hit window start (default 0)");
  simulate->add_option("--window-hi", winHi,
                       "hit window end (default: horizon)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitSchema;
  }

  ProcessSpec spec;
  try {
    spec = loadProcessSpec(input);
  } catch (const SchemaError& e) {
    std::cerr << e.what() << "\n";
    return kExitSchema;
  }

  try {
    if (*check)
      return runCheck(spec, outOpt(),
                      markdownOut.empty()
                          ? std::nullopt
                          : std::optional<std::string>(markdownOut),
                      rankThreshold, serial);
    if (*describe)
      return runDescribe(spec, outOpt(), rMin, rMax, perDecade, directions);
    if (*project) return runProject(spec, outOpt(), subspace);
    if (*energy)
      return runEnergy(spec, outOpt(),
                       energyCsv.empty()
                           ? std::nullopt
                           : std::optional<std::string>(energyCsv),
                       atoms, rungs, eopt);
    if (*simulate)
      return runSimulate(spec, outOpt(), plan, targetKind, normal, offset,
                         center, simSubspace, eps, winLo, winHi);
  } catch (const SchemaError& e) {
    std::cerr << e.what() << "\n";
    return kExitSchema;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitOk;
}
