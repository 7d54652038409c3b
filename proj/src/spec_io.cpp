#include "levyh/spec_io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace levyh {

using nlohmann::json;

namespace {

std::string joinProblems(const std::vector<std::string>& problems) {
  std::ostringstream os;
  os << problems.size() << " schema problem"
     << (problems.size() == 1 ? "" : "s") << ":";
  for (const auto& p : problems) os << "\n  - " << p;
  return os.str();
}

struct Ctx {
  std::vector<std::string> errs;
  void fail(const std::string& path, const std::string& msg) {
    errs.push_back(path + ": " + msg);
  }
  [[noreturn]] void throwAll() { throw SchemaError(std::move(errs)); }
};

void checkKeys(Ctx& c, const json& o, const std::string& path,
               std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : o.items()) {
    (void)value;
    bool ok = false;
    for (const char* k : allowed)
      if (key == k) ok = true;
    if (!ok) c.fail(path, "unknown field \"" + key + "\"");
  }
}

double asNum(Ctx& c, const json& v, const std::string& path,
             double fallback = 0.0) {
  if (!v.is_number()) {
    c.fail(path, "expected a number");
    return fallback;
  }
  return v.get<double>();
}

Eigen::VectorXd asVector(Ctx& c, const json& v, const std::string& path,
                         int dim) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(std::max(dim, 0));
  if (!v.is_array() || static_cast<int>(v.size()) != dim) {
    c.fail(path, "expected an array of " + std::to_string(dim) + " numbers");
    return out;
  }
  for (int i = 0; i < dim; ++i)
    out(i) = asNum(c, v[i], path + "[" + std::to_string(i) + "]");
  return out;
}

RayDensity parseRay(Ctx& c, const json& v, const std::string& path) {
  RayDensity d;
  if (!v.is_object()) {
    c.fail(path, "expected an object");
    return d;
  }
  checkKeys(c, v, path, {"inner", "innerEnd", "grid", "outer", "window"});
  if (v.contains("inner")) {
    const json& in = v["inner"];
    checkKeys(c, in, path + ".inner", {"coef", "exponent"});
    d.inner.coef = asNum(c, in.value("coef", json(0.0)), path + ".inner.coef");
    d.inner.exponent =
        asNum(c, in.value("exponent", json(0.0)), path + ".inner.exponent");
    d.innerEnd = 1.0;  // default span end when only the piece is given
  }
  if (v.contains("innerEnd"))
    d.innerEnd = asNum(c, v["innerEnd"], path + ".innerEnd");
  if (v.contains("grid")) {
    const json& g = v["grid"];
    checkKeys(c, g, path + ".grid", {"r", "v"});
    if (!g.contains("r") || !g.contains("v") || !g["r"].is_array() ||
        !g["v"].is_array() || g["r"].size() != g["v"].size()) {
      c.fail(path + ".grid", "expected equal-length arrays \"r\" and \"v\"");
    } else {
      for (const auto& x : g["r"])
        d.gridR.push_back(asNum(c, x, path + ".grid.r[]"));
      for (const auto& x : g["v"])
        d.gridV.push_back(asNum(c, x, path + ".grid.v[]"));
    }
  }
  if (v.contains("outer")) {
    const json& o = v["outer"];
    checkKeys(c, o, path + ".outer", {"kind", "coef", "exponent", "rate"});
    const std::string kind = o.value("kind", "");
    if (kind == "power") {
      d.outerKind = OuterTail::power;
      d.outerPower.coef =
          asNum(c, o.value("coef", json(0.0)), path + ".outer.coef");
      d.outerPower.exponent =
          asNum(c, o.value("exponent", json(0.0)), path + ".outer.exponent");
    } else if (kind == "exponential") {
      d.outerKind = OuterTail::exponential;
      d.expCoef = asNum(c, o.value("coef", json(0.0)), path + ".outer.coef");
      d.expRate = asNum(c, o.value("rate", json(0.0)), path + ".outer.rate");
    } else {
      c.fail(path + ".outer.kind", "expected \"power\" or \"exponential\"");
    }
  }
  if (v.contains("window")) {
    const json& w = v["window"];
    checkKeys(c, w, path + ".window", {"lo", "hi"});
    d.winLo = asNum(c, w.value("lo", json(0.0)), path + ".window.lo");
    d.winHi = w.contains("hi") ? asNum(c, w["hi"], path + ".window.hi") : kInf;
  }
  return d;
}

MeasureComponent parseComponent(Ctx& c, const json& v,
                                const std::string& path, int dim) {
  if (!v.is_object() || !v.contains("type") || !v["type"].is_string()) {
    c.fail(path, "expected an object with a \"type\" tag");
    return Atoms{};
  }
  const std::string type = v["type"].get<std::string>();
  if (type == "atoms") {
    checkKeys(c, v, path, {"type", "points"});
    Atoms at;
    if (!v.contains("points") || !v["points"].is_array()) {
      c.fail(path, "expected a \"points\" array");
      return at;
    }
    int i = 0;
    for (const auto& p : v["points"]) {
      const std::string pp = path + ".points[" + std::to_string(i++) + "]";
      if (!p.is_object()) {
        c.fail(pp, "expected an object");
        continue;
      }
      checkKeys(c, p, pp, {"x", "w"});
      Atom a;
      a.x = asVector(c, p.value("x", json::array()), pp + ".x", dim);
      a.w = asNum(c, p.value("w", json(0.0)), pp + ".w");
      at.points.push_back(std::move(a));
    }
    return at;
  }
  if (type == "lineDensity") {
    checkKeys(c, v, path, {"type", "direction", "densityPos", "densityNeg"});
    LineDensity ld;
    ld.direction =
        asVector(c, v.value("direction", json::array()), path + ".direction",
                 dim);
    if (v.contains("densityPos"))
      ld.pos = parseRay(c, v["densityPos"], path + ".densityPos");
    if (v.contains("densityNeg"))
      ld.neg = parseRay(c, v["densityNeg"], path + ".densityNeg");
    return ld;
  }
  if (type == "isotropicStable") {
    checkKeys(c, v, path, {"type", "alpha", "intensity", "window"});
    IsotropicStable is;
    is.alpha = asNum(c, v.value("alpha", json(0.0)), path + ".alpha");
    is.intensity =
        asNum(c, v.value("intensity", json(0.0)), path + ".intensity");
    if (v.contains("window")) {
      const json& w = v["window"];
      checkKeys(c, w, path + ".window", {"lo", "hi"});
      is.winLo = asNum(c, w.value("lo", json(0.0)), path + ".window.lo");
      is.winHi =
          w.contains("hi") ? asNum(c, w["hi"], path + ".window.hi") : kInf;
    }
    return is;
  }
  c.fail(path + ".type",
         "unknown component type \"" + type +
             "\" (expected \"atoms\", \"lineDensity\", or "
             "\"isotropicStable\")");
  return Atoms{};
}

}  // namespace

SchemaError::SchemaError(std::vector<std::string> problems)
    : std::runtime_error(joinProblems(problems)),
      errors(std::move(problems)) {}

ProcessSpec parseProcessSpec(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError({std::string("not valid JSON: ") + e.what()});
  }

  Ctx c;
  ProcessSpec spec;
  if (!root.is_object()) {
    c.fail("$", "top level must be an object");
    c.throwAll();
  }
  checkKeys(c, root, "$", {"dim", "a", "Q", "mu", "assertions"});

  int dim = 0;
  if (!root.contains("dim") || !root["dim"].is_number_integer() ||
      (dim = root["dim"].get<int>()) < 1) {
    c.fail("$.dim", "expected a positive integer");
    c.throwAll();
  }

  spec.triplet.a = root.contains("a")
                       ? asVector(c, root["a"], "$.a", dim)
                       : Eigen::VectorXd::Zero(dim).eval();

  spec.triplet.Q = Eigen::MatrixXd::Zero(dim, dim);
  if (root.contains("Q")) {
    const json& q = root["Q"];
    if (!q.is_array() || static_cast<int>(q.size()) != dim) {
      c.fail("$.Q", "expected an array of " + std::to_string(dim) + " rows");
    } else {
      for (int i = 0; i < dim; ++i)
        spec.triplet.Q.row(i) =
            asVector(c, q[i], "$.Q[" + std::to_string(i) + "]", dim)
                .transpose();
    }
  }

  spec.triplet.mu.dim = dim;
  if (root.contains("mu")) {
    const json& mu = root["mu"];
    if (!mu.is_array()) {
      c.fail("$.mu", "expected an array of measure components");
    } else {
      int i = 0;
      for (const auto& comp : mu)
        spec.triplet.mu.components.push_back(parseComponent(
            c, comp, "$.mu[" + std::to_string(i++) + "]", dim));
    }
  }

  if (root.contains("assertions")) {
    const json& as = root["assertions"];
    if (!as.is_object()) {
      c.fail("$.assertions", "expected an object of booleans");
    } else {
      checkKeys(c, as, "$.assertions",
                {"hasResolventDensities",
                 "hasBoundedContinuousTransitionDensities",
                 "isSpecialSubordinator"});
      const auto flag = [&](const char* name, bool& out) {
        if (!as.contains(name)) return;
        if (!as[name].is_boolean())
          c.fail(std::string("$.assertions.") + name, "expected a boolean");
        else
          out = as[name].get<bool>();
      };
      flag("hasResolventDensities", spec.assertions.hasResolventDensities);
      flag("hasBoundedContinuousTransitionDensities",
           spec.assertions.hasBoundedContinuousTransitionDensities);
      flag("isSpecialSubordinator", spec.assertions.isSpecialSubordinator);
    }
  }

  if (!c.errs.empty()) c.throwAll();

  // semantic validation (PSD, unit directions, integrability) reported in
  // the same schema-error channel
  const ValidationReport rep = validateTriplet(spec.triplet);
  if (!rep.ok) throw SchemaError(rep.issues);
  return spec;
}

ProcessSpec loadProcessSpec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError({"cannot open file: " + path});
  std::ostringstream os;
  os << in.rdbuf();
  return parseProcessSpec(os.str());
}

std::string jsonNum(double x) {
  if (std::isnan(x)) return "null";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string jsonQuote(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char esc[8];
          std::snprintf(esc, sizeof esc, "\\u%04x", ch);
          out += esc;
        } else {
          out += ch;
        }
    }
  }
  return out + "\"";
}

namespace {

void writeVector(std::ostringstream& os, const Eigen::VectorXd& v) {
  os << "[";
  for (int i = 0; i < v.size(); ++i)
    os << (i ? ", " : "") << jsonNum(v(i));
  os << "]";
}

void writeRay(std::ostringstream& os, const RayDensity& d,
              const std::string& indent) {
  os << "{";
  bool first = true;
  const auto sep = [&] {
    os << (first ? "" : ",") << "\n" << indent << "  ";
    first = false;
  };
  if (d.inner.coef != 0.0) {
    sep();
    os << "\"inner\": {\"coef\": " << jsonNum(d.inner.coef)
       << ", \"exponent\": " << jsonNum(d.inner.exponent) << "}";
    sep();
    os << "\"innerEnd\": " << jsonNum(d.innerEnd);
  }
  if (!d.gridR.empty()) {
    sep();
    os << "\"grid\": {\"r\": [";
    for (std::size_t i = 0; i < d.gridR.size(); ++i)
      os << (i ? ", " : "") << jsonNum(d.gridR[i]);
    os << "], \"v\": [";
    for (std::size_t i = 0; i < d.gridV.size(); ++i)
      os << (i ? ", " : "") << jsonNum(d.gridV[i]);
    os << "]}";
  }
  if (d.outerKind == OuterTail::power) {
    sep();
    os << "\"outer\": {\"kind\": \"power\", \"coef\": "
       << jsonNum(d.outerPower.coef)
       << ", \"exponent\": " << jsonNum(d.outerPower.exponent) << "}";
  } else if (d.outerKind == OuterTail::exponential) {
    sep();
    os << "\"outer\": {\"kind\": \"exponential\", \"coef\": "
       << jsonNum(d.expCoef) << ", \"rate\": " << jsonNum(d.expRate) << "}";
  }
  if (d.winLo != 0.0 || std::isfinite(d.winHi)) {
    sep();
    os << "\"window\": {\"lo\": " << jsonNum(d.winLo);
    if (std::isfinite(d.winHi)) os << ", \"hi\": " << jsonNum(d.winHi);
    os << "}";
  }
  if (!first) os << "\n" << indent;
  os << "}";
}

}  // namespace

std::string serializeProcessSpec(const ProcessSpec& spec) {
  const LevyTriplet& t = spec.triplet;
  std::ostringstream os;
  os << "{\n  \"dim\": " << t.dim() << ",\n  \"a\": ";
  writeVector(os, t.a);
  os << ",\n  \"Q\": [";
  for (int i = 0; i < t.dim(); ++i) {
    os << (i ? ", " : "");
    writeVector(os, t.Q.row(i));
  }
  os << "],\n  \"mu\": [";
  bool firstComp = true;
  for (const auto& comp : t.mu.components) {
    os << (firstComp ? "" : ",") << "\n    ";
    firstComp = false;
    if (const auto* at = std::get_if<Atoms>(&comp)) {
      os << "{\"type\": \"atoms\", \"points\": [";
      for (std::size_t i = 0; i < at->points.size(); ++i) {
        os << (i ? ", " : "") << "{\"x\": ";
        writeVector(os, at->points[i].x);
        os << ", \"w\": " << jsonNum(at->points[i].w) << "}";
      }
      os << "]}";
    } else if (const auto* ld = std::get_if<LineDensity>(&comp)) {
      os << "{\"type\": \"lineDensity\", \"direction\": ";
      writeVector(os, ld->direction);
      if (!ld->pos.empty()) {
        os << ",\n      \"densityPos\": ";
        writeRay(os, ld->pos, "      ");
      }
      if (!ld->neg.empty()) {
        os << ",\n      \"densityNeg\": ";
        writeRay(os, ld->neg, "      ");
      }
      os << "}";
    } else if (const auto* is = std::get_if<IsotropicStable>(&comp)) {
      os << "{\"type\": \"isotropicStable\", \"alpha\": "
         << jsonNum(is->alpha)
         << ", \"intensity\": " << jsonNum(is->intensity);
      if (is->winLo != 0.0 || std::isfinite(is->winHi)) {
        os << ", \"window\": {\"lo\": " << jsonNum(is->winLo);
        if (std::isfinite(is->winHi)) os << ", \"hi\": " << jsonNum(is->winHi);
        os << "}";
      }
      os << "}";
    }
  }
  if (!firstComp) os << "\n  ";
  os << "],\n  \"assertions\": {\n    \"hasResolventDensities\": "
     << (spec.assertions.hasResolventDensities ? "true" : "false")
     << ",\n    \"hasBoundedContinuousTransitionDensities\": "
     << (spec.assertions.hasBoundedContinuousTransitionDensities ? "true"
                                                                 : "false")
     << ",\n    \"isSpecialSubordinator\": "
     << (spec.assertions.isSpecialSubordinator ? "true" : "false")
     << "\n  }\n}\n";
  return os.str();
}

void saveProcessSpec(const ProcessSpec& spec, const std::string& path) {
  writeFileAtomic(path, serializeProcessSpec(spec));
}

namespace {

void writeCheckResult(std::ostringstream& os, const CheckResult& r,
                      const std::string& indent) {
  os << "{\n"
     << indent << "  \"status\": " << jsonQuote(statusName(r.status))
     << ",\n"
     << indent
     << "  \"certainty\": " << jsonQuote(certaintyName(r.certainty));
  if (!r.evidence.empty()) {
    os << ",\n" << indent << "  \"evidence\": {";
    bool first = true;
    for (const auto& [k, v] : r.evidence) {
      os << (first ? "" : ",") << "\n"
         << indent << "    " << jsonQuote(k) << ": " << jsonNum(v);
      first = false;
    }
    os << "\n" << indent << "  }";
  }
  if (!r.notes.empty())
    os << ",\n" << indent << "  \"notes\": " << jsonQuote(r.notes);
  os << "\n" << indent << "}";
}

}  // namespace

std::string serializeVerdict(const Verdict& v) {
  std::ostringstream os;
  os << "{\n  \"status\": " << jsonQuote(statusName(v.status))
     << ",\n  \"certainty\": " << jsonQuote(certaintyName(v.certainty))
     << ",\n  \"decidedBy\": " << jsonQuote(v.decidedBy)
     << ",\n  \"trace\": [";
  for (std::size_t i = 0; i < v.trace.size(); ++i) {
    const TraceEntry& e = v.trace[i];
    os << (i ? "," : "") << "\n    {\n      \"rule\": " << jsonQuote(e.rule)
       << ",\n      \"theorem\": " << jsonQuote(e.theorem)
       << ",\n      \"result\": ";
    writeCheckResult(os, e.result, "      ");
    os << "\n    }";
  }
  if (!v.trace.empty()) os << "\n  ";
  os << "]\n}\n";
  return os.str();
}

std::string verdictMarkdown(const Verdict& v) {
  std::ostringstream os;
  os << "# Hunt hypothesis (H) verdict\n\n"
     << "**Status**: " << statusName(v.status) << " ("
     << certaintyName(v.certainty) << ")";
  if (!v.decidedBy.empty()) os << ", decided by rule `" << v.decidedBy << "`";
  os << "\n\n| rule | criterion | status | certainty | notes |\n"
     << "|---|---|---|---|---|\n";
  for (const TraceEntry& e : v.trace) {
    std::string notes = e.result.notes;
    for (auto& ch : notes)
      if (ch == '|' || ch == '\n') ch = ' ';
    os << "| " << e.rule << " | " << e.theorem << " | "
       << statusName(e.result.status) << " | "
       << certaintyName(e.result.certainty) << " | " << notes << " |\n";
  }
  return os.str();
}

void writeFileAtomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path())
    fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write file: " + tmp.string());
    out << content;
    if (!out.flush())
      throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, target);
}

}  // namespace levyh
