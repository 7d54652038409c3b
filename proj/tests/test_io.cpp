#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "levyh/calculus.hpp"
#include "levyh/decide.hpp"
#include "levyh/spec_io.hpp"

using namespace levyh;

namespace {

std::string dataFile(const char* name) {
  return std::string(LEVYH_TEST_DATA_DIR) + "/" + name;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("known spec file parses to the expected triplet") {
  const ProcessSpec s = loadProcessSpec(dataFile("degenerate2d.json"));
  CHECK(s.triplet.dim() == 2);
  CHECK(s.triplet.a(0) == 1.0);
  CHECK(s.triplet.a(1) == -1.0);
  CHECK(s.triplet.Q(0, 0) == 2.0);
  CHECK(s.triplet.Q(0, 1) == 2.0);
  CHECK(s.triplet.Q(1, 0) == 2.0);
  CHECK(s.triplet.Q(1, 1) == 2.0);
  CHECK(s.triplet.mu.emptyMeasure());
  CHECK_FALSE(s.assertions.hasResolventDensities);
  CHECK_FALSE(s.assertions.hasBoundedContinuousTransitionDensities);
  CHECK_FALSE(s.assertions.isSpecialSubordinator);
}

TEST_CASE("full-surface spec file exercises every component kind") {
  const ProcessSpec s = loadProcessSpec(dataFile("full_surface.json"));
  CHECK(s.triplet.dim() == 2);
  REQUIRE(s.triplet.mu.components.size() == 3);

  const auto* at = std::get_if<Atoms>(&s.triplet.mu.components[0]);
  REQUIRE(at != nullptr);
  REQUIRE(at->points.size() == 2);
  CHECK(at->points[1].x(1) == -2.0);
  CHECK(at->points[1].w == 1.25);

  const auto* ld = std::get_if<LineDensity>(&s.triplet.mu.components[1]);
  REQUIRE(ld != nullptr);
  CHECK(ld->direction(0) == 1.0);
  CHECK(ld->pos.inner.coef == 1.0);
  CHECK(ld->pos.inner.exponent == -1.5);
  CHECK(ld->pos.innerEnd == 0.5);
  REQUIRE(ld->pos.gridR.size() == 3);
  CHECK(ld->pos.gridV[2] == 0.35);
  CHECK(ld->pos.outerKind == OuterTail::power);
  CHECK(ld->pos.winLo == 0.001);
  CHECK(std::isinf(ld->pos.winHi));
  CHECK(ld->neg.outerKind == OuterTail::exponential);
  CHECK(ld->neg.expRate == 3.0);
  CHECK(ld->neg.winHi == 50.0);

  const auto* is = std::get_if<IsotropicStable>(&s.triplet.mu.components[2]);
  REQUIRE(is != nullptr);
  CHECK(is->alpha == 1.5);
  CHECK(is->intensity == 0.7);
  CHECK(is->winHi == 10.0);

  CHECK(s.assertions.hasResolventDensities);
  CHECK_FALSE(s.assertions.hasBoundedContinuousTransitionDensities);
}

TEST_CASE("serialize/parse round trip is byte-stable") {
  // A second serialize of the reparsed spec must reproduce the first
  // serialization byte for byte; this is the determinism contract for every
  // report the toolkit writes.
  for (const char* name : {"degenerate2d.json", "full_surface.json"}) {
    CAPTURE(name);
    const ProcessSpec s = loadProcessSpec(dataFile(name));
    const std::string once = serializeProcessSpec(s);
    const ProcessSpec back = parseProcessSpec(once);
    const std::string twice = serializeProcessSpec(back);
    CHECK(once == twice);
  }
}

TEST_CASE("round trip preserves values exactly, including awkward doubles") {
  ProcessSpec s;
  s.triplet.a = Eigen::VectorXd(3);
  s.triplet.a << 0.1, -1.0 / 3.0, 1e-300;
  s.triplet.Q = Eigen::MatrixXd::Zero(3, 3);
  s.triplet.Q(0, 0) = M_PI;
  s.triplet.Q(1, 1) = 2.0 + 1e-15;
  s.triplet.Q(2, 2) = 123456.789012345678;
  Atoms at;
  at.points.push_back({(Eigen::VectorXd(3) << 0.3, 0.3, 0.3).finished(),
                       7.0 / 11.0});
  s.triplet.mu.dim = 3;
  s.triplet.mu.components.push_back(at);
  s.assertions.hasResolventDensities = true;

  const ProcessSpec back = parseProcessSpec(serializeProcessSpec(s));
  CHECK(back.triplet.a == s.triplet.a);  // bitwise via %.17g round trip
  CHECK(back.triplet.Q == s.triplet.Q);
  const auto* backAt = std::get_if<Atoms>(&back.triplet.mu.components[0]);
  REQUIRE(backAt != nullptr);
  CHECK(backAt->points[0].x == at.points[0].x);
  CHECK(backAt->points[0].w == at.points[0].w);
  CHECK(back.assertions.hasResolventDensities);
}

TEST_CASE("unknown fields are rejected with the offending path") {
  const char* text = R"({"dim": 1, "a": [0], "Q": [[1]], "banana": 3})";
  CHECK_THROWS_WITH_AS(parseProcessSpec(text),
                       doctest::Contains("banana"), SchemaError);

  const char* nested =
      R"({"dim": 1, "a": [0], "Q": [[1]],
          "mu": [{"type": "atoms", "points": [{"x": [1], "w": 1, "z": 0}]}]})";
  try {
    parseProcessSpec(nested);
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    REQUIRE(e.errors.size() == 1);
    CHECK(e.errors[0].find("$.mu[0].points[0]") != std::string::npos);
    CHECK(e.errors[0].find("\"z\"") != std::string::npos);
  }
}

TEST_CASE("non-symmetric Q is a schema error naming the defect") {
  const char* text = R"({"dim": 2, "a": [0, 0], "Q": [[1, 0.5], [0, 1]]})";
  CHECK_THROWS_WITH_AS(parseProcessSpec(text),
                       doctest::Contains("symmetric"), SchemaError);
}

TEST_CASE("empty mu array is a valid Gaussian-only spec") {
  const ProcessSpec s =
      parseProcessSpec(R"({"dim": 2, "a": [0, 0], "Q": [[1, 0], [0, 1]]})");
  CHECK(s.triplet.mu.emptyMeasure());
  const ProcessSpec s2 = parseProcessSpec(
      R"({"dim": 2, "a": [0, 0], "Q": [[1, 0], [0, 1]], "mu": []})");
  CHECK(s2.triplet.mu.emptyMeasure());
}

TEST_CASE("malformed documents produce precise schema errors") {
  SUBCASE("not JSON at all") {
    CHECK_THROWS_WITH_AS(parseProcessSpec("{dim: 1"),
                         doctest::Contains("not valid JSON"), SchemaError);
  }
  SUBCASE("missing dim") {
    CHECK_THROWS_WITH_AS(parseProcessSpec(R"({"a": [0]})"),
                         doctest::Contains("$.dim"), SchemaError);
  }
  SUBCASE("wrong vector length") {
    CHECK_THROWS_WITH_AS(
        parseProcessSpec(R"({"dim": 2, "a": [0], "Q": [[1,0],[0,1]]})"),
        doctest::Contains("$.a"), SchemaError);
  }
  SUBCASE("wrong Q row count") {
    CHECK_THROWS_WITH_AS(
        parseProcessSpec(R"({"dim": 2, "a": [0,0], "Q": [[1,0]]})"),
        doctest::Contains("$.Q"), SchemaError);
  }
  SUBCASE("unknown component type") {
    CHECK_THROWS_WITH_AS(
        parseProcessSpec(
            R"({"dim": 1, "a": [0], "Q": [[0]], "mu": [{"type": "gamma"}]})"),
        doctest::Contains("$.mu[0].type"), SchemaError);
  }
  SUBCASE("non-boolean assertion") {
    CHECK_THROWS_WITH_AS(
        parseProcessSpec(R"({"dim": 1, "a": [0], "Q": [[1]],
                             "assertions": {"hasResolventDensities": 1}})"),
        doctest::Contains("$.assertions.hasResolventDensities"), SchemaError);
  }
  SUBCASE("multiple problems reported together") {
    try {
      parseProcessSpec(
          R"({"dim": 2, "a": [0], "Q": [[1,0]], "extra": true})");
      FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
      CHECK(e.errors.size() == 3);
    }
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(loadProcessSpec("/nonexistent/path.json"), SchemaError);
  }
}

TEST_CASE("number formatting uses 17 significant digits") {
  CHECK(jsonNum(M_PI) == "3.1415926535897931");
  CHECK(jsonNum(0.1) == "0.10000000000000001");
  CHECK(jsonNum(1.0) == "1");
  // every double must survive the text round trip bit for bit
  for (double x : {-2.5e-300, 1.0 / 3.0, 6.02214076e23, 5e-324, -0.0,
                   1e308, 0.30000000000000004}) {
    CAPTURE(x);
    CHECK(std::strtod(jsonNum(x).c_str(), nullptr) == x);
  }
}

TEST_CASE("verdict serialization carries the theorem trace") {
  const ProcessSpec s = loadProcessSpec(dataFile("degenerate2d.json"));
  const Verdict v = decideH(s);
  REQUIRE(v.status == CheckStatus::fails);
  REQUIRE(v.decidedBy == "condition-s");

  const std::string js = serializeVerdict(v);
  CHECK(js.find("\"status\": \"fails\"") != std::string::npos);
  CHECK(js.find("\"decidedBy\": \"condition-s\"") != std::string::npos);
  CHECK(js.find("\"theorem\": \"condition-s-equivalence\"") !=
        std::string::npos);
  CHECK(js.find("\"evidence\"") != std::string::npos);
  // byte-determinism: serializing the same verdict twice is identical
  CHECK(js == serializeVerdict(decideH(s)));

  const std::string md = verdictMarkdown(v);
  CHECK(md.find("| condition-s | condition-s-equivalence | fails |") !=
        std::string::npos);
}

TEST_CASE("atomic file writes land complete and replace cleanly") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "levyh_io_test";
  fs::create_directories(dir);
  const std::string path = (dir / "out.json").string();

  writeFileAtomic(path, "first\n");
  CHECK(slurp(path) == "first\n");
  writeFileAtomic(path, "second\n");
  CHECK(slurp(path) == "second\n");
  CHECK_FALSE(fs::exists(path + ".tmp"));

  const ProcessSpec s = loadProcessSpec(dataFile("degenerate2d.json"));
  saveProcessSpec(s, path);
  const ProcessSpec back = loadProcessSpec(path);
  CHECK(serializeProcessSpec(back) == serializeProcessSpec(s));
  fs::remove_all(dir);
}

TEST_CASE("projected specs serialize like any other spec") {
  const ProcessSpec s = loadProcessSpec(dataFile("degenerate2d.json"));
  Eigen::MatrixXd basis(2, 1);
  basis << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
  ProcessSpec proj;
  proj.triplet = projectTriplet(s.triplet, basis).projectedTriplet;
  proj.assertions = s.assertions;

  const std::string js = serializeProcessSpec(proj);
  const ProcessSpec back = parseProcessSpec(js);
  CHECK(back.triplet.dim() == 1);
  CHECK(back.triplet.Q(0, 0) == 0.0);
  CHECK(back.triplet.a(0) == proj.triplet.a(0));
  CHECK(serializeProcessSpec(back) == js);
}
