#include <catch2/catch_amalgamated.hpp>

#include "l2hodge/catalog.hpp"
#include "l2hodge/manifest.hpp"

using namespace l2hodge;

TEST_CASE("minimal cylinder-end manifest loads") {
  const char* text = R"({
    "schema_version": "1",
    "metric": "b",
    "profile": {
      "n": 2, "b": 1, "f": 0,
      "betti_M": [1, 1, 0],
      "betti_dM": [1, 1],
      "betti_B": [1, 1],
      "betti_F": [1],
      "restriction_ranks": [1, 1]
    }
  })";
  Manifest m = load_manifest(text);
  CHECK(m.metric == MetricKind::B);
  CHECK(m.profile.n == 2);
  CHECK(m.profile.restriction_ranks == Dims{1, 1});
}

TEST_CASE("broken manifests are rejected with named causes") {
  // Asymmetric boundary Betti numbers.
  const char* asym = R"({
    "schema_version": "1",
    "metric": "b",
    "profile": {
      "n": 2, "b": 1, "f": 0,
      "betti_M": [1, 1, 0],
      "betti_dM": [1, 2],
      "betti_B": [1, 2],
      "betti_F": [1]
    }
  })";
  CHECK_THROWS_MATCHES(load_manifest(asym), ValidationError,
                       Catch::Matchers::MessageMatches(
                           Catch::Matchers::ContainsSubstring("Poincare")));

  CHECK_THROWS_MATCHES(load_manifest("{not json"), ValidationError,
                       Catch::Matchers::MessageMatches(
                           Catch::Matchers::ContainsSubstring("parse error")));

  const char* badver = R"({"schema_version": "99", "metric": "b",
    "profile": {"n":2,"b":1,"f":0,"betti_M":[1,1,0],"betti_dM":[1,1],
                "betti_B":[1,1],"betti_F":[1]}})";
  CHECK_THROWS_MATCHES(load_manifest(badver), ValidationError,
                       Catch::Matchers::MessageMatches(
                           Catch::Matchers::ContainsSubstring("schema_version")));

  // Scattering with a nontrivial fibre violates the metric-class invariant.
  const char* scat = R"({"schema_version": "1", "metric": "scattering",
    "profile": {"n":4,"b":2,"f":1,"betti_M":[1,0,0,0,0],"betti_dM":[1,0,0,1],
                "betti_B":[1,0,1],"betti_F":[1,1]}})";
  CHECK_THROWS_MATCHES(load_manifest(scat), ValidationError,
                       Catch::Matchers::MessageMatches(
                           Catch::Matchers::ContainsSubstring("f = 0")));

  // Matrix shape disagreeing with its declared entries.
  const char* badmat = R"({"schema_version": "1", "metric": "b",
    "profile": {"n":2,"b":1,"f":0,"betti_M":[1,1,0],"betti_dM":[1,1],
                "betti_B":[1,1],"betti_F":[1],
                "restriction": [{"rows":1,"cols":1,"entries":["1","2"]},
                                 {"rows":1,"cols":1,"entries":["1"]}]}})";
  CHECK_THROWS_MATCHES(load_manifest(badmat), ValidationError,
                       Catch::Matchers::MessageMatches(
                           Catch::Matchers::ContainsSubstring("rows*cols")));
}

TEST_CASE("rational parsing accepts integers and p/q strings") {
  CHECK(parse_rat("3/4") == Rat(3, 4));
  CHECK(parse_rat("-7") == Rat(-7));
  CHECK(parse_rat("-6/4") == Rat(-3, 2));
  CHECK_THROWS_AS(parse_rat("1/0"), ValidationError);
  CHECK_THROWS_AS(parse_rat("x"), ValidationError);
  CHECK(rat_to_string(Rat(-3, 2)) == "-3/2");
  CHECK(rat_to_string(Rat(5)) == "5");
}

TEST_CASE("emit-parse round trip is the identity on every shipped entry") {
  for (const CatalogEntry& e : builtin_catalog()) {
    CAPTURE(e.name);
    std::string text = emit_manifest(e.manifest);
    Manifest back = load_manifest(text);
    CHECK(back == e.manifest);
    // Double round trip: the emitted text is a fixed point.
    CHECK(emit_manifest(back) == text);
  }
}

TEST_CASE("spectrum and expected blocks validate") {
  const char* spec = R"({"schema_version": "1", "metric": "b",
    "profile": {"n":2,"b":1,"f":0,"betti_M":[1,1,0],"betti_dM":[1,1],
                "betti_B":[1,1],"betti_F":[1]},
    "spectrum": {"eigenvalues": [{"lambda_sq": "9/4", "degree": 0},
                                  {"lambda_sq": 1, "degree": 1, "multiplicity": 2}]},
    "expected": {"dims": [0, 1, 0]}})";
  Manifest m = load_manifest(spec);
  REQUIRE(m.spectrum.has_value());
  CHECK(m.spectrum->eigenvalues.size() == 2);
  CHECK(m.spectrum->eigenvalues[0].lambda_sq == Rat(9, 4));
  CHECK(m.spectrum->eigenvalues[1].multiplicity == 2);
  CHECK(m.expected == Dims{0, 1, 0});

  const char* neg = R"({"schema_version": "1", "metric": "b",
    "profile": {"n":2,"b":1,"f":0,"betti_M":[1,1,0],"betti_dM":[1,1],
                "betti_B":[1,1],"betti_F":[1]},
    "spectrum": {"eigenvalues": [{"lambda_sq": "-1", "degree": 0}]}})";
  CHECK_THROWS_AS(load_manifest(neg), ValidationError);
}
