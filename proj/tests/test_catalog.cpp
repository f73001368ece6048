#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

#include "l2hodge/catalog.hpp"
#include "l2hodge/report.hpp"

using namespace l2hodge;

TEST_CASE("every shipped entry passes its regression checks") {
  for (const CatalogEntry& e : builtin_catalog()) {
    CAPTURE(e.name);
    EntryReport rep = run_entry(e);
    for (const CheckLine& c : rep.checks) {
      CAPTURE(c.text);
      CHECK(c.ok);
    }
    CHECK(rep.passed());
  }
}

TEST_CASE("expected dims present for every shipped entry") {
  for (const CatalogEntry& e : builtin_catalog()) {
    CAPTURE(e.name);
    CHECK(e.manifest.expected.has_value());
    CHECK_FALSE(e.provenance.empty());
  }
}

TEST_CASE("headline dimensions from the example registry") {
  auto dims_of = [](const std::string& name) {
    return run_entry(catalog_entry(name)).table.dims;
  };
  CHECK(dims_of("ale_A4") == Dims{0, 0, 3, 0, 0});
  CHECK(dims_of("alf_A4") == Dims{0, 0, 4, 0, 0});
  CHECK(dims_of("alf_D4") == Dims{0, 0, 4, 0, 0});
  CHECK(dims_of("taub_nut") == Dims{0, 0, 1, 0, 0});
  CHECK(dims_of("atiyah_hitchin") == Dims{0, 0, 0, 0, 0});
  CHECK(dims_of("atiyah_hitchin_cover") == Dims{0, 0, 1, 0, 0});
  CHECK(dims_of("schwarzschild") == Dims{0, 0, 2, 0, 0});
  CHECK(dims_of("alg_D4") == Dims{0, 0, 4, 0, 0});
  CHECK(dims_of("calabi_tcpn") == Dims{0, 0, 0, 0, 1, 0, 0, 0, 0});
  CHECK(dims_of("stenzel_ts2k") == Dims{0, 0, 0, 0, 1, 0, 0, 0, 0});
  CHECK(dims_of("bryant_salamon_g2") == Dims{0, 0, 0, 1, 1, 0, 0, 0});
  CHECK(dims_of("gomis_g2") == Dims{0, 0, 0, 0, 0, 0, 0, 0});
  CHECK(dims_of("toric_hk") == Dims{0, 0, 1, 0, 0});
}

TEST_CASE("signature and tau values across the registry") {
  auto report = [](const std::string& name) {
    return run_entry(catalog_entry(name));
  };
  for (Count k = 1; k <= 4; ++k) {
    EntryReport rep = report("alf_A" + std::to_string(k));
    CHECK(rep.l2sig == -k);
    CHECK(rep.tau == -1);
  }
  CHECK(report("alf_D4").tau == -1);
  CHECK(report("alg_D4").tau == 0);
  CHECK(report("alg_D4").l2sig == -4);
  for (Count k = 2; k <= 5; ++k)
    CHECK(report("ale_A" + std::to_string(k)).l2sig == -(k - 1));
}

TEST_CASE("exported data files agree with the embedded registry") {
  for (const CatalogEntry& e : builtin_catalog()) {
    CAPTURE(e.name);
    std::ifstream in(std::string(L2HODGE_SOURCE_DIR) + "/data/catalog/" +
                     e.name + ".json");
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    Manifest m = load_manifest(ss.str());
    CHECK(m == e.manifest);
  }
}

TEST_CASE("json report schema is stable") {
  EntryReport rep = run_entry(catalog_entry("schwarzschild"));
  std::ostringstream os;
  print_entry_report(os, rep, OutputFormat::JsonFmt);
  Json j = Json::parse(os.str());
  for (const char* key : {"dims", "case_tags", "metric", "entry", "status"})
    CHECK(j.contains(key));
  CHECK(j["entry"] == "schwarzschild");
  CHECK(j["status"] == "pass");
  CHECK(j["metric"] == "fibred_boundary");
}

TEST_CASE("negative control: corrupted expectation fails the entry") {
  CatalogEntry e = catalog_entry("taub_nut");
  e.manifest.expected = Dims{0, 0, 2, 0, 0};
  EntryReport rep = run_entry(e);
  CHECK_FALSE(rep.passed());
}
