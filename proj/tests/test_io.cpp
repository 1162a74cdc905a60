#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "entwine/io.hpp"
#include "support.hpp"

using namespace entwine;

namespace {

StructureFile z2_file() {
  return StructureFile{"z2 translation", Field::rationals(),
                       support::zn_translation<Rat>(2)};
}

}  // namespace

TEST_CASE("structure files round trip byte identically") {
  StructureFile f = z2_file();
  Json j1 = structure_json(f);
  StructureFile back = load_structure(Json::parse(pretty_json(j1)));
  CHECK(back.name == f.name);
  CHECK(back.field == f.field);
  CHECK(validate(back.s).ok());
  CHECK(back.s.psi.at(1, 1) == f.s.psi.at(1, 1));
  CHECK(pretty_json(structure_json(back)) == pretty_json(j1));
}

TEST_CASE("cochain files round trip and preserve sparse order") {
  DVec<Rat> g = zero_vec<Rat>(2 * 2 * 2);
  g(3) = Rat(1, 2);
  g(5) = Rat(-2);
  Json cj = cochain_json(g, 1, 2, 2);
  CochainFile cf = load_cochain(cj, 2, 2);
  CHECK(cf.degree == 1);
  CHECK(dvec_equal(cf.values, g));
  CHECK(cochain_json(cf.values, 1, 2, 2).dump() == cj.dump());
}

TEST_CASE("non-unital algebras round trip") {
  auto s = flip_entwining(support::quadratic_algebra<Rat>(Rat(0), Rat(0)),
                          support::coalgebra_k<Rat>());
  s.A.unital = false;
  s.A.unit = zero_vec<Rat>(2);
  Json j = structure_json(s, Field::rationals());
  StructureFile f = load_structure(j);
  CHECK(!f.s.A.unital);
  CHECK(structure_json(f).dump() == j.dump());
}

TEST_CASE("positioned errors on malformed files") {
  Json good = structure_json(z2_file());
  auto expect_throw = [&](Json j, const std::string& fragment) {
    try {
      load_structure(j);
      FAIL_CHECK("no error for " << fragment);
    } catch (const EntwineError& e) {
      INFO(e.what());
      CHECK(std::string(e.what()).find(fragment) != std::string::npos);
    }
  };
  Json j = good;
  j["format"] = "nope";
  expect_throw(j, "entwining-structure");
  j = good;
  j["field"] = "fp:4";
  expect_throw(j, "prime");
  j = good;
  j["algebra"]["mul"].push_back({0, 0, 0, "1"});
  expect_throw(j, "duplicate");
  j = good;
  j["psi"][0][2] = 9;
  expect_throw(j, "out of range");
  j = good;
  j["algebra"]["dim"] = 64;
  expect_throw(j, "load cap");
  j = good;
  j["algebra"]["mul"][0][3] = "1/0";
  expect_throw(j, "parse");
  j = good;
  j.erase("coalgebra");
  expect_throw(j, "coalgebra");
}

TEST_CASE("cochain entries must match the declared degree") {
  Json j;
  j["format"] = "entwined-cochain";
  j["degree"] = 1;
  j["entries"] = Json::array({Json::array({0, 1, "1"})});  // one letter short
  CHECK_THROWS_AS(load_cochain(j, 2, 2), EntwineError);
}

TEST_CASE("file level io and digests") {
  StructureFile f = z2_file();
  std::string path = "/tmp/entwine_io_test.json";
  text_to_file(path, pretty_json(structure_json(f)));
  StructureFile back = load_structure_file(path);
  CHECK(back.name == f.name);
  CHECK(json_digest(structure_json(back)) == json_digest(structure_json(f)));
  CHECK_THROWS_AS(json_from_file("/tmp/entwine_missing.json"), EntwineError);
  text_to_file("/tmp/entwine_bad.json", "{ not json");
  CHECK_THROWS_AS(json_from_file("/tmp/entwine_bad.json"), EntwineError);
}

TEST_CASE("pretty printer keeps entry tuples on one line") {
  Json j = structure_json(z2_file());
  std::string text = pretty_json(j);
  CHECK(text.find("[1, 1, 1, 0, \"1\"]") != std::string::npos);
  CHECK(Json::parse(text).dump() == j.dump());
}
