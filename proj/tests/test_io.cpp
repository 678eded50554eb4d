#include <doctest.h>

#include "fcs/errors.hpp"
#include "fcs/fixtures.hpp"
#include "fcs/io.hpp"

using namespace fcs;
using nlohmann::json;

TEST_CASE("system files round-trip") {
  SystemFile sf;
  sf.sys = aklt_system();
  sf.rho = CMatrix(CMatrix::Identity(2, 2) / 2.0);
  sf.name = "aklt";
  sf.description = "test";
  const std::string text = serialize_system(sf);
  const SystemFile back = parse_system(text);
  CHECK(back.sys.n() == 2);
  CHECK(back.sys.d() == 3);
  for (Index k = 0; k < 3; ++k) CHECK((back.sys[k] - sf.sys[k]).norm() == 0.0);
  REQUIRE(back.rho.has_value());
  CHECK((*back.rho - *sf.rho).norm() == 0.0);
  CHECK(back.name == "aklt");
  CHECK(serialize_system(back) == text);
}

TEST_CASE("Bernoulli amplitudes serialize exactly") {
  const std::string text = serialize_system({make_fixture("bernoulli-uniform").sys, std::nullopt, 1e-9, "b", ""});
  CHECK(text.find("0.7071067811865476") != std::string::npos);
}

TEST_CASE("malformed system files") {
  CHECK_THROWS_AS(parse_system("{"), ParseError);
  CHECK_THROWS_AS(parse_system("{}"), ParseError);
  const json good = json::parse(serialize_system({make_fixture("bernoulli-basis").sys, std::nullopt, 1e-9, "", ""}));
  json j = good;
  j["format"] = "other";
  CHECK_THROWS_AS(parse_system(j.dump()), ParseError);
  j = good;
  j["d"] = 3;
  CHECK_THROWS_AS(parse_system(j.dump()), ParseError);
  j = good;
  j["v"][0][0][0] = json::array({1.0});
  CHECK_THROWS_AS(parse_system(j.dump()), ParseError);
  j = good;
  j["v"][0][0][0] = "x";
  CHECK_THROWS_AS(parse_system(j.dump()), ParseError);
  j = good;
  j["tol"] = -1;
  CHECK_THROWS_AS(parse_system(j.dump()), ParseError);
  // one letter is a shape error, not a parse error
  j = good;
  j["d"] = 1;
  j["v"] = json::array({j["v"][0]});
  CHECK_THROWS_AS(parse_system(j.dump()), ValidationError);
}

TEST_CASE("sha256") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

namespace {

ReportFile sample_report() {
  ReportFile rf;
  rf.provenance.input_name = "aklt";
  rf.provenance.input_sha256 = sha256_hex("x");
  rf.provenance.versions = library_versions();
  rf.report = purity_battery(aklt_system());
  rf.certificate_chain = certificate_chain(rf.report, rf.provenance.subspace_tol);
  rf.infinite_volume_note = infinite_volume_note();
  rf.amalgam_status = "disabled";
  return rf;
}

}  // namespace

TEST_CASE("reports round-trip losslessly") {
  ReportFile rf = sample_report();
  AmalgamSummary a;
  a.level = 2;
  a.lambda_monotone = true;
  a.moment_deviation = 1e-14;
  a.ok = a.passes(1e-8);
  rf.amalgam = a;
  rf.amalgam_status = "built";
  rf.provenance.timings_ms = {{"battery", 1.5}};
  const json j = to_json(rf);
  const ReportFile back = report_from_json(j);
  CHECK(to_json(back) == j);
  CHECK(serialize_report(back) == serialize_report(rf));
  CHECK(j["report"]["is_pure"] == true);
  CHECK(j["infinite_volume"].get<std::string>().find("indirectly") != std::string::npos);
}

TEST_CASE("inconsistent reports are rejected") {
  const json j = to_json(sample_report());
  json bad = j;
  bad["report"]["is_factor"] = false;
  CHECK_THROWS_AS(report_from_json(bad), ConsistencyError);
  bad = j;
  bad["certificate_chain"][2]["ok"] = false;
  CHECK_THROWS_AS(report_from_json(bad), ConsistencyError);
  bad = j;
  bad["report"]["gauge_group"]["description"] = "Z7";
  CHECK_THROWS_AS(report_from_json(bad), ConsistencyError);
  bad = j;
  bad["report"].erase("is_pure");
  CHECK_THROWS_AS(report_from_json(bad), ParseError);
}
