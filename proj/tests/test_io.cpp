#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "metricforge/metricforge.hpp"
#include "support/oracles.hpp"

using namespace metricforge;
using namespace testsupport;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::ParseError;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

json reload(const std::filesystem::path& path) {
  std::ifstream in(path);
  return json::parse(in);
}

}  // namespace

TEST_CASE("space files round trip bit for bit", "[io]") {
  TempDir dir("mf-io");
  auto X = generate(mixed_spec(0)).space;  // full-precision random entries
  write_space(dir.path("space.json"), X);
  auto Y = read_space(dir.path("space.json"));
  CHECK(Y.labels() == X.labels());
  CHECK(Y.flat() == X.flat());
}

TEST_CASE("modulus files round trip bit for bit", "[io]") {
  TempDir dir("mf-io");

  auto power = Modulus::power(2.0, 0.5);
  write_modulus(dir.path("power.json"), power);
  auto power2 = read_modulus(dir.path("power.json"));
  REQUIRE(power2.as_power());
  CHECK(power2.as_power()->scale == 2.0);
  CHECK(power2.as_power()->exponent == 0.5);
  CHECK(power2.eval(1.7) == power.eval(1.7));

  auto pwl = Modulus::piecewise_linear({{0.0, 0.0}, {1.0, 0.75}, {2.5, 3.0}}, 1.25);
  write_modulus(dir.path("pwl.json"), pwl);
  auto pwl2 = read_modulus(dir.path("pwl.json"));
  REQUIRE(pwl2.as_piecewise());
  CHECK(pwl2.as_piecewise()->anchors == pwl.as_piecewise()->anchors);
  CHECK(pwl2.as_piecewise()->final_slope == 1.25);
  for (double t : {0.3, 1.0, 1.9, 7.0}) CHECK(pwl2.eval(t) == pwl.eval(t));
}

TEST_CASE("map files are written self-contained", "[io]") {
  TempDir dir("mf-io");
  auto inst = generate(mixed_spec(3));  // snowflake kind carries a map
  REQUIRE(inst.map);
  write_map(dir.path("map.json"), *inst.map);
  auto f = read_map(dir.path("map.json"));
  CHECK(f.assignment() == inst.map->assignment());
  CHECK(f.source().flat() == inst.map->source().flat());
  CHECK(f.target().flat() == inst.map->target().flat());

  auto j = reload(dir.path("map.json"));
  CHECK(j.at("source").is_object());
  CHECK(j.at("target").is_object());
}

TEST_CASE("map files may reference spaces by relative path", "[io]") {
  TempDir dir("mf-io");
  auto X = worked_three_point();
  write_space(dir.path("source.json"), X);
  write_space(dir.path("target.json"), snowflake(X, 0.5));
  write_text(dir.path("map.json"),
             R"({"source": "source.json", "target": "target.json",
                 "assignment": [0, 1, 2]})");
  auto f = read_map(dir.path("map.json"));
  CHECK(f.source().flat() == X.flat());
  CHECK(f.target().dist(0, 2) == std::pow(2.0, 0.5));

  // a dangling reference names the missing space file, not the map file
  write_text(dir.path("broken.json"),
             R"({"source": "nowhere.json", "target": "target.json", "assignment": [0]})");
  try {
    read_map(dir.path("broken.json"));
    FAIL("expected an Error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
    CHECK(e.message().find("nowhere.json") != std::string::npos);
  }
}

TEST_CASE("parse failures carry the file path and a stable code", "[io]") {
  TempDir dir("mf-io");

  CHECK(code_of([&] { read_space(dir.path("missing.json")); }) == ErrorCode::ParseError);

  write_text(dir.path("garbage.json"), "{oops");
  CHECK(code_of([&] { read_space(dir.path("garbage.json")); }) == ErrorCode::ParseError);

  write_text(dir.path("nofields.json"), R"({"labels": ["a", "b"]})");
  CHECK(code_of([&] { read_space(dir.path("nofields.json")); }) == ErrorCode::ParseError);

  write_text(dir.path("asym.json"),
             R"({"labels": ["a", "b"], "matrix": [[0, 1], [2, 0]]})");
  try {
    read_space(dir.path("asym.json"));
    FAIL("expected an Error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AsymmetricEntry);
    CHECK(e.message().starts_with(dir.path("asym.json")));
  }

  write_text(dir.path("badpwl.json"),
             R"({"family": "pwl", "anchors": [[0, 0], [1, -1]], "final_slope": 1})");
  CHECK(code_of([&] { read_modulus(dir.path("badpwl.json")); }) == ErrorCode::InvalidModulus);

  write_text(dir.path("badfamily.json"), R"({"family": "exp", "rate": 2})");
  CHECK(code_of([&] { read_modulus(dir.path("badfamily.json")); }) == ErrorCode::ParseError);

  write_text(dir.path("badmap.json"),
             R"({"source": {"labels": ["a", "b"], "matrix": [[0, 1], [1, 0]]},
                 "target": {"labels": ["a", "b"], "matrix": [[0, 1], [1, 0]]},
                 "assignment": [0, 5]})");
  CHECK(code_of([&] { read_map(dir.path("badmap.json")); }) == ErrorCode::InvalidAssignment);
}

TEST_CASE("check reports serialize sparsely", "[io]") {
  CheckReport plain;
  plain.check = "sample";
  auto j = check_report_to_json(plain);
  CHECK(j.at("check") == "sample");
  CHECK(j.at("verdict") == "holds");
  CHECK(j.at("scope") == "exact");
  CHECK_FALSE(j.contains("values"));
  CHECK_FALSE(j.contains("witness"));
  CHECK_FALSE(j.contains("parts"));

  CheckReport full;
  full.check = "outer";
  full.verdict = Verdict::Violated;
  full.values["excess"] = 0.125;
  full.witness = {4, 1, 2};
  full.parts.push_back(plain);
  auto k = check_report_to_json(full);
  CHECK(k.at("verdict") == "violated");
  CHECK(k.at("values").at("excess") == 0.125);
  CHECK(k.at("witness") == std::vector<std::size_t>{4, 1, 2});
  CHECK(k.at("parts").size() == 1);
}

TEST_CASE("report files reload with every double intact", "[io]") {
  TempDir dir("mf-io");
  auto X = generate(mixed_spec(1)).space;

  auto coeff = relaxation_constant(X);
  write_report(dir.path("coeff.json"), coefficient_report_to_json(coeff));
  auto j = reload(dir.path("coeff.json"));
  CHECK(j.at("raw_sup").get<double>() == coeff.raw_sup);
  CHECK(j.at("coefficient").get<double>() == coeff.coefficient);

  auto add = is_additive(X);
  write_report(dir.path("add.json"), additivity_report_to_json(add));
  auto a = reload(dir.path("add.json"));
  CHECK(a.at("holds").get<bool>() == add.holds);
  CHECK(a.at("quadruples_checked").get<std::size_t>() == add.quadruples_checked);
  if (add.has_witness) CHECK(a.at("slack").get<double>() == add.slack);

  auto scan = scan_tuple_implication(Modulus::power(1.0, 2.0), 500, 7, {}, 0, 0.1, 10.0);
  write_report(dir.path("scan.json"), tuple_scan_to_json(scan));
  auto s = reload(dir.path("scan.json"));
  CHECK(s.at("conclusion_failed").get<std::size_t>() == scan.conclusion_failed);
  if (scan.first_failure) {
    REQUIRE(s.at("first_failure").size() == 5);
    CHECK(s.at("first_failure")[0].get<double>() == scan.first_failure->t1);
    CHECK(s.at("first_failure")[4].get<double>() == scan.first_failure->t5);
  }
}
