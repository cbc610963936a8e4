#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <functional>
#include <vector>

#include "metricforge/metricforge.hpp"
#include "support/oracles.hpp"

using namespace metricforge;
using namespace testsupport;
using Catch::Approx;

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

PointMap identity_onto(const FiniteSemimetricSpace& source,
                       const FiniteSemimetricSpace& target) {
  std::vector<std::size_t> assignment(source.size());
  for (std::size_t i = 0; i < assignment.size(); ++i) assignment[i] = i;
  return PointMap(source, target, std::move(assignment));
}

}  // namespace

TEST_CASE("diameter distortion on the collinear triple", "[distortion]") {
  auto X = worked_three_point();
  auto f = identity_onto(X, snowflake(X, 0.5));
  auto eta = Modulus::power(1.0, 0.5);
  auto rep = check_diameter_distortion(f, eta, SubsetRef{{0, 1}}, SubsetRef{{0, 1, 2}});
  CHECK(rep.diam_a == 1.0);
  CHECK(rep.diam_b == 2.0);
  CHECK(rep.k1 == 1.0);
  CHECK(rep.k2 == 1.0);
  CHECK(rep.ratio == Approx(0.70711).margin(5e-6));
  CHECK(rep.lower_bound == Approx(0.35355).margin(5e-6));
  CHECK(rep.upper_bound == 1.0);  // eta(2*1*1/2) = eta(1)
  CHECK(rep.holds);
  CHECK_FALSE(rep.coefficients_overridden);
}

TEST_CASE("diameter distortion when A equals B", "[distortion]") {
  auto X = worked_three_point();
  auto f = identity_map(X);
  auto rep = check_diameter_distortion(f, Modulus::identity(), SubsetRef{{0, 1, 2}},
                                       SubsetRef{{0, 1, 2}});
  CHECK(rep.ratio == 1.0);
  CHECK(rep.lower_bound == 0.5);
  CHECK(rep.upper_bound == 2.0);
  CHECK(rep.holds);
}

TEST_CASE("diameter distortion validates its inputs in order", "[distortion]") {
  auto X = worked_three_point();
  auto f = identity_map(X);
  auto id = Modulus::identity();
  CHECK(code_of([&] {
          check_diameter_distortion(f, id, SubsetRef{{0, 9}}, SubsetRef{{0, 1, 2}});
        }) == ErrorCode::IndexOutOfRange);
  CHECK(code_of([&] {
          check_diameter_distortion(f, id, SubsetRef{{0, 1}}, SubsetRef{{1, 2}});
        }) == ErrorCode::NotNested);
  CHECK(code_of([&] {
          check_diameter_distortion(f, id, SubsetRef{{0}}, SubsetRef{{0, 1}});
        }) == ErrorCode::DegenerateA);
  CHECK(code_of([&] {
          check_diameter_distortion(f, id, SubsetRef{{}}, SubsetRef{{0, 1}});
        }) == ErrorCode::InvalidSpec);
  auto snow = identity_onto(X, snowflake(X, 0.5));
  CHECK(code_of([&] {
          check_diameter_distortion(snow, id, SubsetRef{{0, 1}}, SubsetRef{{0, 1, 2}});
        }) == ErrorCode::NotQuasisymmetric);
}

TEST_CASE("coefficient overrides are honored and flagged", "[distortion]") {
  auto X = worked_three_point();
  auto f = identity_map(X);
  CoefficientOverride ov;
  ov.k2 = 4.0;
  auto rep = check_diameter_distortion(f, Modulus::identity(), SubsetRef{{0, 1}},
                                       SubsetRef{{0, 1, 2}}, {}, 0, ov);
  CHECK(rep.coefficients_overridden);
  CHECK(rep.k2 == 4.0);
  CHECK(rep.k1 == 1.0);  // untouched, recomputed
  CHECK(rep.lower_bound == Approx(1.0 / 16.0));  // 1/(2*4*eta(2))
}

TEST_CASE("product lower bound for diameter ratios", "[distortion]") {
  auto rep = check_diameter_product_bound(Modulus::identity(), 1.0, 1.0, 1.0);
  CHECK(rep.holds());
  CHECK(rep.values.at("lhs") == 4.0);  // 2*1*eta(2)*eta(1)

  auto tiny = check_diameter_product_bound(Modulus::power(0.1, 1.0), 1.0, 1.0, 1.0);
  CHECK(tiny.verdict == Verdict::Violated);
  CHECK(tiny.values.at("lhs") == Approx(0.04));

  CHECK(code_of([] {
          check_diameter_product_bound(Modulus::identity(), 0.5, 1.0, 1.0);
        }) == ErrorCode::InvalidSpec);
  CHECK(code_of([] {
          check_diameter_product_bound(Modulus::identity(), 1.0, 1.0, 0.0);
        }) == ErrorCode::InvalidRatio);
  CHECK(code_of([] {
          check_diameter_product_bound(Modulus::identity(), 1.0, 1.0, 1.5);
        }) == ErrorCode::InvalidRatio);
}

TEST_CASE("exhaustive sweep enumerates every nested pair once", "[distortion]") {
  auto X = worked_three_point();
  auto result = sweep_subsets(identity_map(X), Modulus::identity(), Exhaustive{});
  CHECK(result.pairs_checked == 7);
  CHECK(result.skipped_degenerate == 12);
  CHECK(result.violations == 0);
  REQUIRE(result.reports.size() == 7);
  // first B mask is {0,1}, whose only valid A is itself
  CHECK(result.reports[0].subset_b == std::vector<std::size_t>{0, 1});
  CHECK(result.reports[0].subset_a == std::vector<std::size_t>{0, 1});
  for (const auto& rep : result.reports) CHECK(rep.holds);

  auto nine = equilateral(9);
  CHECK(code_of([&] {
          sweep_subsets(identity_map(nine), Modulus::identity(), Exhaustive{});
        }) == ErrorCode::TooLargeForExhaustive);
}

TEST_CASE("exhaustive sweep order is independent of the worker count", "[distortion]") {
  auto X = generate(mixed_spec(5)).space;
  auto small = subspace(X, {0, 1, 2, 3, 4});
  auto f = identity_map(small);
  auto serial = sweep_subsets(f, Modulus::identity(), Exhaustive{}, {}, 1);
  auto split = sweep_subsets(f, Modulus::identity(), Exhaustive{}, {}, 4);
  REQUIRE(serial.reports.size() == split.reports.size());
  CHECK(serial.skipped_degenerate == split.skipped_degenerate);
  for (std::size_t i = 0; i < serial.reports.size(); ++i) {
    CHECK(serial.reports[i].subset_a == split.reports[i].subset_a);
    CHECK(serial.reports[i].subset_b == split.reports[i].subset_b);
    CHECK(serial.reports[i].ratio == split.reports[i].ratio);
  }
}

TEST_CASE("sampled sweeps are reproducible by seed", "[distortion]") {
  auto inst = generate(mixed_spec(13));  // snowflake kind, larger inner space
  REQUIRE(inst.map);
  auto a = sweep_subsets(*inst.map, *inst.control, Sampled{25, 11});
  auto b = sweep_subsets(*inst.map, *inst.control, Sampled{25, 11});
  REQUIRE(a.reports.size() == 25);
  CHECK(a.violations == 0);
  for (std::size_t i = 0; i < a.reports.size(); ++i) {
    CHECK(a.reports[i].subset_a == b.reports[i].subset_a);
    CHECK(a.reports[i].subset_b == b.reports[i].subset_b);
  }
  auto c = sweep_subsets(*inst.map, *inst.control, Sampled{25, 12});
  bool all_same = true;
  for (std::size_t i = 0; i < a.reports.size(); ++i)
    if (a.reports[i].subset_b != c.reports[i].subset_b) all_same = false;
  CHECK_FALSE(all_same);
}

TEST_CASE("sweep rejects an undominated modulus up front", "[distortion]") {
  auto X = worked_three_point();
  auto snow = identity_onto(X, snowflake(X, 0.5));
  CHECK(code_of([&] { sweep_subsets(snow, Modulus::identity(), Exhaustive{}); }) ==
        ErrorCode::NotQuasisymmetric);
}
