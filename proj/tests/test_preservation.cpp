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

TEST_CASE("minimal image coefficient on the boundary grid", "[preservation]") {
  // identity modulus: the boundary objective is constantly 1
  auto id = minimal_k2(Modulus::identity(), 1.0);
  CHECK(id.k2_estimate == Approx(1.0).epsilon(1e-9));
  REQUIRE(id.k2_closed_form);
  CHECK(*id.k2_closed_form == 1.0);
  CHECK(id.scope == "numeric estimate");
  CHECK_FALSE(id.grid_spec.empty());

  // sqrt modulus at K1 = 4: the supremum K1^alpha = 2 sits at the limit
  // candidate, so the estimate is exact
  auto root = minimal_k2(Modulus::power(1.0, 0.5), 4.0);
  CHECK(root.k2_estimate == 2.0);
  CHECK(*root.k2_closed_form == 2.0);

  // linear modulus: every boundary point realizes C*K1
  auto lin = minimal_k2(Modulus::power(2.0, 1.0), 3.0);
  CHECK(lin.k2_estimate == Approx(6.0).epsilon(1e-9));
  CHECK(*lin.k2_closed_form == 6.0);

  // exponent above 1: interior symmetric point, no closed form claimed
  auto quad = minimal_k2(Modulus::power(1.0, 2.0), 1.0);
  CHECK_FALSE(quad.k2_closed_form);
  CHECK(quad.k2_estimate == Approx(2.0).epsilon(1e-3));

  CHECK(code_of([] { minimal_k2(Modulus::identity(), 0.5); }) == ErrorCode::InvalidSpec);
  CHECK(code_of([] {
          minimal_k2(Modulus::identity(), 1.0, BoundaryGrid{0, 1e-6, 1e8});
        }) == ErrorCode::InvalidSpec);
  CHECK(code_of([] {
          minimal_k2(Modulus::identity(), 1.0, BoundaryGrid{16, 0.5, 1.2});
        }) == ErrorCode::InvalidSpec);
}

TEST_CASE("boundary grid estimates are stable under refinement", "[preservation]") {
  auto eta = Modulus::piecewise_linear({{0.0, 0.0}, {1.0, 0.5}, {4.0, 8.0}}, 2.0);
  auto coarse = minimal_k2(eta, 2.0, BoundaryGrid{4096, 1e-6, 1e8});
  auto fine = minimal_k2(eta, 2.0, BoundaryGrid{8192, 1e-6, 1e8});
  CHECK(std::fabs(coarse.k2_estimate - fine.k2_estimate) / fine.k2_estimate < 1e-3);
}

TEST_CASE("realizable ratio pairs bound the coefficient exactly", "[preservation]") {
  auto flat = minimal_k2_realizable(Modulus::identity(), equilateral(4));
  CHECK(flat.k2_estimate == 1.0);  // objective is 1/2 everywhere, clamped
  CHECK(flat.scope == "exact over realizable ratio pairs");

  auto spiked = minimal_k2_realizable(Modulus::identity(), spike());
  CHECK(spiked.k1 == 2.0);
  CHECK(spiked.k2_estimate == 2.0);  // ratio pair (4,4) gives 16/8

  // the realizable supremum never exceeds the boundary-grid one materially
  for (std::size_t i = 0; i < 8; ++i) {
    auto X = generate(mixed_spec(i)).space;
    auto eta = Modulus::power(1.0, 0.5);
    auto real = minimal_k2_realizable(eta, X);
    auto universal = minimal_k2(eta, real.k1);
    CHECK(real.k2_estimate <= universal.k2_estimate * (1.0 + 1e-9));
  }
}

TEST_CASE("preservation conditions combine three grid checks", "[preservation]") {
  auto good = check_preservation_conditions(Modulus::power(1.0, 0.7), 1.0, 1.0);
  CHECK(good.holds());
  REQUIRE(good.parts.size() == 3);
  CHECK(good.parts[0].check == "supermultiplicative");
  CHECK(good.parts[1].check == "subadditive");
  CHECK(good.parts[2].check == "scaling_bound");

  CHECK(check_preservation_conditions(Modulus::power(1.0, 0.3), 1.0, 1.0).holds());
  CHECK(check_preservation_conditions(Modulus::identity(), 2.0, 2.0).holds());

  auto doubled = check_preservation_conditions(Modulus::power(2.0, 1.0), 1.0, 1.0);
  CHECK(doubled.verdict == Verdict::Violated);
  CHECK(doubled.parts[0].verdict == Verdict::Violated);  // supermultiplicativity
}

TEST_CASE("bi-Lipschitz constant of a map", "[preservation]") {
  auto X = worked_three_point();
  CHECK(bilipschitz_constant(identity_map(X)) == 1.0);

  std::vector<double> tripled(X.flat());
  for (double& v : tripled) v *= 3.0;
  auto expanded = identity_onto(X, validate_flat(X.labels(), std::move(tripled)));
  CHECK(bilipschitz_constant(expanded) == 3.0);

  std::vector<double> shrunk(X.flat());
  for (double& v : shrunk) v /= 3.0;
  auto contracted = identity_onto(X, validate_flat(X.labels(), std::move(shrunk)));
  CHECK(bilipschitz_constant(contracted) == 3.0);
}

TEST_CASE("image coefficient against the bi-Lipschitz bound", "[preservation]") {
  auto X = worked_three_point();
  std::vector<double> tripled(X.flat());
  for (double& v : tripled) v *= 3.0;
  auto f = identity_onto(X, validate_flat(X.labels(), std::move(tripled)));
  auto rep = check_bilipschitz_bound(f);
  CHECK(rep.k1 == 1.0);
  CHECK(*rep.bilipschitz == 3.0);
  CHECK(rep.k2_estimate == 9.0);
  CHECK(*rep.k2_empirical == 1.0);
  CHECK(rep.holds);
  CHECK(rep.scope == "exact");

  PointMap partial(X, two_cherry(), {0, 1, 2});
  CHECK(code_of([&] { check_bilipschitz_bound(partial); }) == ErrorCode::NotSurjective);
}

TEST_CASE("generated bi-Lipschitz images respect the bound", "[preservation]") {
  for (std::size_t i = 0; i < 10; ++i) {
    auto inst = generate(mixed_spec(4 + 5 * i));  // bilipschitz kind
    REQUIRE(inst.map);
    CHECK(check_bilipschitz_bound(*inst.map).holds);
  }
}

TEST_CASE("image coefficient never exceeds the modulus estimate", "[preservation]") {
  for (std::size_t i = 0; i < 8; ++i) {
    auto inst = generate(mixed_spec(3 + 5 * i));  // snowflake kind
    REQUIRE(inst.map);
    auto rep = verify_image_coefficient_bound(*inst.map, *inst.control);
    CHECK(rep.holds);
    REQUIRE(rep.k2_empirical);
    CHECK(*rep.k2_empirical <= rep.k2_estimate * (1.0 + 1e-9));
  }

  auto X = worked_three_point();
  PointMap partial(X, two_cherry(), {0, 1, 2});
  CHECK(code_of([&] { verify_image_coefficient_bound(partial, Modulus::identity()); }) ==
        ErrorCode::NotSurjective);
  auto snow = identity_onto(X, snowflake(X, 0.5));
  CHECK(code_of([&] { verify_image_coefficient_bound(snow, Modulus::identity()); }) ==
        ErrorCode::NotQuasisymmetric);
}
