#include <doctest.h>

#include <cmath>

#include "uukin/error.hpp"
#include "uukin/params.hpp"

using namespace uukin;

TEST_CASE("nondimensional epsilon") {
  const PhysicalParams p{1.44e-25, 5.3e-9, 4e-7, 4e-7, 0.0, 0.0};
  const NonDimParams nd = nondimensionalize(p);
  const double expect = 8.0 * constants::pi * 5.3e-9 * 4e-7 * 4e-7 / (4e-7 * 4e-7 * 4e-7);
  CHECK(nd.epsilon == doctest::Approx(expect).epsilon(1e-14));
  CHECK(nd.occupancy_c == doctest::Approx(std::pow(1.0 / (2.0 * constants::pi), 3)));
  CHECK_FALSE(nd.free_gas);
}

TEST_CASE("free gas and strong coupling are flagged") {
  PhysicalParams p{1.44e-25, 0.0, 4e-7, 4e-7, 0.0, 0.0};
  const NonDimParams nd = nondimensionalize(p);
  CHECK(nd.free_gas);
  CHECK(std::isinf(nd.time_scale));
  p.scattering_length = 1e-7;
  const NonDimParams strong = nondimensionalize(p);
  CHECK(strong.weak_coupling_strained);
  CHECK_FALSE(strong.warnings.empty());
}

TEST_CASE("invalid physical input") {
  CHECK_THROWS_AS(nondimensionalize(PhysicalParams{-1.0, 5e-9, 4e-7, 4e-7, 0, 0}), DomainError);
  CHECK_THROWS_AS(nondimensionalize(PhysicalParams{1e-25, -5e-9, 4e-7, 4e-7, 0, 0}), DomainError);
  CHECK_THROWS_AS(nondimensionalize(PhysicalParams{1e-25, 5e-9, 4e-7, 4e-7, 1.0, 0}), DomainError);
}
