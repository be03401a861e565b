#include <doctest.h>

#include <cmath>

#include "uukin/distribution.hpp"
#include "uukin/error.hpp"
#include "uukin/grid.hpp"

using namespace uukin;

TEST_CASE("geometric grid endpoints and ratio") {
  const GridPtr g = RadialGrid::geometric(64, 1e-4, 1e2);
  CHECK(g->size() == 64);
  CHECK(g->eps_min() == doctest::Approx(1e-4));
  CHECK(g->eps_max() == doctest::Approx(1e2));
  const double r0 = g->node(1) / g->node(0);
  CHECK(g->node(40) / g->node(39) == doctest::Approx(r0).epsilon(1e-12));
}

TEST_CASE("weights integrate sqrt(eps) over [0, eps_max]") {
  const GridPtr g = RadialGrid::geometric(400, 1e-6, 4.0);
  for (int order : {2, 4}) {
    const auto w = g->weights(order);
    double s = 0.0;
    for (std::size_t i = 0; i < g->size(); ++i) s += w[i] * std::sqrt(g->node(i));
    CHECK(s == doctest::Approx(2.0 / 3.0 * 8.0).epsilon(order == 4 ? 1e-5 : 1e-4));
  }
}

TEST_CASE("locate and interpolate") {
  const GridPtr g = RadialGrid::uniform(5, 1.0, 5.0);
  CHECK(g->locate(0.5) == 0);
  CHECK(g->locate(2.5) == 1);
  CHECK(g->locate(9.0) == 3);
  const std::vector<double> v{1, 2, 3, 4, 5};
  CHECK(g->interpolate(v, 2.5) == doctest::Approx(2.5));
  CHECK(g->interpolate(v, 0.2) == 1.0);
  CHECK(g->interpolate(v, 7.0) == 0.0);
}

TEST_CASE("bad grids are rejected") {
  CHECK_THROWS_AS(RadialGrid::geometric(1, 1e-4, 1.0), DomainError);
  CHECK_THROWS_AS(RadialGrid::geometric(10, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(RadialGrid::uniform(10, 2.0, 1.0), DomainError);
  CHECK_THROWS_AS(RadialGrid::from_nodes({1.0, 1.0, 2.0}), DomainError);
}

TEST_CASE("bose initial data") {
  const GridPtr g = RadialGrid::geometric(32, 1e-3, 10.0);
  const DistributionIso f = initial_bose(0.5, ThetaProfile{}, g);
  const double e = g->node(3);
  CHECK(f[3] == doctest::Approx(0.5 * std::exp(-e) / (1.0 - 0.5 * std::exp(-e))));
  CHECK(f.nonnegative());
  CHECK_THROWS_AS(initial_bose(1.2, ThetaProfile{}, g), DomainError);
  CHECK_THROWS_AS(initial_bose(-0.1, ThetaProfile{}, g), DomainError);
  const ThetaProfile p = ThetaProfile::from_string("exp_poly", 2.0);
  CHECK_FALSE(p.monotone());
  CHECK(p(1.0) == doctest::Approx(3.0 * std::exp(-1.0)));
  CHECK_THROWS(ThetaProfile::from_string("gauss"));
}
