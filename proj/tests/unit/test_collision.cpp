#include <doctest.h>

#include <cmath>

#include "uukin/collision.hpp"
#include "uukin/error.hpp"
#include "uukin/parallel.hpp"

using namespace uukin;

namespace {

double sup(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, std::fabs(x));
  return s;
}

DistributionIso bump(const GridPtr& g) {
  std::vector<double> v(g->size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double x = g->node(i);
    v[i] = 0.3 * std::exp(-2.0 * x) + std::exp(-(x - 2.0) * (x - 2.0));
  }
  return DistributionIso(g, v);
}

}  // namespace

TEST_CASE("q factor vanishes on equilibrium quadruples") {
  const double c = 1.0, mu = -0.5;
  auto feq = [&](double e) { return c / std::expm1(e - mu); };
  const double e1 = 0.3, e2 = 1.7, e3 = 0.9, e4 = e1 + e2 - e3;
  CHECK(std::fabs(q_factor(feq(e1), feq(e2), feq(e3), feq(e4), c)) < 1e-15);
  CHECK(q_factor_classical(1, 2, 2, 1, c) == 0.0);
}

TEST_CASE("equilibrium is a fixed point") {
  const GridPtr g = RadialGrid::geometric(128, 1e-4, 1e2);
  const CollisionRate r = collision_rhs_iso(equilibrium(1.0, -0.5, 1.0, g), CollisionConfig{});
  CHECK(sup(r.rate) < 1e-10);
}

TEST_CASE("conservative form balances N and E to round-off") {
  const GridPtr g = RadialGrid::geometric(96, 1e-4, 1e2);
  const DistributionIso f = bump(g);
  const CollisionRate r = collision_rhs_iso(f, CollisionConfig{});
  const MomentReport m = moments(f);
  CHECK(std::fabs(r.number_rate) < 1e-12 * sup(r.rate) * m.number);
  CHECK(std::fabs(r.energy_rate) < 1e-12 * sup(r.rate) * m.energy);
  CHECK(entropy_production(f, r.rate) > 0.0);
}

TEST_CASE("pointwise and conservative forms agree at moderate resolution") {
  const GridPtr g = RadialGrid::geometric(160, 1e-4, 1e2);
  const DistributionIso f = bump(g);
  CollisionConfig a, b;
  b.symmetrize = false;
  const CollisionRate ra = collision_rhs_iso(f, a), rb = collision_rhs_iso(f, b);
  const std::size_t i = g->locate(1.0);
  CHECK(ra.rate[i] == doctest::Approx(rb.rate[i]).epsilon(2e-2));
}

TEST_CASE("classical limit keeps only the c^2 part") {
  const GridPtr g = RadialGrid::geometric(64, 1e-4, 1e2);
  CollisionConfig cfg;
  cfg.classical = true;
  std::vector<double> v(g->size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 0.01 * std::exp(-g->node(i));
  const CollisionRate r = collision_rhs_iso(DistributionIso(g, v), cfg);
  // a Maxwellian is stationary up to interpolation error; a bump is not
  const CollisionRate rb = collision_rhs_iso(bump(g), cfg);
  CHECK(sup(r.rate) < 1e-3 * sup(rb.rate));
}

TEST_CASE("input validation") {
  const GridPtr g = RadialGrid::geometric(16, 1e-4, 1e2);
  DistributionIso f = bump(g);
  f[3] = -1e-3;
  CHECK_THROWS_AS(collision_rhs_iso(f, CollisionConfig{}), DomainError);
  CollisionConfig bad;
  bad.quadrature_order = 3;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  CHECK_THROWS_AS(equilibrium(1.0, 0.1, 1.0, g), DomainError);
}

TEST_CASE("deterministic across worker counts") {
  const GridPtr g = RadialGrid::geometric(80, 1e-4, 1e2);
  const DistributionIso f = bump(g);
  set_worker_count(1);
  const CollisionRate a = collision_rhs_iso(f, CollisionConfig{});
  const MonteCarloEstimate ma = collision_mc(f, 1.0, 20000, 9);
  set_worker_count(3);
  const CollisionRate b = collision_rhs_iso(f, CollisionConfig{});
  const MonteCarloEstimate mb = collision_mc(f, 1.0, 20000, 9);
  set_worker_count(1);
  CHECK(a.rate == b.rate);
  CHECK(ma.estimate == mb.estimate);
}

TEST_CASE("monte carlo oracle agrees with the deterministic rate") {
  const GridPtr g = RadialGrid::geometric(256, 1e-4, 1e2);
  const DistributionIso f = bump(g);
  const CollisionRate r = collision_rhs_iso(f, CollisionConfig{});
  const std::size_t i = g->locate(0.5);
  const MonteCarloEstimate mc = collision_mc(f, std::sqrt(g->node(i)), 200000, 5);
  CHECK(mc.samples == 200000);
  CHECK(std::fabs(mc.estimate - r.rate[i]) < 4.0 * mc.standard_error);
}
