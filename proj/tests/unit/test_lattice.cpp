#include <doctest.h>

#include <cmath>

#include "uukin/error.hpp"
#include "uukin/lattice.hpp"

using namespace uukin;

TEST_CASE("lattice indexing round trip") {
  const Lattice3 lat(5, 0.25);
  CHECK(lat.size() == 125);
  for (std::size_t i = 0; i < lat.size(); ++i) CHECK(lat.index(lat.vec(i)) == i);
  CHECK(lat.energy(lat.index({1, 2, -2})) == doctest::Approx(0.0625 * 9));
  CHECK_THROWS_AS(Lattice3(4, 0.25), DomainError);
}

TEST_CASE("capacity gate fires before allocation") {
  CHECK(pair_correlation_bytes(5) == doctest::Approx(std::pow(125.0, 3) * 16.0));
  LatticeBudget b;
  CHECK_NOTHROW(b.check(5));
  CHECK_THROWS_AS(b.check(7), CapacityError);
  CHECK_THROWS_AS(PairCorrelation(Lattice3(99, 0.1)), CapacityError);
}

TEST_CASE("filon weights integrate linear data exactly") {
  const double om = 3.7, h = 0.4;
  cplx w0, w1;
  filon_weights(om, h, w0, w1);
  // int_0^h exp(-i om (h - s)) ds
  const cplx exact_const = (1.0 - std::exp(cplx(0, -om * h))) / cplx(0, om);
  CHECK(std::abs(w0 + w1 - exact_const) < 1e-14);
  cplx z0, z1;
  filon_weights(0.0, h, z0, z1);
  CHECK(std::abs(z0 - h / 2) < 1e-15);
  CHECK(std::abs(z1 - h / 2) < 1e-15);
}

TEST_CASE("equilibrium is stationary for every route") {
  const Lattice3 lat(3, 0.5);
  const DistributionLattice f = lattice_equilibrium(lat, 1.0, -0.5, 1.0);
  double m = 0.0;
  for (double v : rhs_markov(f, 1.0)) m = std::max(m, std::fabs(v));
  CHECK(m < 1e-13);
}

TEST_CASE("coupled and memory routes agree") {
  const Lattice3 lat(3, 0.25);
  const DistributionLattice f0 = lattice_random_initial(lat, 1.0, 0.5, 0.5, 3);
  LatticeRunOptions o;
  o.dt = 0.02;
  const LatticeRun a = run_coupled(f0, 0.4, 0.5, 1.0, o);
  const LatticeRun b = run_memory(f0, 0.4, 0.5, 1.0, o);
  REQUIRE(a.trajectory.size() == b.trajectory.size());
  double e = 0.0;
  for (std::size_t i = 0; i < lat.size(); ++i) e = std::max(e, std::fabs(a.trajectory.back()[i] - b.trajectory.back()[i]));
  CHECK(e < 1e-12);
  CHECK(a.max_imag_residual < 1e-10);
  CHECK(std::fabs(a.trajectory.back().number() - f0.number()) < 1e-12 * f0.number());
}

TEST_CASE("resumed memory run matches the single run") {
  const Lattice3 lat(3, 0.25);
  const DistributionLattice f0 = lattice_random_initial(lat, 1.0, 0.5, 0.5, 5);
  LatticeRunOptions o;
  o.dt = 0.02;
  const LatticeRun full = run_memory(f0, 0.4, 0.5, 1.0, o);
  const LatticeRun first = run_memory(f0, 0.2, 0.5, 1.0, o);
  LatticeHistory h;
  h.snapshots = first.trajectory;
  LatticeRunOptions r = o;
  r.history = &h;
  const LatticeRun rest = run_memory(first.trajectory.back(), 0.4, 0.5, 1.0, r);
  double e = 0.0;
  for (std::size_t i = 0; i < lat.size(); ++i) e = std::max(e, std::fabs(rest.trajectory.back()[i] - full.trajectory.back()[i]));
  CHECK(e < 1e-13);
  CHECK_THROWS_AS(run_memory(first.trajectory.back(), 0.4, 0.5, 1.0, o), DomainError);
}

TEST_CASE("seeded random data is reproducible") {
  const Lattice3 lat(3, 0.25);
  const auto a = lattice_random_initial(lat, 1.0, 0.5, 0.5, 42);
  const auto b = lattice_random_initial(lat, 1.0, 0.5, 0.5, 42);
  const auto c = lattice_random_initial(lat, 1.0, 0.5, 0.5, 43);
  CHECK(a.values == b.values);
  CHECK(a.values != c.values);
  CHECK(a.nonnegative());
}
