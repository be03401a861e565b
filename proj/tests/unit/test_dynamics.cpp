#include <doctest.h>

#include <cmath>

#include "uukin/dynamics.hpp"
#include "uukin/error.hpp"

using namespace uukin;

TEST_CASE("equilibrium stays put") {
  const GridPtr g = RadialGrid::geometric(64, 1e-4, 1e2);
  const DistributionIso f0 = equilibrium(1.0, -0.5, 1.0, g);
  StepControl sc;
  sc.dt_initial = 1e-2;
  const Trajectory tr = evolve(f0, 0.5, sc);
  CHECK(tr.termination == Termination::Completed);
  CHECK(tr.last().t == doctest::Approx(0.5));
  double d = 0.0;
  for (std::size_t i = 0; i < f0.size(); ++i) d = std::max(d, std::fabs(tr.last().f[i] - f0[i]));
  CHECK(d < 1e-7);
}

TEST_CASE("relaxation conserves N and E and raises entropy") {
  const GridPtr g = RadialGrid::geometric(64, 1e-4, 1e2);
  const DistributionIso f0 = initial_bose(0.5, ThetaProfile::from_string("exp_poly", 1.0), g);
  const Trajectory tr = evolve(f0, 0.2, StepControl{});
  const MomentReport& a = tr.snapshots.front().moments;
  const MomentReport& b = tr.last().moments;
  CHECK(std::fabs(b.number - a.number) / a.number < 1e-9);
  CHECK(std::fabs(b.energy - a.energy) / a.energy < 1e-7);
  CHECK(b.entropy > a.entropy);
  CHECK(tr.min_entropy_increment >= -1e-8);
}

TEST_CASE("observer sees every stored snapshot, resume continues the run") {
  const GridPtr g = RadialGrid::geometric(48, 1e-4, 1e2);
  const DistributionIso f0 = initial_bose(0.5, ThetaProfile::from_string("exp_poly", 1.0), g);
  std::size_t seen = 0;
  const Trajectory full = evolve(f0, 0.2, StepControl{}, CollisionConfig{}, 0.0, [&](const Snapshot&) { ++seen; });
  CHECK(seen == full.snapshots.size());

  const Trajectory half = evolve(f0, 0.1, StepControl{});
  StepControl sc;
  sc.dt_initial = half.last().dt_next > 0 ? half.last().dt_next : sc.dt_initial;
  sc.resume_err_prev = half.last().err_prev;
  const Trajectory rest = evolve(half.last().f, 0.2, sc, CollisionConfig{}, half.last().t);
  double d = 0.0, m = 0.0;
  for (std::size_t i = 0; i < f0.size(); ++i) {
    d = std::max(d, std::fabs(rest.last().f[i] - full.last().f[i]));
    m = std::max(m, full.last().f[i]);
  }
  CHECK(d / m < 1e-6);
}

TEST_CASE("equilibrium fit recovers theta and mu") {
  const GridPtr g = RadialGrid::geometric(64, 1e-4, 1e2);
  const EquilibriumFit fit = fit_equilibrium(equilibrium(1.3, -0.2, 1.0, g));
  CHECK(fit.theta == doctest::Approx(1.3).epsilon(1e-9));
  CHECK(fit.mu == doctest::Approx(-0.2).epsilon(1e-9));
}

TEST_CASE("blow-up time from a synthetic max f series") {
  std::vector<double> t, fm;
  const double T = 0.37, alpha = 2.6;
  for (int k = 0; k < 80; ++k) {
    const double tau = std::pow(10.0, -0.5 - 4.0 * k / 80.0);
    t.push_back(T - tau);
    fm.push_back(3.0 * std::pow(tau, -alpha));
  }
  const BlowupEstimate b = detect_blowup(t, fm);
  CHECK(b.detected);
  CHECK(b.T == doctest::Approx(T).epsilon(1e-6));
  CHECK(b.alpha == doctest::Approx(alpha).epsilon(1e-4));
  std::vector<double> flat(t.size(), 1.0);
  CHECK_FALSE(detect_blowup(t, flat).detected);
}

TEST_CASE("self-similar fit recovers injected exponents") {
  const double beta = 1.15, alpha = 2.0 * beta + 0.5, T = 1.0;
  const GridPtr g = RadialGrid::geometric(1024, 1e-13, 1e2);
  Trajectory tr;
  for (int k = 0; k <= 40; ++k) {
    const double tau = std::pow(10.0, -1.0 - 3.5 * k / 40.0);
    std::vector<double> v(g->size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double xi = std::sqrt(g->node(i)) * std::pow(tau, -beta);
      v[i] = std::pow(tau, -alpha) * std::exp(-xi * xi);
    }
    tr.snapshots.push_back(Snapshot{T - tau, DistributionIso(g, v), MomentReport{}});
  }
  FitOptions fo;
  fo.window = FitWindow{-4.0, -1.5};
  const SelfSimilarFit fit = fit_selfsimilar(tr, T, fo);
  CHECK(fit.beta == doctest::Approx(beta).epsilon(1e-3));
  CHECK(fit.alpha == doctest::Approx(alpha).epsilon(1e-3));
  CHECK(fit.consistency_gap < 1e-2);
}

TEST_CASE("step control validation") {
  StepControl sc;
  sc.rtol = -1.0;
  CHECK_THROWS_AS(sc.validate(), DomainError);
  StepControl sc2;
  sc2.snapshot_every = 0;
  CHECK_THROWS_AS(sc2.validate(), DomainError);
}
