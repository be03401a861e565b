#include <doctest.h>

#include <cmath>

#include "uukin/boundary_layer.hpp"
#include "uukin/error.hpp"

using namespace uukin;

namespace {
double profile_fn(double xi) { return std::pow(1.0 + xi * xi, -1.2); }
}  // namespace

TEST_CASE("scale exponents at the reference beta") {
  const BoundaryLayerScales s = scale_exponents(1.069);
  CHECK(s.time_exponent == doctest::Approx(2.0 / 3.138));
  CHECK(s.physical_time_exponent == doctest::Approx(4.276 / 3.138));
  CHECK(s.momentum_exponent == doctest::Approx(2.138 / 3.138));
  CHECK(s.identity_residual < 1e-15);
  CHECK(correlation_onset_exponent(1.069) == doctest::Approx(0.63734).epsilon(1e-5));
  CHECK(correlation_onset_time(0.01, 1.069) == doctest::Approx(std::pow(0.01, 2.0 / 3.138)));
  const CorrelationMagnitude cm = correlation_magnitude(0.1, 1.069);
  CHECK(cm.exponents_equal);
  CHECK(cm.ratio == doctest::Approx(std::pow(0.1, 1.138)));
}

TEST_CASE("physical scales satisfy p x = hbar") {
  const BoundaryLayerScales s = physical_scales(PhysicalParams{1.44e-25, 5.3e-9, 4e-7, 4e-7, 0, 0});
  CHECK(s.px_exponent_sum == 0.0);
  CHECK(s.px_over_hbar == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.t_bl > 0.0);
}

TEST_CASE("grid validation") {
  BLGrid g{4, 0.1};
  CHECK_THROWS_AS(g.validate(), DomainError);
  BLGrid h{5, 0.5};
  CHECK(h.coord(4) == doctest::Approx(-0.5));
  CHECK(h.wrap(-1) == 4);
}

TEST_CASE("asymptotic data, conservation and exchange symmetry") {
  const SelfSimilarProfile prof = analytic_profile(profile_fn, 1e-3, 1e2);
  AsymptoticOptions ao;
  ao.n = 11;
  const HierarchyState s0 = asymptotic_data(prof, -2.0, 1.069, ao);
  CHECK(s0.g2_sup() == 0.0);
  CHECK(s0.density() > 0.0);
  const HierarchyRun run = evolve_hierarchy(s0, HierarchyRunOptions{1e-3, 5});
  CHECK(run.max_density_drift < 1e-13);
  CHECK(run.states.back().exchange_asymmetry() < 1e-12);
  CHECK(run.states.back().g2_sup() > 0.0);
  CHECK_THROWS_AS(asymptotic_data(prof, 0.5, 1.069, ao), DomainError);
}

TEST_CASE("wigner transform round trip") {
  const SelfSimilarProfile prof = analytic_profile(profile_fn, 1e-3, 1e2);
  AsymptoticOptions ao;
  ao.n = 9;
  const HierarchyRun run = evolve_hierarchy(asymptotic_data(prof, -1.0, 1.069, ao), HierarchyRunOptions{1e-3, 3});
  const HierarchyState& s = run.states.back();
  const HierarchyState back = wigner_inverse(wigner_form(s));
  double e = 0.0;
  for (std::size_t i = 0; i < s.g2.size(); ++i) e = std::max(e, std::abs(back.g2[i] - s.g2[i]));
  for (std::size_t i = 0; i < s.h1.size(); ++i) e = std::max(e, std::abs(back.h1[i] - s.h1[i]));
  CHECK(e < 1e-13);
}

TEST_CASE("matching study slope") {
  const SelfSimilarProfile prof = analytic_profile(profile_fn, 1e-3, 1e2);
  AsymptoticOptions ao;
  ao.n = 11;
  const MatchingStudy ms = matching_study(prof, 1.069, {-1.0, -std::sqrt(10.0), -10.0}, ao);
  CHECK(ms.predicted_slope == doctest::Approx(3.0 * 0.569));
  CHECK(ms.relative_error < 0.1);
}
