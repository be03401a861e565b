#include <doctest.h>

#include <cmath>

#include "uukin/error.hpp"
#include "uukin/kernel.hpp"
#include "uukin/params.hpp"

using namespace uukin;

TEST_CASE("kernel pointwise") {
  CHECK(broadened_kernel(0.0, 2.0, 0.5) == doctest::Approx(8.0));
  CHECK(broadened_kernel(0.3, 2.0, 0.5) == doctest::Approx(std::sin(0.3 * 2.0 / 0.25) / 0.3));
  CHECK(broadened_kernel(1e-9, 2.0, 0.5) == doctest::Approx(8.0));
  CHECK(broadened_kernel(0.0, 0.0, 0.5) == 0.0);
  CHECK_THROWS_AS(broadened_kernel(0.1, -1.0, 0.5), DomainError);
  CHECK_THROWS_AS(broadened_kernel(0.1, 1.0, 0.0), DomainError);
}

TEST_CASE("kernel integral is pi") {
  for (double t : {0.05, 1.0, 20.0}) {
    for (double e : {1.0, 0.2}) CHECK(std::fabs(broadened_kernel_integral(t, e) - constants::pi) < 1e-6);
  }
}

TEST_CASE("weak convergence against a gaussian") {
  const double s = 0.02;
  const auto tab =
      weak_convergence_check([&](double x) { return std::exp(-x * x / (2 * s * s)); }, 1.0, {1.0, 0.5, 0.25}, 40 * s);
  REQUIRE(tab.rows.size() == 3);
  CHECK(tab.strictly_decreasing);
  for (const auto& r : tab.rows) {
    const double exact = constants::pi * std::erfc(s / (r.eps * r.eps) / std::sqrt(2.0));
    CHECK(r.error == doctest::Approx(exact).epsilon(1e-6));
  }
}

TEST_CASE("gauss legendre") {
  std::vector<double> x, w;
  gauss_legendre(8, x, w);
  double s = 0.0, s6 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s += w[i];
    s6 += w[i] * std::pow(x[i], 6);
  }
  CHECK(s == doctest::Approx(2.0));
  CHECK(s6 == doctest::Approx(2.0 / 7.0));
}
