#include <cmath>

#include <doctest.h>

#include "gamchain/errors.hpp"
#include "gamchain/quadrature.hpp"
#include "oracles.hpp"

using namespace gamchain;

TEST_CASE("integrate reproduces closed-form integrals") {
  auto poly = integrate([](double x) { return x * x; }, 0.0, 1.0);
  CHECK(poly.converged);
  CHECK(poly.value == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

  const double pi = std::acos(-1.0);
  auto sine = integrate([](double x) { return std::sin(x); }, 0.0, pi);
  CHECK(sine.converged);
  CHECK(sine.value == doctest::Approx(2.0).epsilon(1e-13));

  auto gauss = integrate([](double x) { return std::exp(-x * x); }, -10.0, 10.0);
  CHECK(gauss.converged);
  CHECK(gauss.value == doctest::Approx(std::sqrt(pi)).epsilon(1e-13));
}

TEST_CASE("integrate resolves a sharply peaked integrand") {
  const double a = 1e-3;
  auto peak = integrate([&](double x) { return 1.0 / (a * a + x * x); }, -1.0, 1.0,
                        1e-10, 1e-12, 10000);
  const double want = 2.0 / a * std::atan(1.0 / a);
  CHECK(peak.converged);
  CHECK(peak.value == doctest::Approx(want).epsilon(1e-11));
  CHECK(peak.subdivisions > 10);
}

TEST_CASE("integrate agrees with the adaptive Simpson oracle") {
  auto f = [](double x) { return std::exp(-0.5 * x * x) * std::cos(3.0 * x); };
  auto got = integrate(f, -6.0, 6.0);
  const long double want = oracle::integrate(
      [](long double x) -> long double {
        return std::exp(-0.5L * x * x) * std::cos(3.0L * x);
      },
      -6.0L, 6.0L, 1e-16L);
  CHECK(got.converged);
  CHECK(got.value == doctest::Approx(static_cast<double>(want)).epsilon(1e-12));
}

TEST_CASE("integrate reports non-convergence when starved of subdivisions") {
  auto starved = integrate([](double x) { return 1.0 / (1e-8 + x * x); }, -1.0, 1.0,
                           1e-14, 1e-14, 2);
  CHECK_FALSE(starved.converged);
  CHECK(starved.abs_error > 0.0);
}

TEST_CASE("integrate handles reversed and empty ranges") {
  auto empty = integrate([](double x) { return x; }, 2.0, 2.0);
  CHECK(empty.value == 0.0);
  CHECK(empty.converged);
  auto forward = integrate([](double x) { return x * x * x + 1.0; }, 0.0, 2.0);
  CHECK(forward.value == doctest::Approx(6.0).epsilon(1e-13));
  CHECK_THROWS_AS(integrate([](double x) { return x; }, 3.0, 2.0), domain_error);
}
