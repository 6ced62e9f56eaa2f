#include <cmath>

#include <doctest.h>

#include "gamchain/errors.hpp"
#include "gamchain/model.hpp"
#include "gamchain/quadrature.hpp"
#include "oracles.hpp"

using namespace gamchain;

TEST_CASE("increment density is symmetric, positive, and normalized") {
  for (double a : {0.5, 1.0, 3.0}) {
    const GamChainParams params{a};
    for (double w : {0.0, 0.3, 1.7, 20.0}) {
      const double plus = increment_density(w, params);
      const double minus = increment_density(-w, params);
      CHECK(plus > 0.0);
      CHECK(plus == doctest::Approx(minus).epsilon(1e-13));
    }
    const double window = 80.0 / std::min(a, 1.0);
    auto mass = integrate([&](double w) { return increment_density(w, params); },
                          -window, window, 1e-12, 1e-12);
    CHECK(mass.converged);
    CHECK(mass.value == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("increment density survives extreme arguments") {
  const GamChainParams params{2.0};
  CHECK(increment_density(700.0, params) >= 0.0);
  CHECK(increment_density(-700.0, params) >= 0.0);
  CHECK(std::isfinite(increment_density(700.0, params)));
}

TEST_CASE("naive conditional increment density is normalized in w") {
  // With s = e^w u^2 the density reduces to a unit gamma in s, so the total
  // mass is exactly one for any conditioning value.
  const GamChainParams params{1.5};
  for (double u_prev : {0.3, 1.0, 8.0}) {
    auto mass = integrate(
        [&](double w) { return naive_increment_density(w, u_prev, params); }, -60.0,
        60.0, 1e-12, 1e-12);
    CHECK(mass.converged);
    CHECK(mass.value == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("increment variance and kurtosis match polygamma oracles") {
  for (double a : {0.25, 1.0, 2.0, 10.0, 123.0}) {
    const GamChainParams params{a};
    const long double var_want = 2.0L * oracle::trigamma(a);
    CHECK(increment_variance(params) ==
          doctest::Approx(static_cast<double>(var_want)).epsilon(1e-12));
    const long double t1 = oracle::trigamma(a);
    const long double kurt_want = 3.0L + oracle::tetragamma(a) / (2.0L * t1 * t1);
    CHECK(increment_kurtosis(params) ==
          doctest::Approx(static_cast<double>(kurt_want)).epsilon(1e-11));
  }
}

TEST_CASE("increment kurtosis at unit shape is exactly 4.2") {
  // psi1(1) = pi^2/6 and psi3(1) = pi^4/15 give 3 + (pi^4/15)/(2 pi^4/36).
  CHECK(increment_kurtosis(GamChainParams{1.0}) == doctest::Approx(4.2).epsilon(1e-12));
}

TEST_CASE("increment MGF matches the gamma-ratio form and its domain") {
  const GamChainParams params{2.0};
  CHECK(increment_mgf(0.0, params) == doctest::Approx(1.0).epsilon(1e-13));
  // Symmetric in lambda.
  CHECK(increment_mgf(0.7, params) ==
        doctest::Approx(increment_mgf(-0.7, params)).epsilon(1e-13));
  // Quadrature cross-check.
  auto quad = integrate(
      [&](double w) { return std::exp(0.8 * w) * increment_density(w, params); },
      -90.0, 90.0, 1e-12, 1e-11);
  CHECK(quad.value == doctest::Approx(increment_mgf(0.8, params)).epsilon(1e-8));
  CHECK_THROWS_AS(increment_mgf(2.0, params), domain_error);
  CHECK_THROWS_AS(increment_mgf(-2.5, params), domain_error);
}

TEST_CASE("marginal return density is a normalized scaled heavy-tail law") {
  const GamChainParams params{3.0};
  const double b = 1.3;
  auto mass = integrate(
      [&](double y) { return marginal_return_density(y, b, params); }, -4000.0, 4000.0,
      1e-12, 1e-10, 20000);
  CHECK(mass.converged);
  CHECK(mass.value == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(marginal_return_density(0.4, b, params) ==
        doctest::Approx(marginal_return_density(-0.4, b, params)).epsilon(1e-13));
}

TEST_CASE("marginal return kurtosis matches the gamma-ratio closed form") {
  // 3 Gamma(a-2) Gamma(a) / Gamma(a-1)^2 simplifies to 3 (a-1)/(a-2):
  // a=3 gives 6 and a=10 gives 27/8 = 3.375.
  CHECK(marginal_return_kurtosis(GamChainParams{3.0}) == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(marginal_return_kurtosis(GamChainParams{10.0}) ==
        doctest::Approx(3.375).epsilon(1e-12));
  CHECK_THROWS_AS(marginal_return_kurtosis(GamChainParams{2.0}), domain_error);
  CHECK_THROWS_AS(marginal_return_kurtosis(GamChainParams{1.5}), domain_error);
}
