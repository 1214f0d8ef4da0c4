#include <doctest.h>

#include <cmath>
#include <initializer_list>
#include <numbers>

#include "fracmix/special.hpp"

namespace sp = fracmix::special;

TEST_SUITE("special") {
  TEST_CASE("gamma agrees with the C library on the positive and negative axis") {
    for (double x : {0.1, 0.5, 0.75, 1.0, 1.5, 2.25, 3.5, 7.0, 12.3, 40.0}) {
      CHECK(sp::gamma(x) == doctest::Approx(std::tgamma(x)).epsilon(1e-13));
      CHECK(sp::log_gamma(x) == doctest::Approx(std::lgamma(x)).epsilon(1e-13));
    }
    for (double x : {-0.5, -1.25, -2.75}) CHECK(sp::gamma(x) == doctest::Approx(std::tgamma(x)).epsilon(1e-12));
  }

  TEST_CASE("positive integers give exact factorials") {
    CHECK(sp::gamma(1.0) == 1.0);
    CHECK(sp::gamma(5.0) == 24.0);
    CHECK(sp::gamma(21.0) == 2432902008176640000.0);
    CHECK(sp::rgamma(1.0) == 1.0);
    CHECK(sp::rgamma(3.0) == 0.5);
  }

  TEST_CASE("reciprocal gamma vanishes at the poles") {
    CHECK(sp::rgamma(0.0) == 0.0);
    CHECK(sp::rgamma(-1.0) == 0.0);
    CHECK(sp::rgamma(-3.0) == 0.0);
    CHECK(sp::rgamma(0.5) == doctest::Approx(1.0 / std::sqrt(std::numbers::pi)).epsilon(1e-14));
    CHECK(sp::rgamma(4.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  }

  TEST_CASE("lower incomplete gamma closed forms") {
    // gamma(1, x) = 1 - e^{-x}, gamma(1/2, x) = sqrt(pi) erf(sqrt(x)), gamma(2, x) = 1 - (1 + x) e^{-x}
    for (double x : {0.0, 0.01, 0.5, 2.0, 10.0, 50.0}) {
      CHECK(sp::lower_incomplete_gamma(1.0, x) == doctest::Approx(-std::expm1(-x)).epsilon(1e-13));
      CHECK(sp::lower_incomplete_gamma(0.5, x) ==
            doctest::Approx(std::sqrt(std::numbers::pi) * std::erf(std::sqrt(x))).epsilon(1e-13));
      CHECK(sp::lower_incomplete_gamma(2.0, x) == doctest::Approx(1.0 - (1.0 + x) * std::exp(-x)).epsilon(1e-12));
    }
  }
}
