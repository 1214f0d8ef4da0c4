#include <doctest.h>

#include <cmath>
#include <initializer_list>
#include <complex>
#include <vector>

#include "fracmix/error.hpp"
#include "fracmix/mlfunc.hpp"

using namespace fracmix::mlfunc;
using cplx = std::complex<double>;

TEST_SUITE("mlfunc") {
  TEST_CASE("alpha = 1 reduces to exponentials") {
    const MLParams e11{1.0, 1.0, 5.0, 1e-12};
    const MLParams e12{1.0, 2.0, 5.0, 1e-12};
    for (double x : {-30.0, -8.0, -2.0, -0.3, 0.0, 0.7, 3.0, 9.0}) {
      CHECK(mittag_leffler(e11, x) == doctest::Approx(std::exp(x)).epsilon(1e-12).scale(1.0));
      const double e12_exact = x == 0.0 ? 1.0 : std::expm1(x) / x;
      CHECK(mittag_leffler(e12, x) == doctest::Approx(e12_exact).epsilon(1e-12).scale(1.0));
    }
  }

  TEST_CASE("alpha = 1/2 matches the scaled complementary error function") {
    // E_{1/2,1}(-x) = e^{x^2} erfc(x)
    const MLParams p{0.5, 1.0, 5.0, 1e-12};
    for (double x : {0.1, 0.5, 1.0, 2.0, 3.0, 6.0, 20.0}) {
      const double exact = std::exp(x * x) * std::erfc(x);
      CHECK(std::abs(mittag_leffler(p, -x) - exact) <= 1e-12);
    }
  }

  TEST_CASE("gamma shifts satisfy the recurrence E_{a,g}(z) = 1/Gamma(g) + z E_{a,a+g}(z)") {
    for (double alpha : {0.3, 0.7, 1.4}) {
      const MLParams p{alpha, 0.8, 5.0, 1e-12};
      const MLParams shifted{alpha, alpha + 0.8, 5.0, 1e-12};
      for (double x : {-12.0, -3.0, -0.5, 0.4, 2.0}) {
        if (alpha > 1.0 && x < -5.0) continue;  // no positive-density form on the negative axis
        const double lhs = mittag_leffler(p, x);
        const double rhs = 1.0 / std::tgamma(0.8) + x * mittag_leffler(shifted, x);
        CHECK(lhs == doctest::Approx(rhs).scale(1.0).epsilon(1e-10));
      }
    }
  }

  TEST_CASE("complex argument on the imaginary axis") {
    const MLParams p{1.0, 1.0, 5.0, 1e-12};
    for (double y : {0.5, 2.0, 4.0, 12.0}) {
      const cplx v = mittag_leffler(p, cplx(0.0, y));
      CHECK(std::abs(v - std::exp(cplx(0.0, y))) <= 1e-11);
    }
  }

  TEST_CASE("series and negative-axis regimes agree near the switch radius") {
    for (double alpha : {0.8, 0.9, 1.0}) {
      const MLParams p{alpha, 1.0, 5.0, 1e-8};
      for (double x : {4.6, 5.0, 5.4}) {
        const cplx a = mittag_leffler(p, cplx(-x, 0.0), Regime::series);
        const cplx b = mittag_leffler(p, cplx(-x, 0.0), Regime::negative_axis);
        CHECK(std::abs(a - b) <= 1e-8);
      }
    }
  }

  TEST_CASE("negative axis values are completely monotone and bounded by the sector constant") {
    const MLParams p{0.6, 1.0, 5.0, 1e-12};
    double prev = 1.0;
    for (int i = 1; i < 200; ++i) {
      const double v = mittag_leffler(p, -0.1 * i);
      CHECK(v > 0.0);
      CHECK(v <= prev);
      prev = v;
    }
    std::vector<double> xs;
    for (int i = 0; i <= 60; ++i) xs.push_back(std::pow(10.0, -2.0 + 0.1 * i));
    const double c = sector_constant(p, xs);
    // the supremum sits near x = 0 where (1 + x) E(-x) starts at one and dips first
    CHECK(c > 0.99);
    CHECK(c <= 1.0 + 1e-12);
  }

  TEST_CASE("differentiation identities converge under refinement") {
    const auto coarse = ml_derivative_residuals(0.5, 1.0, 1.0, 1.0 / 64.0);
    const auto fine = ml_derivative_residuals(0.5, 1.0, 1.0, 1.0 / 256.0);
    CHECK(std::log2(coarse.first_order / fine.first_order) / 2.0 >= 1.8);
    CHECK(std::log2(coarse.fractional / fine.fractional) / 2.0 >= 0.7);
  }

  TEST_CASE("zero argument returns the reciprocal gamma value") {
    CHECK(mittag_leffler(MLParams{0.7, 1.3, 5.0, 1e-12}, 0.0) == doctest::Approx(1.0 / std::tgamma(1.3)).epsilon(1e-13));
    CHECK(mittag_leffler(MLParams{0.5, 1.0, 5.0, 1e-12}, 0.0) == 1.0);
  }

  TEST_CASE("invalid parameters and failing regimes") {
    CHECK_THROWS_AS(mittag_leffler(MLParams{0.0, 1.0, 5.0, 1e-12}, 1.0), fracmix::ValidationError);
    CHECK_THROWS_AS(mittag_leffler(MLParams{0.5, 1.0, 5.0, 1e-3}, 1.0), fracmix::ValidationError);
    CHECK_THROWS_AS(mittag_leffler(MLParams{2.0, 1.0, 5.0, 1e-12}, 1.0), fracmix::ValidationError);
    CHECK_THROWS_AS(mittag_leffler(MLParams{0.5, 1.0, 5.0, 1e-12}, cplx(-0.5, 0.0), Regime::asymptotic),
                    fracmix::EvaluationFailure);
    try {
      mittag_leffler(MLParams{0.5, 1.0, 5.0, 1e-12}, cplx(-0.5, 0.0), Regime::asymptotic);
    } catch (const fracmix::EvaluationFailure& e) {
      CHECK(e.regime() == "asymptotic");
    }
  }
}
