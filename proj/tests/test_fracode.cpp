#include <doctest.h>

#include <cmath>
#include <initializer_list>
#include <numbers>
#include <vector>

#include "fracmix/error.hpp"
#include "fracmix/fracode.hpp"

using namespace fracmix;
using namespace fracmix::fracode;
using fraccalc::OrderSpec;
using fraccalc::TimeGrid;

namespace {

// v' + q D^{1/2} v + lambda v = 0 with q = 3, lambda = 2. In x = sqrt(s) the
// Laplace transform is v0 (x + q) / (x (x + 1)(x + 2)); partial fractions and
// L^{-1}[1/(sqrt(s) - a)] = 1/sqrt(pi t) + a e^{a^2 t} erfc(-a sqrt(t)) give
// v(t) = v0 sum_i B_i a_i e^{a_i^2 t} erfc(-a_i sqrt(t)).
double half_order_exact(double t) {
  const double a1 = -1.0, a2 = -2.0, q = 3.0;
  const double b1 = (a1 + q) / (a1 * (a1 - a2));
  const double b2 = (a2 + q) / (a2 * (a2 - a1));
  const auto term = [&](double a) { return a * std::exp(a * a * t) * std::erfc(-a * std::sqrt(t)); };
  return b1 * term(a1) + b2 * term(a2);
}

FracOdeProblem relaxation(double alpha, double q, double lambda, double horizon) {
  FracOdeProblem p;
  p.spec = OrderSpec::single_constant(alpha, q);
  p.lambda = lambda;
  p.v0 = 1.0;
  p.horizon = horizon;
  return p;
}

}  // namespace

TEST_SUITE("fracode") {
  TEST_CASE("closed-form oracle starts at one") { CHECK(half_order_exact(1e-12) == doctest::Approx(1.0).epsilon(1e-5)); }

  TEST_CASE("spectral solution matches the half-order closed form") {
    const auto params = SpectralDensity::make(0.5, 3.0, 2.0, 0.05);
    const std::vector<double> ts{0.05, 0.3, 1.0, 4.0, 20.0, 50.0};
    const auto v = solve_spectral(params, 1.0, ts).values();
    for (std::size_t i = 0; i < ts.size(); ++i)
      CHECK(v[i] == doctest::Approx(half_order_exact(ts[i])).epsilon(1e-9));
  }

  TEST_CASE("L1 stepper converges to the half-order closed form") {
    const auto p = relaxation(0.5, 3.0, 2.0, 2.0);
    double prev = 0.0;
    for (int level = 0; level < 3; ++level) {
      const TimeGrid g(0.0, 2.0, static_cast<std::size_t>(256) << level);
      const double err = std::abs(solve_l1(p, g).values().back() - half_order_exact(2.0));
      CHECK(err < 2e-3);
      if (level > 0) CHECK(prev / err > 1.6);
      prev = err;
    }
  }

  TEST_CASE("without fractional terms the stepper is backward Euler") {
    FracOdeProblem p;
    p.lambda = 1.5;
    p.v0 = 2.0;
    p.horizon = 1.0;
    const TimeGrid g(0.0, 1.0, 10);
    const auto v = solve_l1(p, g).values();
    for (std::size_t n = 0; n < g.size(); ++n)
      CHECK(v[n] == doctest::Approx(2.0 * std::pow(1.0 + 1.5 * g.step(), -static_cast<double>(n))).epsilon(1e-14));
  }

  TEST_CASE("forcing enters the right-hand side") {
    // v' + v = 1, v(0) = 0 under backward Euler: v_n = 1 - (1 + tau)^{-n}
    FracOdeProblem p;
    p.lambda = 1.0;
    p.v0 = 0.0;
    p.forcing = [](double) { return 1.0; };
    p.horizon = 1.0;
    const TimeGrid g(0.0, 1.0, 8);
    const auto v = solve_l1(p, g).values();
    for (std::size_t n = 0; n < g.size(); ++n)
      CHECK(v[n] == doctest::Approx(1.0 - std::pow(1.0 + g.step(), -static_cast<double>(n))).epsilon(1e-14));
  }

  TEST_CASE("split point and density") {
    const double alpha = 0.4, q = 1.3, lambda = 2.0;
    const double delta = split_point(alpha, q, lambda);
    CHECK(delta > 0.0);
    CHECK(delta + q * std::pow(delta, alpha) == doctest::Approx(lambda / 2.0).epsilon(1e-12));
    const auto params = SpectralDensity::make(alpha, q, lambda, 1.0);
    for (double r : {1e-6, 0.01, 0.5, 2.0, 10.0, 100.0}) CHECK(spectral_density(params, r) > 0.0);
    // small-r behaviour q sin(alpha pi) r^{alpha-1} / (pi lambda)
    const double r = 1e-10;
    CHECK(spectral_density(params, r) ==
          doctest::Approx(q * std::sin(alpha * std::numbers::pi) * std::pow(r, alpha - 1.0) / (std::numbers::pi * lambda))
              .epsilon(1e-3));
  }

  TEST_CASE("tail bound is within budget at the requested time and decreases") {
    const auto params = SpectralDensity::make(0.3, 1.0, 1.0, 0.2);
    CHECK(spectral_tail_bound(params, 0.2) <= kSpectralTailBudget);
    CHECK(spectral_tail_bound(params, 1.0) < spectral_tail_bound(params, 0.2));
    SpectralDensity small = params;
    small.r_max = 5.0;
    CHECK_THROWS_AS(solve_spectral(small, 1.0, std::vector<double>{0.2}), TruncationFailure);
  }

  TEST_CASE("spectral parameters are validated") {
    CHECK_THROWS_AS(SpectralDensity::make(1.2, 1.0, 1.0, 1.0), ValidationError);
    CHECK_THROWS_AS(SpectralDensity::make(0.5, -1.0, 1.0, 1.0), ValidationError);
    CHECK_THROWS_AS(SpectralDensity::make(0.5, 1.0, 0.0, 1.0), ValidationError);
    FracOdeProblem varying = relaxation(0.5, 1.0, 1.0, 1.0);
    varying.spec = OrderSpec::single(0.5, fraccalc::Coefficient::function([](double) { return 1.0; }), 1.0, 1.0);
    CHECK_THROWS_AS(SpectralDensity::from_problem(varying, 1.0), ValidationError);
  }

  TEST_CASE("decay constants bracket the solution") {
    const auto params = SpectralDensity::make(0.5, 1.0, 1.0, 1.0);
    const auto c = decay_constants(params, 1.0);
    CHECK(c.c_lower > 0.0);
    CHECK(c.c_upper > c.c_lower);
    CHECK(c.alpha == 0.5);
    const std::vector<double> ts{1.0, 10.0, 100.0, 1000.0};
    const auto v = solve_spectral(params, 1.0, ts).values();
    for (std::size_t i = 0; i < ts.size(); ++i) {
      CHECK(v[i] >= c.c_lower * std::pow(ts[i], -0.5));
      CHECK(v[i] <= c.c_upper * std::pow(ts[i], -0.5));
    }
  }

  TEST_CASE("maximum principle check") {
    FracOdeProblem p = relaxation(0.5, 1.0, 1.0, 1.0);
    p.v0 = -1.0;
    const TimeGrid g(0.0, 1.0, 64);
    const auto rep = max_principle_check(solve_l1(p, g), p.spec, p.lambda, 1e-6);
    CHECK(rep.hypotheses_hold);
    CHECK(rep.verdict == Verdict::pass);
    CHECK(rep.max_value <= 0.0);

    // a rising path has a positive residual, so the implication holds vacuously
    std::vector<double> bumped(g.size());
    for (std::size_t n = 0; n < g.size(); ++n) bumped[n] = -1.0 + 2.0 * g[n];
    const auto bad = max_principle_check(Trajectory::scalar(g, bumped), p.spec, p.lambda, 1e-6);
    CHECK_FALSE(bad.hypotheses_hold);
    CHECK(bad.verdict == Verdict::pass);
  }

  TEST_CASE("fractional derivative sign lemma") {
    const FracOdeProblem p = relaxation(0.5, 1.0, 1.0, 2.0);
    const TimeGrid g(0.0, 2.0, 128);
    const auto rep = frac_derivative_sign_check(solve_l1(p, g), p.spec, p.lambda, 1e-6);
    CHECK(rep.verdict == Verdict::pass);
    CHECK(rep.max_derivative <= 1e-6);

    std::vector<double> negative(g.size(), -1.0);
    const auto inc = frac_derivative_sign_check(Trajectory::scalar(g, negative), p.spec, p.lambda, 1e-6);
    CHECK(inc.verdict == Verdict::inconclusive);
    CHECK_FALSE(inc.reason.empty());
    CHECK(std::string(verdict_name(Verdict::inconclusive)) == "inconclusive");
  }

  TEST_CASE("problem validation") {
    FracOdeProblem p = relaxation(0.5, 1.0, -1.0, 1.0);
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p = relaxation(0.5, 1.0, 1.0, 1.0);
    CHECK_THROWS_AS(solve_l1(p, TimeGrid(0.0, 0.5, 8)), ValidationError);
  }
}
