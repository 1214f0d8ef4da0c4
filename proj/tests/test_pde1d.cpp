#include <doctest.h>

#include <cmath>
#include <initializer_list>
#include <numbers>
#include <vector>

#include "fracmix/error.hpp"
#include "fracmix/pde1d.hpp"

using namespace fracmix;
using namespace fracmix::pde1d;
using fraccalc::OrderSpec;
using fraccalc::TimeGrid;

namespace {

constexpr double kPi = std::numbers::pi;

EllipticOp1D laplacian(std::size_t n_x) {
  return build_operator(kPi, n_x, [](double) { return 1.0; }, 1.0);
}

MixedProblem parabola_problem(std::size_t n_x, double alpha, double q) {
  MixedProblem p;
  p.op = laplacian(n_x);
  p.spec = OrderSpec::single_constant(alpha, q);
  p.u0 = p.op.sample([](double x) { return x * (kPi - x); });
  return p;
}

}  // namespace

TEST_SUITE("pde1d") {
  TEST_CASE("constant diffusivity reproduces the discrete sine basis") {
    const std::size_t n = 40;
    const auto op = laplacian(n);
    const double h = op.h;
    for (Eigen::Index k = 0; k < 6; ++k) {
      const double kk = static_cast<double>(k + 1);
      const double exact = 4.0 / (h * h) * std::pow(std::sin(kk * h / 2.0), 2);
      CHECK(op.eigenvalues(k) == doctest::Approx(exact).epsilon(1e-12));
      const Eigen::VectorXd phi = op.sample([&](double x) { return std::sqrt(2.0 / kPi) * std::sin(kk * x); });
      CHECK((op.eigenvectors.col(k) - phi).cwiseAbs().maxCoeff() <= 1e-10);
    }
    const Eigen::MatrixXd gram = h * op.eigenvectors.transpose() * op.eigenvectors;
    CHECK((gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() <= 1e-11);
  }

  TEST_CASE("variable diffusivity keeps a symmetric positive spectrum") {
    const auto op = build_operator(2.0, 30, [](double x) { return 1.0 + x * x; }, 1.0);
    CHECK(op.eigenvalues(0) > 0.0);
    Eigen::VectorXd u = op.sample([](double x) { return std::sin(x) + x * (2.0 - x); });
    Eigen::VectorXd v = op.sample([](double x) { return std::exp(-x); });
    CHECK(op.inner(op.apply(u), v) == doctest::Approx(op.inner(u, op.apply(v))).epsilon(1e-12));
    CHECK(op.inner(op.apply(u), u) >= op.eigenvalues(0) * op.inner(u, u) * (1.0 - 1e-12));
    CHECK((op.synthesize(op.project(u)) - u).cwiseAbs().maxCoeff() <= 1e-11);
    CHECK_THROWS_AS(build_operator(2.0, 30, [](double x) { return 1.0 - x; }, 0.5), ValidationError);
  }

  TEST_CASE("semigroup acts on a mode by its exponential") {
    const auto op = laplacian(30);
    const Eigen::VectorXd phi = op.eigenvectors.col(2);
    const Eigen::VectorXd out = semigroup_apply(op, 0.4, phi);
    CHECK((out - std::exp(-0.4 * op.eigenvalues(2)) * phi).cwiseAbs().maxCoeff() <= 1e-12);
  }

  TEST_CASE("without fractional terms the stepper is backward Euler per mode") {
    MixedProblem p;
    p.op = laplacian(20);
    p.u0 = p.op.eigenvectors.col(0);
    p.horizon = 1.0;
    const TimeGrid g(0.0, 1.0, 32);
    const Trajectory traj = solve_mixed_l1(p, g);
    const double lam = p.op.eigenvalues(0);
    for (std::size_t n = 0; n < g.size(); ++n)
      CHECK(traj.norms()[n] == doctest::Approx(std::pow(1.0 + lam * g.step(), -static_cast<double>(n))).epsilon(1e-11));
  }

  TEST_CASE("modal oracle and stepper agree for constant coefficients") {
    MixedProblem p = parabola_problem(40, 0.5, 1.0);
    p.horizon = 2.0;
    const TimeGrid g = TimeGrid::from_step(2.0, 1.0 / 512.0);
    const Trajectory l1 = solve_mixed_l1(p, g);
    const std::vector<double> ts{0.25, 0.5, 1.0, 2.0};
    const auto modal = modal_oracle(p, ts).norms();
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const auto n = static_cast<std::size_t>(std::lround(ts[i] / g.step()));
      CHECK(std::abs(l1.norms()[n] - modal[i]) / modal[i] <= 2e-3);
    }
  }

  TEST_CASE("modal oracle handles q = 0 and reaction shifts") {
    MixedProblem p;
    p.op = laplacian(20);
    p.u0 = p.op.eigenvectors.col(0);
    p.c = Reaction::constant(-0.5);
    const std::vector<double> ts{0.0, 0.5, 2.0};
    const auto n = modal_oracle(p, ts).norms();
    for (std::size_t i = 0; i < ts.size(); ++i)
      CHECK(n[i] == doctest::Approx(std::exp(-(p.op.eigenvalues(0) + 0.5) * ts[i])).epsilon(1e-13));
  }

  TEST_CASE("two-term modal oracle is consistent with the stepper") {
    MixedProblem p = parabola_problem(20, 0.3, 1.0);
    p.spec.terms.push_back({0.7, fraccalc::Coefficient::constant(1.0)});
    p.horizon = 1.0;
    const TimeGrid g = TimeGrid::from_step(1.0, 1.0 / 1024.0);
    const auto l1 = solve_mixed_l1(p, g).norms();
    const std::vector<double> ts{0.5, 1.0};
    const auto modal = modal_oracle(p, ts).norms();
    CHECK(std::abs(l1[512] - modal[0]) / modal[0] <= 2e-3);
    CHECK(std::abs(l1.back() - modal[1]) / modal[1] <= 2e-3);
  }

  TEST_CASE("Duhamel source without forcing is the semigroup") {
    const auto op = laplacian(16);
    const Eigen::VectorXd u0 = op.sample([](double x) { return x * (kPi - x); });
    const TimeGrid g(0.0, 1.0, 8);
    const Trajectory f = duhamel_source(op, u0, Field{}, g);
    for (std::size_t n = 0; n < g.size(); ++n)
      CHECK((f.state(n) - semigroup_apply(op, g[n], u0)).cwiseAbs().maxCoeff() <= 1e-12);
  }

  TEST_CASE("Duhamel source integrates a constant-in-time modal forcing exactly") {
    const auto op = laplacian(16);
    const Eigen::VectorXd phi = op.eigenvectors.col(0);
    const double lam = op.eigenvalues(0);
    const auto f = [&](double x, double) { return std::sqrt(2.0 / kPi) * std::sin(x); };
    const TimeGrid g(0.0, 1.0, 4);
    const Trajectory out = duhamel_source(op, Eigen::VectorXd::Zero(16), f, g);
    // the sampled forcing is the discrete mode up to rounding
    for (std::size_t n = 0; n < g.size(); ++n) {
      const double exact = -std::expm1(-lam * g[n]) / lam;
      CHECK((out.state(n) - exact * phi).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }

  TEST_CASE("Picard iteration converges to the stepper solution") {
    MixedProblem p = parabola_problem(30, 0.5, 1.0);
    p.horizon = 1.0;
    const TimeGrid g = TimeGrid::from_step(1.0, 1.0 / 256.0);
    const auto res = picard_solve(p, g, 40, 1e-8);
    CHECK(res.report.converged);
    CHECK(res.report.residual <= 2e-8);
    CHECK(res.report.increments.size() == res.report.iterations);
    const auto l1 = solve_mixed_l1(p, g).norms();
    for (std::size_t n = 1; n < g.size(); ++n)
      CHECK(std::abs(res.solution.norms()[n] - l1[n]) / l1[n] <= 5e-3);

    const auto capped = picard_solve(p, g, 2, 1e-8, false);
    CHECK_FALSE(capped.report.converged);
    CHECK_THROWS_AS(picard_solve(p, g, 2, 1e-8), NonConvergence);
  }

  TEST_CASE("decay run takes the modal route for constant data") {
    MixedProblem p = parabola_problem(40, 0.5, 1.0);
    p.decay_mode = true;
    const std::vector<double> ts{10.0, 100.0, 1000.0};
    const auto run = decay_run(p, ts);
    CHECK(run.route == "modal");
    CHECK(run.alpha == 0.5);
    for (double r : run.ratio) CHECK(r > 0.0);
  }

  TEST_CASE("decay run falls back to the stepper for varying coefficients") {
    MixedProblem p = parabola_problem(20, 0.5, 1.0);
    p.spec = OrderSpec::single(0.5, fraccalc::Coefficient::function([](double t) { return 1.0 + 0.5 * std::sin(t); }),
                               0.5, 1.5);
    p.decay_mode = true;
    const std::vector<double> ts{1.0, 5.0, 10.0};
    DecayOptions opts;
    opts.stepper_tau = 1.0 / 32.0;
    const auto run = decay_run(p, ts, opts);
    CHECK(run.route == "stepper");
    CHECK(run.trajectory.norms()[2] < run.trajectory.norms()[0]);
    const std::vector<double> far{1000.0};
    CHECK_THROWS_AS(decay_run(p, far, opts), ValidationError);
  }

  TEST_CASE("problem validation") {
    MixedProblem p = parabola_problem(20, 0.5, 1.0);
    p.c = Reaction::constant(0.5);
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p.c_nonpositive = false;
    CHECK_NOTHROW(p.validate());
    p.decay_mode = true;
    CHECK_THROWS_AS(p.validate(), ValidationError);

    MixedProblem q = parabola_problem(20, 0.5, 1.0);
    q.c = Reaction::field([](double x, double t) { return t - x; });
    CHECK_THROWS_AS(q.validate_on(TimeGrid(0.0, 5.0, 4)), ValidationError);
    q.u0 = Eigen::VectorXd::Ones(5);
    CHECK_THROWS_AS(q.validate(), ValidationError);
  }
}
