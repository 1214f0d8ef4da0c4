#include "fracmix/verify_suite.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "fracmix/analysis.hpp"
#include "fracmix/config.hpp"
#include "fracmix/fraccalc.hpp"
#include "fracmix/fracode.hpp"
#include "fracmix/mlfunc.hpp"
#include "fracmix/pde1d.hpp"
#include "fracmix/quadrature.hpp"
#include "fracmix/rng.hpp"
#include "fracmix/special.hpp"

namespace fracmix::cli {

namespace {

using fraccalc::TimeGrid;
using fracode::Verdict;

constexpr double kPi = std::numbers::pi;

std::string kv(const std::string& key, double v) { return key + "=" + format_real(v); }

// Sum of a few random sinusoids per component, evaluated on the grid.
Eigen::MatrixXd random_smooth_path(Rng& rng, Eigen::Index dim, const TimeGrid& grid) {
  Eigen::MatrixXd y(dim, static_cast<Eigen::Index>(grid.size()));
  for (Eigen::Index i = 0; i < dim; ++i) {
    double c[4], f[4], ph[4];
    for (int m = 0; m < 4; ++m) {
      c[m] = rng.uniform(-1.0, 1.0) / (1.0 + m);
      f[m] = rng.uniform(0.5, 6.0);
      ph[m] = rng.uniform(0.0, 2.0 * kPi);
    }
    for (std::size_t n = 0; n < grid.size(); ++n) {
      double v = 0.0;
      for (int m = 0; m < 4; ++m) v += c[m] * std::sin(f[m] * grid[n] + ph[m]);
      y(i, static_cast<Eigen::Index>(n)) = v;
    }
  }
  return y;
}

CheckResult ml_complete_monotone(Rng& rng, std::size_t trials) {
  CheckResult r{"ml_complete_monotone", true, {}};
  double worst_rise = 0.0;
  double min_value = 1.0;
  for (std::size_t k = 0; k < trials; ++k) {
    const mlfunc::MLParams p{rng.uniform(0.1, 0.95), 1.0, 5.0, 1e-12};
    double prev = mlfunc::mittag_leffler(p, 0.0);
    for (int i = 1; i <= 60; ++i) {
      const double v = mlfunc::mittag_leffler(p, -0.05 * i * i);
      worst_rise = std::max(worst_rise, v - prev);
      min_value = std::min(min_value, v);
      prev = v;
    }
  }
  r.passed = worst_rise <= 1e-12 && min_value > 0.0;
  r.detail = kv("max_rise", worst_rise) + " " + kv("min_value", min_value);
  return r;
}

CheckResult ml_sector_bound(Rng& rng, std::size_t trials) {
  CheckResult r{"ml_sector_bound", true, {}};
  std::vector<double> xs;
  for (int i = 0; i <= 48; ++i) xs.push_back(std::pow(10.0, -2.0 + 6.0 * i / 48.0));
  double worst = 0.0;
  for (std::size_t k = 0; k < std::max<std::size_t>(1, trials / 4); ++k) {
    const mlfunc::MLParams p{rng.uniform(0.2, 0.9), rng.uniform(0.5, 2.0), 5.0, 1e-10};
    worst = std::max(worst, mlfunc::sector_constant(p, xs));
  }
  r.passed = std::isfinite(worst) && worst > 0.0;
  r.detail = kv("max_sector_constant", worst);
  return r;
}

CheckResult ml_regime_consistency(Rng& rng, std::size_t trials) {
  CheckResult r{"ml_regime_consistency", true, {}};
  const double alphas[] = {0.8, 0.9, 1.0};
  double worst = 0.0;
  for (std::size_t k = 0; k < trials; ++k) {
    const mlfunc::MLParams p{alphas[rng.index(3)], 1.0, 5.0, 1e-8};
    const double x = p.series_radius * rng.uniform(0.9, 1.1);
    const auto a = mlfunc::mittag_leffler(p, {-x, 0.0}, mlfunc::Regime::series);
    const auto b = mlfunc::mittag_leffler(p, {-x, 0.0}, mlfunc::Regime::negative_axis);
    worst = std::max(worst, std::abs(a - b));
  }
  r.passed = worst <= 10.0 * 1e-8;
  r.detail = kv("max_difference", worst);
  return r;
}

CheckResult kernel_identity(Rng& rng, std::size_t trials) {
  CheckResult r{"kernel_identity", true, {}};
  double worst = 0.0;
  for (std::size_t k = 0; k < trials; ++k) {
    const double beta = rng.uniform(0.0, 0.95);
    const double lambda = rng.uniform(0.1, 10.0);
    const double s = rng.uniform(0.0, 2.0);
    const double t = s + rng.uniform(0.01, 3.0);
    const double len = t - s;
    // int_s^t (t - u)^{-beta} e^{-lambda (u - s)} du in the lag sigma = t - u
    const auto rule = quadrature::gauss_jacobi_left_singular(64, -beta, len);
    double quad = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
      quad += rule.weights[i] * std::exp(-lambda * (len - rule.nodes[i]));
    quad *= special::rgamma(1.0 - beta);
    const mlfunc::MLParams p{1.0, 2.0 - beta, 5.0, 1e-13};
    const double closed = std::pow(len, 1.0 - beta) * mlfunc::mittag_leffler(p, -lambda * len);
    worst = std::max(worst, std::abs(quad - closed));
  }
  r.passed = worst <= 1e-8;
  r.detail = kv("max_difference", worst);
  return r;
}

CheckResult l1_weights(Rng& rng, std::size_t trials) {
  CheckResult r{"l1_weights", true, {}};
  double worst_telescope = 0.0;
  for (std::size_t k = 0; k < trials; ++k) {
    const double alpha = rng.uniform(0.05, 0.95);
    const double tau = rng.uniform(1e-3, 0.5);
    const fraccalc::L1Weights w(alpha, tau, 300);
    double sum = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (!(w[i] > 0.0) || (i > 0 && !(w[i] < w[i - 1]))) r.passed = false;
      sum += w[i];
    }
    const double scaled = sum * std::pow(tau, alpha) * special::gamma(2.0 - alpha);
    worst_telescope = std::max(worst_telescope, std::abs(scaled - std::pow(300.0, 1.0 - alpha)) / std::pow(300.0, 1.0 - alpha));
  }
  r.passed = r.passed && worst_telescope <= 1e-12;
  r.detail = kv("max_telescope_error", worst_telescope);
  return r;
}

CheckResult l1_affine_and_linear(Rng& rng, std::size_t trials) {
  CheckResult r{"l1_affine_and_linear", true, {}};
  double worst_affine = 0.0;
  double worst_linear = 0.0;
  for (std::size_t k = 0; k < trials; ++k) {
    const double alpha = rng.uniform(0.05, 0.95);
    const TimeGrid grid(0.0, rng.uniform(0.5, 3.0), 128);
    const double c0 = rng.uniform(-2.0, 2.0), c1 = rng.uniform(-2.0, 2.0);
    std::vector<double> y(grid.size()), z(grid.size()), comb(grid.size());
    for (std::size_t n = 0; n < grid.size(); ++n) {
      y[n] = c0 + c1 * grid[n];
      z[n] = std::sin(3.0 * grid[n]);
      comb[n] = 2.0 * y[n] - 0.5 * z[n];
    }
    const auto dy = fraccalc::caputo_l1(y, alpha, grid);
    const auto dz = fraccalc::caputo_l1(z, alpha, grid);
    const auto dc = fraccalc::caputo_l1(comb, alpha, grid);
    for (std::size_t n = 1; n < grid.size(); ++n) {
      const double exact = c1 * std::pow(grid[n], 1.0 - alpha) * special::rgamma(2.0 - alpha);
      worst_affine = std::max(worst_affine, std::abs(dy[n] - exact) / (1.0 + std::abs(exact)));
      worst_linear = std::max(worst_linear, std::abs(dc[n] - (2.0 * dy[n] - 0.5 * dz[n])) / (1.0 + std::abs(dc[n])));
    }
  }
  r.passed = worst_affine <= 1e-11 && worst_linear <= 1e-12;
  r.detail = kv("max_affine_error", worst_affine) + " " + kv("max_linearity_error", worst_linear);
  return r;
}

CheckResult rl_semigroup(Rng& rng, std::size_t) {
  CheckResult r{"rl_semigroup", true, {}};
  const double g1 = rng.uniform(0.2, 0.5), g2 = rng.uniform(0.2, 0.5);
  double prev = 0.0;
  std::string detail;
  for (int level = 0; level < 3; ++level) {
    const TimeGrid grid(0.0, 1.0, static_cast<std::size_t>(64) << level);
    std::vector<double> y(grid.size());
    for (std::size_t n = 0; n < grid.size(); ++n) y[n] = std::sin(grid[n]);
    const auto inner = fraccalc::rl_integral(y, g2, grid);
    const auto composed = fraccalc::rl_integral(inner, g1, grid);
    const auto direct = fraccalc::rl_integral(y, g1 + g2, grid);
    double diff = 0.0;
    for (std::size_t n = 0; n < grid.size(); ++n) diff = std::max(diff, std::abs(composed[n] - direct[n]));
    if (level > 0 && !(diff < prev)) r.passed = false;
    detail += (level ? " " : "") + kv("diff_" + std::to_string(level), diff);
    prev = diff;
  }
  r.detail = detail;
  return r;
}

CheckResult coercivity(Rng& rng, std::size_t trials) {
  CheckResult r{"coercivity", true, {}};
  const double alphas[] = {0.2, 0.5, 0.8};
  const TimeGrid grid(0.0, 1.0, 256);
  double worst = 0.0;
  for (std::size_t k = 0; k < trials; ++k) {
    const Eigen::MatrixXd y = random_smooth_path(rng, 5, grid);
    const auto gap = fraccalc::coercivity_gap(y, alphas[k % 3], grid);
    worst = std::min(worst, *std::min_element(gap.begin(), gap.end()));
  }
  r.passed = worst >= -1e-3;
  r.detail = kv("min_gap", worst);
  return r;
}

fraccalc::OrderSpec random_varying_spec(Rng& rng) {
  const double alpha = rng.uniform(0.1, 0.9);
  const double q0 = rng.uniform(0.2, 2.0);
  const double amp = rng.uniform(0.0, 0.9) * q0;
  const double freq = rng.uniform(0.5, 3.0);
  return fraccalc::OrderSpec::single(
      alpha, fraccalc::Coefficient::function([=](double t) { return q0 + amp * std::sin(freq * t); }), q0 - amp,
      q0 + amp);
}

CheckResult max_principle(Rng& rng, std::size_t trials) {
  CheckResult r{"max_principle", true, {}};
  std::size_t failures = 0;
  for (std::size_t k = 0; k < trials; ++k) {
    fracode::FracOdeProblem p;
    p.spec = random_varying_spec(rng);
    p.lambda = rng.uniform(0.0, 3.0);
    p.v0 = -rng.uniform(0.0, 1.0);
    const double f0 = -rng.uniform(0.0, 0.2);
    p.forcing = [=](double t) { return f0 * std::exp(-t); };
    p.horizon = 2.0;
    const TimeGrid grid(0.0, p.horizon, 256);
    const Trajectory w = fracode::solve_l1(p, grid);
    double hist = 0.0;
    for (double v : w.values()) hist = std::max(hist, std::abs(v));
    const auto rep = fracode::max_principle_check(w, p.spec, p.lambda, 1e-6 * (1.0 + hist));
    if (rep.verdict == Verdict::fail || !rep.hypotheses_hold) ++failures;
  }
  r.passed = failures == 0;
  r.detail = "failures=" + std::to_string(failures);
  return r;
}

CheckResult sign_lemma(Rng& rng, std::size_t trials) {
  CheckResult r{"sign_lemma", true, {}};
  std::size_t failures = 0, inconclusive = 0;
  for (std::size_t k = 0; k < trials; ++k) {
    fracode::FracOdeProblem p;
    p.spec = random_varying_spec(rng);
    p.lambda = rng.uniform(0.1, 3.0);
    p.v0 = rng.uniform(0.0, 1.0);
    p.horizon = 2.0;
    const TimeGrid grid(0.0, p.horizon, 256);
    const Trajectory z = fracode::solve_l1(p, grid);
    double hist = 0.0;
    for (double v : z.values()) hist = std::max(hist, std::abs(v));
    const auto rep = fracode::frac_derivative_sign_check(z, p.spec, p.lambda, 1e-6 * (1.0 + hist));
    if (rep.verdict == Verdict::fail) ++failures;
    if (rep.verdict == Verdict::inconclusive) ++inconclusive;
  }
  r.passed = failures == 0 && inconclusive == 0;
  r.detail = "failures=" + std::to_string(failures) + " inconclusive=" + std::to_string(inconclusive);
  return r;
}

CheckResult spectral_monotone(Rng& rng, std::size_t trials) {
  CheckResult r{"spectral_complete_monotone", true, {}};
  double worst_delta = 0.0;
  for (std::size_t k = 0; k < std::max<std::size_t>(1, trials / 4); ++k) {
    const double a = rng.uniform(0.1, 0.9), q = rng.uniform(0.3, 3.0), l = rng.uniform(0.3, 3.0);
    const auto params = fracode::SpectralDensity::make(a, q, l, 0.1);
    worst_delta = std::min(worst_delta, l - params.delta - q * std::pow(params.delta, a) - 0.5 * l);
    std::vector<double> ts;
    for (int i = 1; i <= 40; ++i) ts.push_back(0.25 * i);
    const auto v = fracode::solve_spectral(params, 1.0, ts).values();
    for (std::size_t i = 0; i + 1 < v.size(); ++i)
      if (!(v[i] > v[i + 1] && v[i + 1] > 0.0)) r.passed = false;
    for (std::size_t i = 1; i + 1 < v.size(); ++i)
      if (v[i + 1] - 2.0 * v[i] + v[i - 1] < -1e-12) r.passed = false;
  }
  r.passed = r.passed && worst_delta >= -1e-12 * 3.0;
  r.detail = kv("min_split_margin", worst_delta);
  return r;
}

CheckResult operator_spectrum(Rng& rng, std::size_t trials) {
  CheckResult r{"operator_spectrum", true, {}};
  const double slope = rng.uniform(0.0, 1.0);
  const auto op = pde1d::build_operator(kPi, 60, [=](double x) { return 1.0 + slope * x; }, 1.0);
  const Eigen::MatrixXd gram = op.h * op.eigenvectors.transpose() * op.eigenvectors;
  const double ortho = (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
  double worst_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < trials; ++k) {
    Eigen::VectorXd w(static_cast<Eigen::Index>(op.n_x));
    for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = rng.uniform(-1.0, 1.0);
    worst_ratio = std::min(worst_ratio, op.inner(op.apply(w), w) / (op.eigenvalues(0) * op.inner(w, w)));
  }
  bool ascending = op.eigenvalues(0) > 0.0;
  for (Eigen::Index k = 1; k < op.eigenvalues.size(); ++k) ascending = ascending && op.eigenvalues(k) >= op.eigenvalues(k - 1);
  r.passed = ortho <= 1e-10 && worst_ratio >= 1.0 - 1e-12 && ascending;
  r.detail = kv("max_orthonormality_error", ortho) + " " + kv("min_rayleigh_ratio", worst_ratio);
  return r;
}

CheckResult semigroup_bound(Rng& rng, std::size_t trials) {
  CheckResult r{"semigroup_bound", true, {}};
  const auto op = pde1d::build_operator(kPi, 50, [](double) { return 1.0; }, 1.0);
  double worst = 0.0;
  for (std::size_t k = 0; k < trials; ++k) {
    Eigen::VectorXd g(static_cast<Eigen::Index>(op.n_x));
    for (Eigen::Index i = 0; i < g.size(); ++i) g(i) = rng.uniform(-1.0, 1.0);
    for (double t : {0.1, 1.0, 10.0}) {
      const double lhs = op.norm(pde1d::semigroup_apply(op, t, g));
      const double rhs = std::exp(-op.eigenvalues(0) * t) * op.norm(g);
      worst = std::max(worst, (lhs - rhs) / rhs);
    }
  }
  r.passed = worst <= 1e-12;
  r.detail = kv("max_excess", worst);
  return r;
}

CheckResult fit_equivariance(Rng& rng, std::size_t trials) {
  CheckResult r{"fit_scale_equivariance", true, {}};
  double worst = 0.0;
  for (std::size_t k = 0; k < trials; ++k) {
    const double rate = rng.uniform(0.1, 0.9), scale = rng.uniform(0.1, 10.0);
    std::vector<double> ts, a, b;
    for (int i = 0; i < 20; ++i) {
      const double t = std::pow(10.0, 2.0 + 2.0 * i / 19.0);
      ts.push_back(t);
      a.push_back(std::pow(t, -rate) * (1.0 + 1.0 / t));
      b.push_back(scale * a.back());
    }
    const auto fa = analysis::fit_decay(ts, a, 100.0, 1e4);
    const auto fb = analysis::fit_decay(ts, b, 100.0, 1e4);
    worst = std::max({worst, std::abs(fa.slope - fb.slope), std::abs(fb.intercept - fa.intercept - std::log(scale))});
  }
  r.passed = worst <= 1e-10;
  r.detail = kv("max_deviation", worst);
  return r;
}

CheckResult gronwall_monotone(Rng& rng, std::size_t) {
  CheckResult r{"gronwall_monotone", true, {}};
  const TimeGrid grid(0.0, 1.0, 64);
  const double b = rng.uniform(0.1, 2.0), beta = rng.uniform(0.2, 1.0);
  std::vector<double> a(grid.size()), a2(grid.size());
  for (std::size_t n = 0; n < grid.size(); ++n) {
    a[n] = rng.uniform(0.0, 1.0);
    a2[n] = a[n] + rng.uniform(0.0, 0.5);
  }
  const auto e1 = analysis::gronwall_envelope(a, grid, b, beta);
  const auto e2 = analysis::gronwall_envelope(a2, grid, b, beta);
  double worst = 0.0;
  for (std::size_t n = 0; n < grid.size(); ++n) worst = std::max(worst, e1[n] - e2[n]);
  r.passed = worst <= 0.0;
  r.detail = kv("max_violation", worst);
  return r;
}

CheckResult sandwich_discriminates(Rng& rng, std::size_t) {
  CheckResult r{"sandwich_discriminates", true, {}};
  const double a = rng.uniform(0.25, 0.75);
  const auto params = fracode::SpectralDensity::make(a, 1.0, 1.0, 1.0);
  const auto c = fracode::decay_constants(params, 1.0);
  const std::vector<double> ts{1.0, 10.0, 100.0, 1000.0};
  const auto v = fracode::solve_spectral(params, 1.0, ts).values();
  const auto good = analysis::sandwich_check(ts, v, c, 1.0);
  std::vector<double> inflated;
  for (double t : ts) inflated.push_back(1.01 * c.c_upper * std::pow(t, -a));
  const auto bad = analysis::sandwich_check(ts, inflated, c, 1.0);
  r.passed = good.verdict == Verdict::pass && bad.verdict == Verdict::fail;
  r.detail = kv("min_lower_margin", good.min_lower_margin) + " " + kv("max_upper_margin", good.max_upper_margin);
  return r;
}

CheckResult comparison_principle(Rng& rng, std::size_t) {
  CheckResult r{"comparison_principle", true, {}};
  pde1d::MixedProblem p;
  p.op = pde1d::build_operator(kPi, 24, [](double) { return 1.0; }, 1.0);
  p.spec = fraccalc::OrderSpec::single_constant(rng.uniform(0.2, 0.8), rng.uniform(0.5, 2.0));
  p.u0 = p.op.sample([](double x) { return x * (kPi - x); });
  p.decay_mode = true;
  const std::vector<double> ts{0.5, 1.0, 2.0, 5.0, 10.0};
  const auto n0 = pde1d::modal_oracle(p, ts).norms();
  p.c = pde1d::Reaction::constant(-rng.uniform(0.1, 2.0));
  const auto n1 = pde1d::modal_oracle(p, ts).norms();
  double worst = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) worst = std::max(worst, n1[i] - n0[i]);
  r.passed = worst <= 0.0;
  r.detail = kv("max_increase", worst);
  return r;
}

}  // namespace

std::vector<CheckResult> run_verify_suite(std::uint64_t seed, std::size_t trials) {
  Rng rng(seed);
  using Check = CheckResult (*)(Rng&, std::size_t);
  const Check checks[] = {ml_complete_monotone, ml_sector_bound,   ml_regime_consistency, kernel_identity,
                          l1_weights,           l1_affine_and_linear, rl_semigroup,        coercivity,
                          max_principle,        sign_lemma,        spectral_monotone,     operator_spectrum,
                          semigroup_bound,      fit_equivariance,  gronwall_monotone,     sandwich_discriminates,
                          comparison_principle};
  std::vector<CheckResult> out;
  for (Check c : checks) out.push_back(c(rng, trials));
  return out;
}

}  // namespace fracmix::cli
