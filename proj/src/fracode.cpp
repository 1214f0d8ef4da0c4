#include "fracmix/fracode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "fracmix/error.hpp"
#include "fracmix/quadrature.hpp"
#include "fracmix/special.hpp"

namespace fracmix::fracode {

using detail::require;
using fraccalc::L1Memory;
using fraccalc::L1Weights;
using fraccalc::TimeGrid;

namespace {

constexpr double kPi = std::numbers::pi;

void check_grid(const TimeGrid& grid, double horizon) {
  require(grid.t_start() == 0.0, "solve_l1: grid must start at t = 0");
  require(grid.t_end() >= horizon * (1.0 - 1e-12), "solve_l1: grid does not cover [0, horizon]");
}

}  // namespace

void FracOdeProblem::validate() const {
  spec.validate();
  require(std::isfinite(lambda) && lambda >= 0.0, "FracOdeProblem: lambda must be >= 0");
  require(std::isfinite(v0), "FracOdeProblem: v0 must be finite");
  require(std::isfinite(horizon) && horizon > 0.0, "FracOdeProblem: horizon must be positive");
}

Trajectory solve_l1(const FracOdeProblem& problem, const TimeGrid& grid) {
  problem.validate();
  check_grid(grid, problem.horizon);
  problem.spec.validate_on(grid);

  const std::size_t n_steps = grid.n_steps();
  const double tau = grid.step();
  std::vector<L1Weights> weights;
  weights.reserve(problem.spec.terms.size());
  for (const auto& term : problem.spec.terms) weights.emplace_back(term.alpha, tau, n_steps);
  L1Memory mem(1, n_steps);

  std::vector<double> v(grid.size());
  v[0] = problem.v0;
  for (std::size_t n = 1; n <= n_steps; ++n) {
    const double t = grid[n];
    double lhs = 1.0 / tau + problem.lambda;
    double rhs = v[n - 1] / tau;
    for (std::size_t j = 0; j < weights.size(); ++j) {
      const double q = problem.spec.terms[j].q(t);
      const double b0 = weights[j][0];
      lhs += q * b0;
      rhs += q * (b0 * v[n - 1] - mem.scalar_history(weights[j]));
    }
    if (problem.forcing) rhs += problem.forcing(t);
    v[n] = rhs / lhs;
    mem.push(v[n] - v[n - 1]);
  }
  return Trajectory::scalar(grid, v);
}

double split_point(double alpha, double q1, double lambda) {
  require(alpha > 0.0 && alpha < 1.0, "split_point: alpha must lie in (0,1)");
  require(q1 > 0.0 && lambda > 0.0, "split_point: q1 and lambda must be positive");
  const auto f = [&](double r) { return r + q1 * std::pow(r, alpha) - 0.5 * lambda; };
  double lo = 0.0;
  double hi = lambda;
  for (int i = 0; i < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) <= 0.0 ? lo : hi) = mid;
  }
  // lo keeps f <= 0, i.e. the condition holds on the returned side.
  return lo > 0.0 ? lo : 0.5 * hi;
}

double spectral_tail_bound(const SpectralDensity& p, double t) {
  require(t > 0.0, "spectral_tail_bound: t must be positive");
  const double s = std::sin(kPi * p.alpha);
  const double scale = 1.0 / (kPi * p.q1 * s * std::pow(p.delta, p.alpha));
  // integral_R^inf e^{-rt} (1 + q1 r^{a-1}) dr <= e^{-Rt} (1 + q1 R^{a-1}) / t
  return scale * std::exp(-p.r_max * t) * (1.0 + p.q1 * std::pow(p.r_max, p.alpha - 1.0)) / t;
}

void SpectralDensity::validate() const {
  require(alpha > 0.0 && alpha < 1.0, "SpectralDensity: alpha must lie in (0,1)");
  require(q1 > 0.0 && std::isfinite(q1), "SpectralDensity: q1 must be positive");
  require(lambda > 0.0 && std::isfinite(lambda), "SpectralDensity: lambda must be positive");
  require(delta > 0.0 && delta <= lambda, "SpectralDensity: delta must lie in (0, lambda]");
  require(lambda - delta - q1 * std::pow(delta, alpha) >= 0.5 * lambda * (1.0 - 1e-12),
          "SpectralDensity: split condition lambda - delta - q1 delta^alpha >= lambda/2 violated");
  require(r_max > delta && std::isfinite(r_max), "SpectralDensity: r_max must exceed delta");
}

SpectralDensity SpectralDensity::make(double alpha, double q1, double lambda, double t_min) {
  require(t_min > 0.0, "SpectralDensity: t_min must be positive");
  SpectralDensity p;
  p.alpha = alpha;
  p.q1 = q1;
  p.lambda = lambda;
  p.delta = split_point(alpha, q1, lambda);
  p.r_max = std::max({2.0 * p.delta, 2.0 * lambda, 1.0 / t_min});
  while (spectral_tail_bound(p, t_min) > kSpectralTailBudget) p.r_max *= 1.25;
  p.validate();
  return p;
}

SpectralDensity SpectralDensity::from_problem(const FracOdeProblem& problem, double t_min) {
  problem.validate();
  require(problem.spec.terms.size() == 1, "SpectralDensity: only single-term problems have a spectral form");
  const auto q = problem.spec.terms.front().q.constant_value();
  require(q.has_value(), "SpectralDensity: q must be constant");
  require(!problem.forcing, "SpectralDensity: forcing must be absent");
  return make(problem.spec.terms.front().alpha, *q, problem.lambda, t_min);
}

namespace {

// H(r) / r^{alpha-1}, with the denominator as a sum of squares.
double density_regular_part(const SpectralDensity& p, double r) {
  const double ra = std::pow(r, p.alpha);
  const double re = p.lambda - r + p.q1 * ra * std::cos(kPi * p.alpha);
  const double im = p.q1 * ra * std::sin(kPi * p.alpha);
  return p.lambda * im / (kPi * ra * (re * re + im * im));
}

}  // namespace

double spectral_density(const SpectralDensity& params, double r) {
  require(r > 0.0 && std::isfinite(r), "spectral_density: r must be positive");
  return density_regular_part(params, r) * std::pow(r, params.alpha - 1.0);
}

Trajectory solve_spectral(const SpectralDensity& params, double v0, std::span<const double> times) {
  params.validate();
  require(std::isfinite(v0), "solve_spectral: v0 must be finite");
  require(!times.empty(), "solve_spectral: need at least one time");
  double t_min = std::numeric_limits<double>::infinity();
  for (double t : times) {
    require(t > 0.0 && std::isfinite(t), "solve_spectral: times must be positive");
    t_min = std::min(t_min, t);
  }
  const double tail = spectral_tail_bound(params, t_min);
  if (tail > kSpectralTailBudget) {
    SpectralDensity bigger = params;
    while (spectral_tail_bound(bigger, t_min) > kSpectralTailBudget) bigger.r_max *= 1.25;
    throw TruncationFailure(tail, bigger.r_max);
  }

  std::vector<double> values(times.size(), 0.0);
  if (v0 != 0.0) {
    quadrature::DensityOptions opts;
    opts.split = params.delta;
    opts.r_max = params.r_max;
    opts.rel_tol = 1e-11;
    opts.smooth_power = params.alpha;
    if (params.lambda < params.r_max) opts.breakpoints.push_back(params.lambda);
    const auto g = [&](double r) { return density_regular_part(params, r); };
    for (std::size_t i = 0; i < times.size(); ++i) {
      const auto est = quadrature::integrate_power_weighted(g, params.alpha - 1.0, times[i], opts);
      if (!(est.error <= 1e-8 * std::abs(est.value)))
        throw NonConvergence("solve_spectral: quadrature error above budget at t = " + std::to_string(times[i]),
                             est.error);
      values[i] = v0 * est.value;
    }
  }
  return Trajectory::scalar(std::vector<double>(times.begin(), times.end()), values);
}

DecayConstants decay_constants(const SpectralDensity& params, double t0) {
  params.validate();
  require(t0 > 0.0 && std::isfinite(t0), "decay_constants: t0 must be positive");
  const double a = params.alpha;
  const double q = params.q1;
  const double s = std::sin(kPi * a);
  const double ga = special::gamma(a);
  DecayConstants c;
  c.t0 = t0;
  c.alpha = a;
  c.c_upper = 2.0 / kPi * q * s * ga + (std::pow(t0, a - 1.0) + q * ga) / (kPi * q * s * std::pow(params.delta, a));
  c.c_lower = params.lambda * q * s / (kPi * (params.lambda + q) * (params.lambda + q)) *
              special::lower_incomplete_gamma(a, t0);
  return c;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "pass";
    case Verdict::fail:
      return "fail";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

namespace {

const TimeGrid& require_grid(const Trajectory& traj, const char* who) {
  require(traj.is_scalar(), std::string(who) + ": trajectory must be scalar");
  require(traj.grid().has_value(), std::string(who) + ": trajectory must live on a uniform grid");
  return *traj.grid();
}

// w' + sum q D^a w + lambda w at every node (entry 0 left at 0).
std::vector<double> relaxation_residual(const std::vector<double>& w, const fraccalc::OrderSpec& spec,
                                        double lambda, const TimeGrid& grid) {
  std::vector<double> res = fraccalc::multi_term_apply(w, spec, grid);
  res[0] = 0.0;
  for (std::size_t n = 1; n < w.size(); ++n) res[n] += (w[n] - w[n - 1]) / grid.step() + lambda * w[n];
  return res;
}

}  // namespace

MaxPrincipleReport max_principle_check(const Trajectory& w, const fraccalc::OrderSpec& spec, double lambda,
                                       double tol) {
  const TimeGrid& grid = require_grid(w, "max_principle_check");
  require(lambda >= 0.0, "max_principle_check: lambda must be >= 0");
  require(tol >= 0.0, "max_principle_check: tol must be >= 0");
  spec.validate();
  const std::vector<double> v = w.values();

  MaxPrincipleReport out;
  double b0_sum = 0.0;
  for (const auto& term : spec.terms) {
    const double q_up = std::isfinite(spec.q_upper) ? spec.q_upper : 0.0;
    b0_sum += q_up * std::pow(grid.step(), -term.alpha) * special::rgamma(2.0 - term.alpha);
  }
  out.kappa = 1.0 + grid.t_end() * (lambda + b0_sum);

  const std::vector<double> res = relaxation_residual(v, spec, lambda, grid);
  out.max_residual = res.size() > 1 ? *std::max_element(res.begin() + 1, res.end()) : 0.0;
  const auto it = std::max_element(v.begin(), v.end());
  out.max_value = *it;
  out.worst_index = static_cast<std::size_t>(it - v.begin());
  out.hypotheses_hold = out.max_residual <= tol && v[0] <= tol;
  if (!out.hypotheses_hold) {
    out.verdict = Verdict::pass;  // the implication holds vacuously
    return out;
  }
  out.verdict = out.max_value <= tol * out.kappa ? Verdict::pass : Verdict::fail;
  return out;
}

SignReport frac_derivative_sign_check(const Trajectory& z, const fraccalc::OrderSpec& spec, double lambda,
                                      double tol) {
  const TimeGrid& grid = require_grid(z, "frac_derivative_sign_check");
  spec.validate();
  require(spec.terms.size() == 1, "frac_derivative_sign_check: exactly one fractional order is required");
  require(spec.q_lower > 0.0, "frac_derivative_sign_check: q must be bounded below by a positive q_lower");
  require(lambda > 0.0, "frac_derivative_sign_check: lambda must be positive");
  require(tol >= 0.0, "frac_derivative_sign_check: tol must be >= 0");
  const std::vector<double> v = z.values();

  SignReport out;
  for (std::size_t n = 0; n < v.size(); ++n) {
    if (v[n] < -tol) {
      out.verdict = Verdict::inconclusive;
      out.worst_index = n;
      out.reason = "z below -tol";
      return out;
    }
  }
  const std::vector<double> res = relaxation_residual(v, spec, lambda, grid);
  for (std::size_t n = 1; n < res.size(); ++n) {
    if (res[n] > tol) {
      out.verdict = Verdict::inconclusive;
      out.worst_index = n;
      out.reason = "residual above tol";
      return out;
    }
  }
  const std::vector<double> d = fraccalc::caputo_l1(v, spec.terms.front().alpha, grid);
  const auto it = std::max_element(d.begin(), d.end());
  out.max_derivative = *it;
  out.worst_index = static_cast<std::size_t>(it - d.begin());
  out.verdict = out.max_derivative <= tol ? Verdict::pass : Verdict::fail;
  return out;
}

}  // namespace fracmix::fracode
