#include "fracmix/pde1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include <Eigen/Eigenvalues>

#include "fracmix/error.hpp"
#include "fracmix/fracode.hpp"
#include "fracmix/parallel.hpp"

namespace fracmix::pde1d {

using detail::require;
using fraccalc::L1Memory;
using fraccalc::L1Weights;
using fraccalc::TimeGrid;

Eigen::VectorXd EllipticOp1D::apply(const Eigen::VectorXd& u) const {
  require(u.size() == static_cast<Eigen::Index>(n_x), "EllipticOp1D: vector size mismatch");
  Eigen::VectorXd out = diag.cwiseProduct(u);
  const Eigen::Index m = static_cast<Eigen::Index>(n_x) - 1;
  out.head(m) += off.cwiseProduct(u.tail(m));
  out.tail(m) += off.cwiseProduct(u.head(m));
  return out;
}

double EllipticOp1D::norm(const Eigen::VectorXd& u) const { return std::sqrt(h) * u.norm(); }

Eigen::VectorXd EllipticOp1D::project(const Eigen::VectorXd& g) const {
  require(g.size() == static_cast<Eigen::Index>(n_x), "EllipticOp1D: vector size mismatch");
  return h * (eigenvectors.transpose() * g);
}

Eigen::VectorXd EllipticOp1D::synthesize(const Eigen::VectorXd& d) const { return eigenvectors * d; }

Eigen::VectorXd EllipticOp1D::sample(const std::function<double(double)>& fn) const {
  Eigen::VectorXd v(static_cast<Eigen::Index>(n_x));
  for (std::size_t i = 0; i < n_x; ++i) v(static_cast<Eigen::Index>(i)) = fn(x[i]);
  return v;
}

EllipticOp1D build_operator(double length, std::size_t n_x, const std::function<double(double)>& a, double nu) {
  require(std::isfinite(length) && length > 0.0, "build_operator: length must be positive");
  require(n_x >= 3, "build_operator: need n_x >= 3");
  require(nu > 0.0, "build_operator: nu must be positive");
  require(static_cast<bool>(a), "build_operator: diffusivity missing");

  EllipticOp1D op;
  op.length = length;
  op.n_x = n_x;
  op.nu = nu;
  op.h = length / static_cast<double>(n_x + 1);
  op.x.resize(n_x);
  for (std::size_t i = 0; i < n_x; ++i) op.x[i] = op.h * static_cast<double>(i + 1);
  op.a_mid.resize(n_x + 1);
  for (std::size_t i = 0; i <= n_x; ++i) {
    const double xm = op.h * (static_cast<double>(i) + 0.5);
    const double v = a(xm);
    if (!(v >= nu))
      throw ValidationError("build_operator: ellipticity violated, a(" + std::to_string(xm) + ") = " +
                            std::to_string(v) + " < nu = " + std::to_string(nu));
    op.a_mid[i] = v;
  }

  const auto n = static_cast<Eigen::Index>(n_x);
  const double inv_h2 = 1.0 / (op.h * op.h);
  op.diag.resize(n);
  op.off.resize(n - 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    op.diag(i) = (op.a_mid[k] + op.a_mid[k + 1]) * inv_h2;
    if (i + 1 < n) op.off(i) = -op.a_mid[k + 1] * inv_h2;
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(op.diag, op.off, Eigen::ComputeEigenvectors);
  require(solver.info() == Eigen::Success, "build_operator: tridiagonal eigensolver failed");
  op.eigenvalues = solver.eigenvalues();
  op.eigenvectors = solver.eigenvectors() / std::sqrt(op.h);
  for (Eigen::Index k = 0; k < n; ++k) {
    // Fix the sign so the first nonzero component is positive.
    Eigen::Index i = 0;
    while (i + 1 < n && std::abs(op.eigenvectors(i, k)) < 1e-300) ++i;
    if (op.eigenvectors(i, k) < 0.0) op.eigenvectors.col(k) *= -1.0;
  }
  return op;
}

Eigen::VectorXd semigroup_apply(const EllipticOp1D& op, double t, const Eigen::VectorXd& g) {
  require(t >= 0.0 && std::isfinite(t), "semigroup_apply: t must be >= 0");
  if (t == 0.0) return g;
  const Eigen::VectorXd d = op.project(g);
  const Eigen::VectorXd decay = (-t * op.eigenvalues.array()).exp().matrix();
  return op.synthesize(d.cwiseProduct(decay));
}

Reaction Reaction::constant(double c) {
  Reaction r;
  r.constant_ = c;
  return r;
}

Reaction Reaction::field(Field fn) {
  require(static_cast<bool>(fn), "Reaction: empty field");
  Reaction r;
  r.constant_.reset();
  r.fn_ = std::move(fn);
  return r;
}

void MixedProblem::validate() const {
  spec.validate();
  require(op.n_x >= 3 && op.eigenvectors.cols() == static_cast<Eigen::Index>(op.n_x),
          "MixedProblem: operator not built");
  require(u0.size() == static_cast<Eigen::Index>(op.n_x), "MixedProblem: u0 size does not match the grid");
  require(u0.allFinite(), "MixedProblem: u0 must be finite");
  require(std::isfinite(horizon) && horizon > 0.0, "MixedProblem: horizon must be positive");
  if (decay_mode) {
    require(!f, "MixedProblem: decay mode requires f to be absent");
    require(c_nonpositive, "MixedProblem: decay mode requires c <= 0");
  }
  if (auto cv = c.constant_value()) {
    require(std::isfinite(*cv), "MixedProblem: c must be finite");
    if (c_nonpositive) require(*cv <= 0.0, "MixedProblem: c declared non-positive but c > 0");
  }
}

void MixedProblem::validate_on(const TimeGrid& grid) const {
  validate();
  spec.validate_on(grid);
  if (c.constant_value() || !c_nonpositive) return;
  for (double t : grid.points())
    for (double xi : op.x) {
      const double v = c(xi, t);
      if (!(v <= 0.0))
        throw ValidationError("MixedProblem: c(" + std::to_string(xi) + ", " + std::to_string(t) + ") = " +
                              std::to_string(v) + " violates the declared sign c <= 0");
    }
}

namespace {

void check_grid(const TimeGrid& grid, double horizon, const char* who) {
  require(grid.t_start() == 0.0, std::string(who) + ": grid must start at t = 0");
  require(grid.t_end() >= horizon * (1.0 - 1e-12), std::string(who) + ": grid does not cover [0, horizon]");
}

// Solves the symmetric tridiagonal system (diag, off) x = b by LDL^T.
void solve_tridiagonal(const Eigen::VectorXd& diag, const Eigen::VectorXd& off, Eigen::VectorXd& b,
                       Eigen::VectorXd& pivot) {
  const Eigen::Index n = diag.size();
  pivot(0) = diag(0);
  if (!(pivot(0) > 0.0)) throw SingularityError(0, pivot(0));
  for (Eigen::Index i = 1; i < n; ++i) {
    const double l = off(i - 1) / pivot(i - 1);
    pivot(i) = diag(i) - l * off(i - 1);
    if (!(pivot(i) > 0.0)) throw SingularityError(static_cast<std::size_t>(i), pivot(i));
    b(i) -= l * b(i - 1);
  }
  b(n - 1) /= pivot(n - 1);
  for (Eigen::Index i = n - 2; i >= 0; --i) b(i) = (b(i) - off(i) * b(i + 1)) / pivot(i);
}

Eigen::VectorXd sample_field(const EllipticOp1D& op, const Field& f, double t) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(op.n_x));
  for (std::size_t i = 0; i < op.n_x; ++i) v(static_cast<Eigen::Index>(i)) = f(op.x[i], t);
  return v;
}

Eigen::VectorXd sample_reaction(const EllipticOp1D& op, const Reaction& c, double t) {
  if (auto cv = c.constant_value()) return Eigen::VectorXd::Constant(static_cast<Eigen::Index>(op.n_x), *cv);
  Eigen::VectorXd v(static_cast<Eigen::Index>(op.n_x));
  for (std::size_t i = 0; i < op.n_x; ++i) v(static_cast<Eigen::Index>(i)) = c(op.x[i], t);
  return v;
}

// Weights of int_0^tau e^{-lambda s} [g_prev s/tau + g_next (1 - s/tau)] ds.
struct CellWeights {
  double decay;
  double w_prev;
  double w_next;
};

CellWeights cell_weights(double lambda, double tau) {
  const double z = lambda * tau;
  CellWeights w{std::exp(-z), 0.0, 0.0};
  double a;  // (1 - e^{-z}(1 + z)) / z^2
  double b;  // (1 - e^{-z}) / z
  if (z < 0.1) {
    a = 0.0;
    b = 0.0;
    double term = 1.0;  // z^k / k!
    for (int k = 1; k <= 24; ++k) {
      term *= z / k;
      const double sign = (k % 2 == 1) ? 1.0 : -1.0;
      b += sign * term / z;
      if (k >= 2) a += -sign * (k - 1) * term / (z * z);
    }
    if (z == 0.0) {
      a = 0.5;
      b = 1.0;
    }
  } else {
    const double one_minus = -std::expm1(-z);
    a = (one_minus - z * w.decay) / (z * z);
    b = one_minus / z;
  }
  w.w_prev = tau * a;
  w.w_next = tau * (b - a);
  return w;
}

// Modal amplitudes of y' = -A y + g with y(0) = d0 (g given by its modal
// samples, possibly empty) at every grid node.
Eigen::MatrixXd propagate_modes(const EllipticOp1D& op, const Eigen::VectorXd& d0, const Eigen::MatrixXd& g,
                                const TimeGrid& grid) {
  const auto n_modes = static_cast<Eigen::Index>(op.n_x);
  const auto cols = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXd d(n_modes, cols);
  d.col(0) = d0;
  const bool forced = g.size() > 0;
  for (Eigen::Index k = 0; k < n_modes; ++k) {
    const CellWeights w = cell_weights(op.eigenvalues(k), grid.step());
    double y = d0(k);
    for (Eigen::Index n = 1; n < cols; ++n) {
      y *= w.decay;
      if (forced) y += w.w_prev * g(k, n - 1) + w.w_next * g(k, n);
      d(k, n) = y;
    }
  }
  return d;
}

// Modal coefficients of every column.
Eigen::MatrixXd h_project(const EllipticOp1D& op, const Eigen::MatrixXd& states) {
  return op.h * (op.eigenvectors.transpose() * states);
}

double sup_norm_diff(const EllipticOp1D& op, const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  double worst = 0.0;
  for (Eigen::Index n = 0; n < a.cols(); ++n) worst = std::max(worst, op.norm(a.col(n) - b.col(n)));
  return worst;
}

}  // namespace

Trajectory solve_mixed_l1(const MixedProblem& problem, const TimeGrid& grid) {
  check_grid(grid, problem.horizon, "solve_mixed_l1");
  problem.validate_on(grid);
  const EllipticOp1D& op = problem.op;
  const auto dim = static_cast<Eigen::Index>(op.n_x);
  const std::size_t n_steps = grid.n_steps();
  const double tau = grid.step();

  std::vector<L1Weights> weights;
  for (const auto& term : problem.spec.terms) weights.emplace_back(term.alpha, tau, n_steps);
  L1Memory mem(dim, n_steps);

  Eigen::MatrixXd states(dim, static_cast<Eigen::Index>(grid.size()));
  states.col(0) = problem.u0;
  Eigen::VectorXd lhs_diag(dim), rhs(dim), pivot(dim), prev(dim);
  for (std::size_t n = 1; n <= n_steps; ++n) {
    const double t = grid[n];
    prev = states.col(static_cast<Eigen::Index>(n) - 1);
    double shift = 1.0 / tau;
    rhs = prev / tau;
    for (std::size_t j = 0; j < weights.size(); ++j) {
      const double q = problem.spec.terms[j].q(t);
      const double b0 = weights[j][0];
      shift += q * b0;
      rhs += q * (b0 * prev - mem.history(weights[j]));
    }
    if (problem.f) rhs += sample_field(op, problem.f, t);
    lhs_diag = op.diag.array() + shift;
    lhs_diag -= sample_reaction(op, problem.c, t);
    solve_tridiagonal(lhs_diag, op.off, rhs, pivot);
    states.col(static_cast<Eigen::Index>(n)) = rhs;
    mem.push(rhs - prev);
  }
  return Trajectory::field(grid, std::move(states), op.h);
}

Trajectory modal_oracle(const MixedProblem& problem, std::span<const double> times, const ModalOptions& opts) {
  problem.validate();
  require(problem.spec.constant_coefficients(), "modal_oracle: q must be constant");
  const auto cv = problem.c.constant_value();
  require(cv.has_value(), "modal_oracle: c must be constant");
  require(*cv <= 0.0, "modal_oracle: c must be <= 0");
  require(!problem.f, "modal_oracle: source term must be absent");
  require(!times.empty(), "modal_oracle: need at least one time");
  double t_min_pos = std::numeric_limits<double>::infinity();
  double t_max = 0.0;
  for (double t : times) {
    require(t >= 0.0 && std::isfinite(t), "modal_oracle: times must be >= 0");
    if (t > 0.0) t_min_pos = std::min(t_min_pos, t);
    t_max = std::max(t_max, t);
  }

  const EllipticOp1D& op = problem.op;
  const Eigen::VectorXd d = op.project(problem.u0);
  const auto n_modes = static_cast<Eigen::Index>(op.n_x);
  const auto n_t = static_cast<Eigen::Index>(times.size());
  Eigen::MatrixXd amp = Eigen::MatrixXd::Zero(n_modes, n_t);

  const auto& terms = problem.spec.terms;
  const bool pure_exp = terms.empty() || (terms.size() == 1 && *terms.front().q.constant_value() == 0.0);
  std::optional<TimeGrid> fine;
  if (!pure_exp && terms.size() > 1 && t_max > 0.0) fine = TimeGrid::from_step(t_max, opts.multi_term_tau);

  parallel_for(op.n_x, [&](std::size_t kk) {
    const auto k = static_cast<Eigen::Index>(kk);
    if (d(k) == 0.0) return;
    const double lambda = op.eigenvalues(k) - *cv;
    std::vector<double> v(times.size(), d(k));
    if (pure_exp) {
      for (std::size_t i = 0; i < times.size(); ++i) v[i] = d(k) * std::exp(-lambda * times[i]);
    } else if (terms.size() == 1) {
      std::vector<double> pos;
      for (double t : times)
        if (t > 0.0) pos.push_back(t);
      if (!pos.empty()) {
        const auto params = fracode::SpectralDensity::make(terms.front().alpha, *terms.front().q.constant_value(),
                                                           lambda, t_min_pos);
        const Trajectory s = fracode::solve_spectral(params, d(k), pos);
        std::size_t p = 0;
        for (std::size_t i = 0; i < times.size(); ++i)
          if (times[i] > 0.0) v[i] = s.value(p++);
      }
    } else if (fine) {
      fracode::FracOdeProblem scalar;
      scalar.spec = problem.spec;
      scalar.lambda = lambda;
      scalar.v0 = d(k);
      scalar.horizon = fine->t_end();
      const Trajectory s = fracode::solve_l1(scalar, *fine);
      for (std::size_t i = 0; i < times.size(); ++i) {
        const double pos = times[i] / fine->step();
        const auto j = std::min(static_cast<std::size_t>(pos), fine->n_steps() - 1);
        const double frac = std::clamp(pos - static_cast<double>(j), 0.0, 1.0);
        v[i] = (1.0 - frac) * s.value(j) + frac * s.value(j + 1);
      }
    }
    for (Eigen::Index i = 0; i < n_t; ++i) amp(k, i) = v[static_cast<std::size_t>(i)];
  });

  Eigen::MatrixXd states = op.eigenvectors * amp;
  return Trajectory::field(std::vector<double>(times.begin(), times.end()), std::move(states), op.h);
}

Trajectory duhamel_source(const EllipticOp1D& op, const Eigen::VectorXd& u0, const Field& f, const TimeGrid& grid) {
  require(u0.size() == static_cast<Eigen::Index>(op.n_x), "duhamel_source: u0 size does not match the grid");
  Eigen::MatrixXd g;
  if (f) {
    g.resize(static_cast<Eigen::Index>(op.n_x), static_cast<Eigen::Index>(grid.size()));
    for (std::size_t n = 0; n < grid.size(); ++n)
      g.col(static_cast<Eigen::Index>(n)) = op.project(sample_field(op, f, grid[n]));
  }
  const Eigen::MatrixXd d = propagate_modes(op, op.project(u0), g, grid);
  return Trajectory::field(grid, op.eigenvectors * d, op.h);
}

PicardResult picard_solve(const MixedProblem& problem, const TimeGrid& grid, std::size_t max_iter, double tol,
                          bool throw_on_failure) {
  check_grid(grid, problem.horizon, "picard_solve");
  problem.validate_on(grid);
  require(tol > 0.0, "picard_solve: tol must be positive");
  require(max_iter >= 1, "picard_solve: max_iter must be >= 1");
  const EllipticOp1D& op = problem.op;
  const auto dim = static_cast<Eigen::Index>(op.n_x);
  const auto cols = static_cast<Eigen::Index>(grid.size());

  Eigen::MatrixXd c_samples(dim, cols);
  for (Eigen::Index n = 0; n < cols; ++n) c_samples.col(n) = sample_reaction(op, problem.c, grid[static_cast<std::size_t>(n)]);

  const Eigen::MatrixXd big_f = duhamel_source(op, problem.u0, problem.f, grid).states();
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(dim);

  // F + K u with K u = int e^{-(t-s)A} (c u - sum q D^a u)(s) ds.
  const auto step = [&](const Eigen::MatrixXd& u) {
    Eigen::MatrixXd field = c_samples.cwiseProduct(u);
    if (!problem.spec.terms.empty()) field -= fraccalc::multi_term_apply(u, problem.spec, grid);
    const Eigen::MatrixXd g = h_project(op, field);
    return Eigen::MatrixXd(big_f + op.eigenvectors * propagate_modes(op, zero, g, grid));
  };

  PicardResult result{Trajectory::field(grid, big_f, op.h), {}};
  PicardReport& rep = result.report;
  Eigen::MatrixXd u = big_f;
  for (std::size_t m = 1; m <= max_iter; ++m) {
    Eigen::MatrixXd next = step(u);
    const double inc = sup_norm_diff(op, next, u);
    if (!rep.increments.empty()) rep.factors.push_back(rep.increments.back() > 0.0 ? inc / rep.increments.back() : 0.0);
    rep.increments.push_back(inc);
    rep.iterations = m;
    u = std::move(next);
    if (inc <= tol) {
      rep.converged = true;
      break;
    }
  }
  rep.residual = sup_norm_diff(op, step(u), u);
  result.solution = Trajectory::field(grid, u, op.h);
  if (!rep.converged && throw_on_failure) {
    const double last = rep.factors.empty() ? 0.0 : rep.factors.back();
    throw NonConvergence("picard_solve: no convergence in " + std::to_string(max_iter) +
                             " iterations (last contraction factor " + std::to_string(last) +
                             "); restart on shorter subintervals",
                         last);
  }
  return result;
}

DecayRun decay_run(const MixedProblem& problem, std::span<const double> t_points, const DecayOptions& opts) {
  problem.validate();
  require(problem.decay_mode, "decay_run: problem must be in decay mode (f absent, c <= 0)");
  require(!t_points.empty(), "decay_run: need at least one time");
  double t_max = 0.0;
  for (double t : t_points) {
    require(t > 0.0 && std::isfinite(t), "decay_run: times must be positive");
    t_max = std::max(t_max, t);
  }

  DecayRun out{Trajectory::scalar(std::vector<double>{0.0}, std::vector<double>{0.0}), {}, 0.0, {}};
  out.alpha = problem.spec.lowest_order();
  const bool modal = problem.spec.constant_coefficients() && problem.spec.terms.size() <= 1 &&
                     problem.c.constant_value().has_value();
  if (modal) {
    out.route = "modal";
    out.trajectory = modal_oracle(problem, t_points);
  } else {
    out.route = "stepper";
    require(t_max <= opts.stepper_horizon_cap,
            "decay_run: stepper route is capped at t = " + std::to_string(opts.stepper_horizon_cap));
    MixedProblem p = problem;
    p.horizon = t_max;
    const TimeGrid grid = TimeGrid::from_step(t_max, opts.stepper_tau);
    const Trajectory full = solve_mixed_l1(p, grid);
    Eigen::MatrixXd states(full.dim(), static_cast<Eigen::Index>(t_points.size()));
    for (std::size_t i = 0; i < t_points.size(); ++i) {
      const double pos = t_points[i] / grid.step();
      const auto j = std::min(static_cast<std::size_t>(pos), grid.n_steps() - 1);
      const double frac = std::clamp(pos - static_cast<double>(j), 0.0, 1.0);
      states.col(static_cast<Eigen::Index>(i)) = (1.0 - frac) * full.state(j) + frac * full.state(j + 1);
    }
    out.trajectory = Trajectory::field(std::vector<double>(t_points.begin(), t_points.end()), std::move(states),
                                       problem.op.h);
  }
  const double n0 = problem.op.norm(problem.u0);
  out.ratio.resize(t_points.size(), 0.0);
  if (n0 > 0.0)
    for (std::size_t i = 0; i < t_points.size(); ++i)
      out.ratio[i] = out.trajectory.norms()[i] * std::pow(t_points[i], out.alpha) / n0;
  return out;
}

}  // namespace fracmix::pde1d
