#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>

#include "fracmix/fraccalc.hpp"
#include "fracmix/trajectory.hpp"

namespace fracmix::fracode {

/// v' + sum_j q_j(t) D^{alpha_j} v + lambda v = f(t), v(0) = v0.
struct FracOdeProblem {
  fraccalc::OrderSpec spec;
  double lambda = 0.0;
  double v0 = 1.0;
  std::function<double(double)> forcing;  // empty means f = 0
  double horizon = 1.0;

  void validate() const;
};

/// Implicit L1 / backward-Euler stepping on a uniform grid starting at 0.
Trajectory solve_l1(const FracOdeProblem& problem, const fraccalc::TimeGrid& grid);

/// Parameters of the relaxation density of v' + q1 D^alpha v + lambda v = 0.
struct SpectralDensity {
  double alpha = 0.5;
  double q1 = 1.0;
  double lambda = 1.0;
  double delta = 0.0;  // split point, lambda - delta - q1 delta^alpha >= lambda/2
  double r_max = 0.0;  // truncation radius of the density integral

  void validate() const;

  /// Split point from split_point() and the smallest r_max whose certified
  /// tail is within budget for every t >= t_min.
  static SpectralDensity make(double alpha, double q1, double lambda, double t_min);

  /// Single-term, constant-q, unforced problems only.
  static SpectralDensity from_problem(const FracOdeProblem& problem, double t_min);
};

/// Root of r + q1 r^alpha = lambda/2 in (0, lambda], from below.
double split_point(double alpha, double q1, double lambda);

/// H(r) = lambda q1 r^{alpha-1} sin(alpha pi) / (pi |(lambda - r) + q1 r^alpha e^{i alpha pi}|^2).
double spectral_density(const SpectralDensity& params, double r);

/// Certified bound on |v0|^{-1} |integral_{r_max}^inf e^{-r t} H(r) dr|.
double spectral_tail_bound(const SpectralDensity& params, double t);

/// Relative budget for the truncated tail, checked at the smallest time.
inline constexpr double kSpectralTailBudget = 1e-10;

/// v(t) = v0 integral_0^inf e^{-r t} H(r) dr at each (positive) time.
Trajectory solve_spectral(const SpectralDensity& params, double v0, std::span<const double> times);

struct DecayConstants {
  double c_upper = 0.0;
  double c_lower = 0.0;
  double t0 = 1.0;
  double alpha = 0.5;  // decay exponent the constants refer to
};

/// c_lower |v0| t^{-alpha} <= |v(t)| <= c_upper |v0| t^{-alpha} for t >= t0.
DecayConstants decay_constants(const SpectralDensity& params, double t0);

enum class Verdict { pass, fail, inconclusive };
const char* verdict_name(Verdict v);

struct MaxPrincipleReport {
  Verdict verdict = Verdict::pass;
  bool hypotheses_hold = false;
  double kappa = 1.0;         // reported amplification of tol
  double max_value = 0.0;     // max_n w(t_n)
  double max_residual = 0.0;  // max_n (w' + sum q D^a w + lambda w)(t_n), n >= 1
  std::size_t worst_index = 0;
};

/// Discrete check of the maximum principle: whenever the residual is <= tol
/// and w(0) <= tol, the whole trajectory must stay below tol * kappa.
MaxPrincipleReport max_principle_check(const Trajectory& w, const fraccalc::OrderSpec& spec, double lambda,
                                       double tol);

struct SignReport {
  Verdict verdict = Verdict::pass;
  double max_derivative = 0.0;  // max_n D^alpha z(t_n)
  std::size_t worst_index = 0;
  std::string reason;
};

/// For z >= 0 with z' + q(t) D^alpha z + lambda z <= 0, checks D^alpha z <= tol
/// at every node. Needs a single order with q_lower > 0 and lambda > 0.
SignReport frac_derivative_sign_check(const Trajectory& z, const fraccalc::OrderSpec& spec, double lambda,
                                      double tol);

}  // namespace fracmix::fracode
