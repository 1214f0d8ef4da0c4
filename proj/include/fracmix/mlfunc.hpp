#pragma once

#include <complex>
#include <span>

namespace fracmix::mlfunc {

/// Parameters of the two-parameter Mittag-Leffler function
/// E_{a,g}(z) = sum_k z^k / Gamma(a k + g).
struct MLParams {
  double alpha = 0.5;
  double gamma = 1.0;
  /// Nominal switch between the power series and the far-field methods.
  double series_radius = 5.0;
  /// Absolute error target, in (0, 1e-6].
  double target_tol = 1e-12;

  void validate() const;
};

enum class Regime {
  automatic,
  series,         // truncated power series
  negative_axis,  // Laplace-density integral (alpha < 1) or Kummer series (alpha == 1), z < 0
  asymptotic,     // algebraic expansion for large |z|
};

const char* regime_name(Regime r);

/// E_{alpha,gamma}(z) with absolute error at most target_tol (relative to
/// max(1, |E|) on the positive real axis, where E grows exponentially).
///
/// Inside series_radius the power series is used, unless its accumulated
/// term magnitude shows that cancellation would eat the tolerance. On the
/// negative real axis (alpha <= 1) the function is evaluated as the Laplace
/// transform of a real density; elsewhere the asymptotic expansion is used
/// with an error estimate. Throws EvaluationFailure when no regime meets the
/// tolerance and ValidationError for invalid parameters.
std::complex<double> mittag_leffler(const MLParams& params, std::complex<double> z);

/// Same, restricted to one regime (no fallback). Used to cross-check regimes.
std::complex<double> mittag_leffler(const MLParams& params, std::complex<double> z, Regime regime);

/// Real-axis convenience wrapper.
double mittag_leffler(const MLParams& params, double x);

struct DerivativeResiduals {
  double first_order = 0.0;  // |d/dt E_{a,1}(-mu t^a) + mu t^{a-1} E_{a,a}(-mu t^a)|
  double fractional = 0.0;   // |L1 d^a/dt^a E_{a,1}(-mu t^a) + mu E_{a,1}(-mu t^a)|
};

/// Discrete residuals of the two differentiation identities of
/// E_{a,1}(-mu t^a): central difference with step h for the first, the L1
/// scheme on a uniform grid of step ~h over [0, t] for the second.
DerivativeResiduals ml_derivative_residuals(double alpha, double mu, double t, double h);

/// Empirical sup over the samples of (1 + x) |E_{alpha,gamma}(-x)|.
double sector_constant(const MLParams& params, std::span<const double> xs);

}  // namespace fracmix::mlfunc
